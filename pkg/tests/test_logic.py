import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from homprofile.enumeration import all_structures, enumerate_class
from homprofile.harness import checker_cross_validation
from homprofile.homs import canonical_instance, isomorphic
from homprofile.logic import (
    FormulaError,
    ParseError,
    check,
    equivalent,
    eval_fo,
    gsub_description_fo,
    in_language,
    modal_depth,
    mutual_simulation,
    parse,
    pml_to_cq,
    satisfying_states,
    simulation_fixpoint,
    standard_translation,
    to_text,
    tree_to_gml,
    tree_to_pml,
)
from homprofile.logic.formulas import (
    And,
    At,
    BackDia,
    Bind,
    Bot,
    Box,
    Dia,
    Global,
    Not,
    Or,
    Prop,
    Top,
    Var,
    random_formula,
)
from homprofile.structures import ClassKind, ClassTag, Signature, StructureError, classify, structure
from homprofile.transforms import chain, gsub, make_clique, restrict_depth, unravel
from strategies import SIG, structures, trees
from test_homs import brute_homs

SIGPQ = Signature(("p", "q"), ("R", "S"))
VARS = ("x", "y")


# ---------------------------------------------------------------------------
# formula strategies and a reference semantics


def formulas(sig=SIGPQ, hybrid=True, backward=True, glob=True, graded=True, max_leaves=12):
    leaves = [st.just(Top()), st.just(Bot()), st.sampled_from([Prop(p) for p in sig.props])]
    if hybrid:
        leaves.append(st.sampled_from([Var(v) for v in VARS]))
    grades = st.integers(1, 3) if graded else st.just(1)
    acts = st.sampled_from(sig.actions)

    def extend(sub):
        options = [
            st.builds(Not, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Dia, acts, sub, grades),
            st.builds(Box, acts, sub),
        ]
        if backward:
            options.append(st.builds(BackDia, acts, sub, grades))
        if glob:
            options.append(st.builds(Global, sub, grades))
        if hybrid:
            options.append(st.builds(Bind, st.sampled_from(VARS), sub))
            options.append(st.builds(At, st.sampled_from(VARS), sub))
        return st.one_of(options)

    base = st.recursive(st.one_of(leaves), extend, max_leaves=max_leaves)
    if hybrid:
        # close every world variable with an outer binder
        return base.map(lambda f: Bind("x", Bind("y", f)))
    return base


def ref_ext(M, phi, g):
    """Set of states satisfying ``phi`` under ``g``, clause by clause."""
    everything = set(range(M.n))

    def successors(m, a):
        return {v for u, v in M.edges[a] if u == m}

    def predecessors(m, a):
        return {u for u, v in M.edges[a] if v == m}

    if isinstance(phi, Top):
        return everything
    if isinstance(phi, Bot):
        return set()
    if isinstance(phi, Prop):
        return {m for m in everything if phi.name in M.labels[m]}
    if isinstance(phi, Var):
        return {g[phi.name]}
    if isinstance(phi, Not):
        return everything - ref_ext(M, phi.sub, g)
    if isinstance(phi, And):
        return ref_ext(M, phi.left, g) & ref_ext(M, phi.right, g)
    if isinstance(phi, Or):
        return ref_ext(M, phi.left, g) | ref_ext(M, phi.right, g)
    if isinstance(phi, Dia):
        inner = ref_ext(M, phi.sub, g)
        return {m for m in everything if len(successors(m, phi.action) & inner) >= phi.grade}
    if isinstance(phi, Box):
        inner = ref_ext(M, phi.sub, g)
        return {m for m in everything if successors(m, phi.action) <= inner}
    if isinstance(phi, BackDia):
        inner = ref_ext(M, phi.sub, g)
        return {m for m in everything if len(predecessors(m, phi.action) & inner) >= phi.grade}
    if isinstance(phi, Global):
        return everything if len(ref_ext(M, phi.sub, g)) >= phi.grade else set()
    if isinstance(phi, Bind):
        return {m for m in everything if m in ref_ext(M, phi.sub, {**g, phi.var: m})}
    if isinstance(phi, At):
        return everything if g[phi.var] in ref_ext(M, phi.sub, g) else set()
    raise TypeError(phi)


# ---------------------------------------------------------------------------
# parser


def test_parse_examples():
    sig = Signature(("p", "q"), ("R",))
    assert parse("<R>>=2 p", sig) == Dia("R", Prop("p"), 2)
    assert parse("down x. <R> x", sig) == Bind("x", Dia("R", Var("x")))
    assert parse("E>=1 (p & !q)", sig) == Global(And(Prop("p"), Not(Prop("q"))), 1)
    assert parse("<~R>>=3 true", sig) == BackDia("R", Top(), 3)
    assert parse("[R] p | q", sig) == Or(Box("R", Prop("p")), Prop("q"))
    assert parse("@x p", sig, variables=["x"]) == At("x", Prop("p"))


def test_binder_extends_to_the_right_and_clashes_are_renamed():
    sig = Signature(("p", "x"), ("R",))
    f = parse("down y. p & y", sig)
    assert f == Bind("y", And(Prop("p"), Var("y")))
    g = parse("down x. <R> x", sig)
    assert isinstance(g, Bind) and g.var != "x"
    assert g.sub == Dia("R", Var(g.var))


@pytest.mark.parametrize(
    "text, where",
    [("<R p", 0), ("p &", 3), ("<S> p", 0), ("down x.", 7), ("E>=0 p", 0), ("r", 0), ("@x p", 1), ("p )", 2)],
)
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as info:
        parse(text, Signature(("p", "q"), ("R",)))
    assert info.value.pos == where
    assert "position" in str(info.value)


@given(formulas())
def test_print_parse_round_trip(phi):
    assert parse(to_text(phi), SIGPQ) == phi


@given(formulas(hybrid=False))
def test_printer_is_stable(phi):
    text = to_text(phi)
    assert to_text(parse(text, SIGPQ)) == text


# ---------------------------------------------------------------------------
# model checking


def test_check_examples(figure3):
    M, N = figure3
    two = parse("<R>>=2 true", SIG)
    assert check(M, {}, two) and not check(N, {}, two)
    loop = structure(("p",), ("R",), 1, {0: ["p"]}, [(0, 0)])
    assert check(loop, {}, parse("down x. <R> x", SIG))
    assert check(M, {}, Top())


def test_unbound_variable_is_an_error():
    with pytest.raises(FormulaError):
        check(chain(1), {}, Var("x"))
    assert check(chain(1), {"x": 0}, Var("x"))


def test_backward_and_global_clauses():
    M = structure(("p",), ("R",), 3, {1: ["p"], 2: ["p"]}, [(1, 0), (2, 0)])
    assert check(M, {}, parse("<~R>>=2 p", SIG))
    assert not check(M, {}, parse("<~R>>=3 true", SIG))
    assert check(M, {}, parse("E>=2 p", SIG))
    assert satisfying_states(M, parse("E>=3 p", SIG)) == frozenset()


@given(structures(sig=SIGPQ, max_states=3), formulas())
def test_checker_matches_reference_semantics(M, phi):
    expected = ref_ext(M, phi, {})
    assert satisfying_states(M, phi) == frozenset(expected)


@given(structures(sig=SIGPQ, max_states=4))
def test_binder_names_the_current_state(M):
    assert check(M, {}, parse("down x. x", SIGPQ))
    assert satisfying_states(M, Bind("x", At("x", Var("x")))) == frozenset(range(M.n))


# ---------------------------------------------------------------------------
# standard translation


def test_standard_translation_examples():
    assert str(standard_translation(parse("<R> p", SIG))) == "exists y1 (R(x,y1) & p(y1))"
    assert str(standard_translation(parse("p", SIG))) == "p(x)"
    box = standard_translation(parse("[R] p", SIG))
    assert eval_fo(structure(("p",), ("R",), 2), box, {"x": 0})


def test_translation_rejects_other_languages():
    with pytest.raises(FormulaError):
        standard_translation(parse("<R>>=2 p", SIG))
    with pytest.raises(FormulaError):
        standard_translation(parse("down x. x", SIG))


@given(structures(sig=SIGPQ, max_states=4), formulas(hybrid=False, backward=False, glob=False, graded=False))
def test_standard_translation_agrees_with_checker(M, phi):
    for m in range(M.n):
        assert check(M, {}, phi, m) == eval_fo(M, standard_translation(phi), {"x": m})


# ---------------------------------------------------------------------------
# witness formulas from trees


def test_tree_to_pml_examples():
    assert tree_to_pml(structure(("p",), ("R",), 1, {0: ["p"]})) == Prop("p")
    assert tree_to_pml(chain(2, labels={1: ["p"]})) == And(Top(), Dia("R", Prop("p")))
    fork = tree_to_pml(structure(("p",), ("R",), 3, edges=[(0, 1), (0, 2)]))
    assert fork == And(And(Top(), Dia("R", Top())), Dia("R", Top()))
    assert canonical_instance(pml_to_cq(fork, SIG)).n == 3
    with pytest.raises(StructureError):
        tree_to_pml(structure(("p",), ("R",), 1, edges=[(0, 0)]))


@given(trees(sig=SIGPQ, max_states=5))
def test_pml_round_trip_gives_back_the_tree(T):
    phi = tree_to_pml(T)
    assert in_language(phi, "pml")
    assert isomorphic(canonical_instance(pml_to_cq(phi, SIGPQ)), T)


@given(trees(max_states=4), structures(max_states=3))
def test_pml_satisfaction_is_hom_existence(T, M):
    assert check(M, {}, tree_to_pml(T)) == bool(brute_homs(T, M))


def test_tree_to_gml_examples():
    assert tree_to_gml(structure(("p",), ("R",), 1, {0: ["p"]}), 0) == Prop("p")
    assert tree_to_gml(structure(("p",), ("R",), 1), 0) == Not(Prop("p"))
    expected = parse("!p & <R> true & !<R>>=2 true & <R> p & !<R>>=2 p", SIG)
    assert tree_to_gml(chain(2, labels={1: ["p"]}), 1) == expected
    with pytest.raises(StructureError):
        tree_to_gml(chain(3), 1)


def test_tree_to_gml_characterizes_depth_slices():
    forest_of_trees = list(enumerate_class(ClassTag(ClassKind.TREE), SIG, 4))
    for k in range(3):
        cut = [restrict_depth(M, k) for M in forest_of_trees]
        for T in enumerate_class(ClassTag(ClassKind.TREE, k), SIG, 4):
            phi = tree_to_gml(T, k)
            assert modal_depth(phi) <= k and in_language(phi, "gml")
            for M, C in zip(forest_of_trees, cut):
                assert check(M, {}, phi) == isomorphic(C, T)


def test_tree_to_gml_with_two_actions():
    sig = Signature(("p",), ("R", "S"))
    members = list(enumerate_class(ClassTag(ClassKind.TREE), sig, 3))
    for k in range(3):
        for T in enumerate_class(ClassTag(ClassKind.TREE, k), sig, 3):
            phi = tree_to_gml(T, k)
            for M in members:
                assert check(M, {}, phi) == isomorphic(restrict_depth(M, k), T)


# ---------------------------------------------------------------------------
# generated-submodel descriptions


def test_gsub_description_examples():
    point = structure(("p",), ("R",), 1)
    loop = structure(("p",), ("R",), 1, edges=[(0, 0)])
    two_cycle = structure(("p",), ("R",), 2, edges=[(0, 1), (1, 0)])
    psi_point = gsub_description_fo(point)
    assert eval_fo(structure(("p",), ("R",), 2, edges=[(1, 0)]), psi_point, {"x1": 0})
    assert not eval_fo(chain(2), psi_point, {"x1": 0})
    psi_loop = gsub_description_fo(loop)
    assert eval_fo(loop, psi_loop, {"x1": 0}) and not eval_fo(two_cycle, psi_loop, {"x1": 0})
    psi_chain = gsub_description_fo(chain(2))
    assert eval_fo(chain(2), psi_chain, {"x1": 0}) and not eval_fo(chain(3), psi_chain, {"x1": 0})
    with pytest.raises(StructureError):
        gsub_description_fo(structure(("p",), ("R",), 2))


def test_gsub_description_matches_isomorphism_oracle():
    targets = [N for N in all_structures(SIG, 2) if ClassKind.PG in classify(N).kinds]
    targets.append(chain(3))
    targets.append(structure(("p",), ("R",), 3, {2: ["p"]}, [(0, 1), (0, 2), (2, 2)]))
    corpus = all_structures(SIG, 3)
    for N in targets:
        psi = gsub_description_fo(N)
        for M in corpus:
            assert eval_fo(M, psi, {"x1": M.distinguished}) == isomorphic(gsub(M), N)


@given(structures(sig=SIGPQ, max_states=4), formulas(backward=False, glob=False, graded=False))
def test_hybrid_formulas_only_see_the_generated_submodel(M, phi):
    assert in_language(phi, "hl")
    assert check(M, {}, phi) == check(gsub(M), {}, phi)


# ---------------------------------------------------------------------------
# simulations and equivalences


def test_simulation_examples(figure3):
    M, N = figure3
    assert simulation_fixpoint("bisimulation", make_clique(1), make_clique(2))[0]
    assert not mutual_simulation(M, N, kind="directed-simulation")
    ok, Z = simulation_fixpoint("directed-simulation", M, N)
    assert ok and Z == {(0, 0), (1, 1), (2, 1)}
    with pytest.raises(ValueError):
        simulation_fixpoint("weak", M, N)


def _brute_largest(kind, M, N):
    """Largest relation meeting the clauses, found by trying every relation from the top down."""
    pairs = [(m, n) for m in range(M.n) for n in range(N.n)]
    best = frozenset()
    for bits in itertools.product((1, 0), repeat=len(pairs)):
        Z = {pr for pr, b in zip(pairs, bits) if b}
        if len(Z) <= len(best):
            continue
        ok = True
        for m, n in Z:
            lm, ln = M.labels[m], N.labels[n]
            if (lm != ln) if kind == "bisimulation" else not lm <= ln:
                ok = False
                break
            for a in M.signature.actions:
                if any(not any((s, t) in Z for t in N.succ(n, a)) for s in M.succ(m, a)):
                    ok = False
                if kind != "simulation" and any(not any((s, t) in Z for s in M.succ(m, a)) for t in N.succ(n, a)):
                    ok = False
            if not ok:
                break
        if ok:
            best = frozenset(Z)
    return best


@pytest.mark.parametrize("kind", ["simulation", "directed-simulation", "bisimulation"])
@given(M=structures(max_states=2), N=structures(max_states=3))
def test_fixpoint_is_the_largest_relation(kind, M, N):
    assert simulation_fixpoint(kind, M, N)[1] == _brute_largest(kind, M, N)


def test_equivalence_examples(figure3):
    M, N = figure3
    assert equivalent(make_clique(1), make_clique(2), "ml")
    assert not equivalent(M, N, "mlplus")
    assert equivalent(M, N, "pml", 2)
    assert not equivalent(M, N, "gml", 1)
    with pytest.raises(ValueError):
        equivalent(M, N, "gml")
    with pytest.raises(ValueError):
        equivalent(M, N, "fo")


@given(structures(max_states=4), st.integers(0, 3))
def test_unraveling_is_graded_equivalent(M, k):
    assert equivalent(M, unravel(M, k), "gml", k)


@given(structures(sig=SIGPQ, max_states=4), formulas(hybrid=False, backward=False, glob=False))
def test_graded_formulas_cannot_see_past_their_depth(M, phi):
    k = modal_depth(phi)
    assert check(M, {}, phi) == check(unravel(M, k), {}, phi)


@given(structures(max_states=3), structures(max_states=3), formulas(sig=SIG, hybrid=False, backward=False, glob=False))
def test_graded_equivalence_is_sound_for_formulas(M, N, phi):
    if equivalent(M, N, "gml", modal_depth(phi)):
        assert check(M, {}, phi) == check(N, {}, phi)


@given(structures(max_states=3), structures(max_states=3), formulas(sig=SIG, hybrid=False, graded=False, glob=False))
def test_bisimilar_structures_agree_on_basic_formulas(M, N, phi):
    if in_language(phi, "ml") and equivalent(M, N, "ml"):
        assert check(M, {}, phi) == check(N, {}, phi)


def test_random_formulas_are_reproducible_and_bounded():
    a = random_formula(SIGPQ, 2, np.random.default_rng(5), graded=True)
    b = random_formula(SIGPQ, 2, np.random.default_rng(5), graded=True)
    assert a == b
    rng = np.random.default_rng(0)
    for _ in range(200):
        assert modal_depth(random_formula(SIGPQ, 3, rng)) <= 3


def test_checker_cross_validation_small_run():
    report = checker_cross_validation(samples=150, seed=3)
    assert report["ok"], report
    assert report["samples"] == 150
