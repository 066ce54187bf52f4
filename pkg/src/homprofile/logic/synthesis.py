"""Formulas and queries read off finite structures."""

from __future__ import annotations

import itertools
from collections import Counter

from ..homs import Atom, ConjunctiveQuery
from ..structures import ClassKind, Structure, StructureError, classify, directed_depths, tree_code
from .fo import FO, FAtom, FEq, FExists, FForall, FNot, f_and, f_iff, f_or, exists_many
from .formulas import And, Dia, Formula, FormulaError, Not, Prop, Top, conj, exactly, in_language


def _require_tree(T: Structure) -> None:
    if ClassKind.TREE not in classify(T).kinds:
        raise StructureError("expected a tree")


def tree_to_pml(T: Structure) -> Formula:
    """Disjunction-free positive existential formula whose query has ``T`` as canonical instance.

    Each state contributes the conjunction of its propositions (``true`` if
    none) and one diamond per child.
    """
    _require_tree(T)

    def go(s):
        marks = [Prop(p) for p in sorted(T.labels[s])] or [Top()]
        dias = [Dia(a, go(c)) for a in T.signature.actions for c in T.succ(s, a)]
        return conj(marks + dias)

    return go(T.distinguished)


def pml_to_cq(phi: Formula, signature) -> ConjunctiveQuery:
    """The conjunctive query of a disjunction-free positive existential formula."""
    if not in_language(phi, "pml"):
        raise FormulaError("expected a positive existential formula")
    atoms = []
    bound = []
    counter = itertools.count(1)

    def go(f, v):
        if isinstance(f, Top):
            return
        if isinstance(f, Prop):
            atoms.append(Atom(f.name, (v,)))
            return
        if isinstance(f, And):
            go(f.left, v)
            go(f.right, v)
            return
        if isinstance(f, Dia):
            y = f"y{next(counter)}"
            bound.append(y)
            atoms.append(Atom(f.action, (v, y)))
            go(f.sub, y)
            return
        raise FormulaError(f"{type(f).__name__} has no conjunctive query")

    go(phi, "x")
    return ConjunctiveQuery(signature, "x", tuple(bound), tuple(atoms))


def full_mark(label, props) -> Formula:
    """Conjunction fixing every proposition: ``p`` if in ``label``, else ``!p``."""
    return conj([Prop(p) if p in label else Not(Prop(p)) for p in props])


def tree_to_gml(T: Structure, k: int) -> Formula:
    """Graded formula true in a tree ``M`` iff ``M`` cut at depth ``k`` is isomorphic to ``T``.

    Per state: the full mark, then for every action the exact number of
    successors, then for every (action, child isomorphism type) the exact
    number of successors satisfying the child's own formula.
    """
    _require_tree(T)
    depth = classify(T).directed_depth
    if depth > k:
        raise StructureError(f"tree depth {depth} exceeds {k}")
    props = T.signature.props

    def go(s, r):
        parts = [full_mark(T.labels[s], props)] if props else []
        if r > 0:
            for a in T.signature.actions:
                kids = T.succ(s, a)
                parts.append(exactly(a, len(kids), Top()))
                by_type = Counter(tree_code(T, c) for c in kids)
                rep = {tree_code(T, c): c for c in kids}
                for code in sorted(by_type):
                    parts.append(exactly(a, by_type[code], go(rep[code], r - 1)))
        return _flatten(parts)

    return go(T.distinguished, k)


def _flatten(parts) -> Formula:
    # ``exactly`` returns small conjunctions; splice them so the result reads flat
    flat = []
    for p in parts:
        if isinstance(p, And) and isinstance(p.right, Not) and isinstance(p.left, Dia):
            flat.extend([p.left, p.right])
        else:
            flat.append(p)
    return conj(flat)


def _edge(sig, u, v) -> FO:
    return f_or(*(FAtom(a, (u, v)) for a in sig.actions))


def _reach_within(sig, x: str, y: str, steps: int, fresh) -> FO:
    # y is reachable from x by a directed path of length at most ``steps``
    if steps == 0:
        return FEq(x, y)
    z = next(fresh)
    return f_or(FEq(x, y), FExists(z, f_and(_edge(sig, x, z), _reach_within(sig, z, y, steps - 1, fresh))))


def gsub_description_fo(N: Structure) -> FO:
    """``psi(x1)``: true at ``a`` iff the submodel generated by ``a`` is isomorphic to ``N``.

    Names ``x1..xn`` for the states of ``N`` (``x1`` the distinguished one),
    requires them to be distinct and to be exactly the states reachable from
    ``x1`` within ``n`` steps, and fixes the full atomic diagram: every
    proposition and every edge, present or absent.
    """
    if ClassKind.PG not in classify(N).kinds:
        raise StructureError("expected a point-generated structure")
    sig = N.signature
    depth = directed_depths(N)
    order = sorted(range(N.n), key=lambda m: (depth[m], m))
    name = {m: f"x{i + 1}" for i, m in enumerate(order)}
    xs = [name[m] for m in order]
    fresh = (f"z{i}" for i in itertools.count(1))
    distinct = [FNot(FEq(a, b)) for a, b in itertools.combinations(xs, 2)]
    reach = FForall("y", f_iff(_reach_within(sig, xs[0], "y", N.n, fresh), f_or(*(FEq("y", x) for x in xs))))
    diagram = []
    for m in order:
        for p in sig.props:
            at = FAtom(p, (name[m],))
            diagram.append(at if p in N.labels[m] else FNot(at))
    for a in sig.actions:
        for u in order:
            for v in order:
                at = FAtom(a, (name[u], name[v]))
                diagram.append(at if (u, v) in N.edges[a] else FNot(at))
    return exists_many(xs[1:], f_and(*distinct, reach, *diagram))
