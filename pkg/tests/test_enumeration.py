import itertools
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from homprofile.enumeration import (
    EnumerationBudgetError,
    all_structures,
    enumerate_class,
    random_structure,
)
from homprofile.homs import morphism_check
from homprofile.structures import ClassKind, ClassTag, Signature, Structure, canonical_code, classify
from strategies import SIG, SIG2

KINDS = list(ClassKind)


def _serial(M, perm):
    labels = [None] * M.n
    for m in range(M.n):
        labels[perm[m]] = tuple(sorted(M.labels[m]))
    edges = tuple(tuple(sorted((perm[u], perm[v]) for u, v in M.edges[a])) for a in M.signature.actions)
    return (tuple(labels), edges, perm[M.distinguished])


def brute_key(M):
    """Isomorphism-invariant key: least serialization over every renaming."""
    return min(_serial(M, p) for p in itertools.permutations(range(M.n)))


def all_labelled(sig, n):
    """Every pointed structure on states 0..n-1, no deduplication."""
    pairs = [(u, v) for u in range(n) for v in range(n)]
    label_sets = [frozenset(c) for r in range(len(sig.props) + 1) for c in itertools.combinations(sig.props, r)]
    edge_sets = [[pr for pr, bit in zip(pairs, bits) if bit] for bits in itertools.product((0, 1), repeat=len(pairs))]
    for labels in itertools.product(label_sets, repeat=n):
        for per_action in itertools.product(edge_sets, repeat=len(sig.actions)):
            edges = dict(zip(sig.actions, per_action))
            for d in range(n):
                yield Structure(sig, n, labels, edges, d)


@lru_cache(maxsize=None)
def brute_classes(props, actions, max_states):
    """key -> Classification for each isomorphism class, computed the slow way."""
    sig = Signature(props, actions)
    seen = {}
    for n in range(1, max_states + 1):
        for M in all_labelled(sig, n):
            k = brute_key(M)
            if k not in seen:
                seen[k] = (M, classify(M))
    return seen


def brute_slice_count(sig, tag, max_states):
    return sum(
        1
        for M, info in brute_classes(sig.props, sig.actions, max_states).values()
        if M.n <= max_states and info.satisfies(tag)
    )


# counts at three states over one proposition and one action, frozen after
# agreeing with the brute-force oracle above
FROZEN_THREE = {ClassKind.TREE: 20, ClassKind.FOREST: 46, ClassKind.ACYCLIC: 62, ClassKind.PG: 1092, ClassKind.CONNECTED: 1828}


# ---------------------------------------------------------------------------
# frozen examples


def test_small_tree_slices():
    assert len(enumerate_class(ClassTag(ClassKind.TREE, 0), SIG, 2)) == 2
    slice1 = enumerate_class(ClassTag(ClassKind.TREE, 1), SIG, 2)
    assert len(slice1) == 6
    assert [M.n for M in slice1] == [1, 1, 2, 2, 2, 2]


def test_single_state_connected_slice():
    members = enumerate_class(ClassTag(ClassKind.CONNECTED), SIG, 1, 1)
    assert len(members) == 4
    loops = sorted(len(M.edges["R"]) for M in members)
    assert loops == [0, 0, 1, 1]


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_frozen_three_state_counts(kind):
    assert len(enumerate_class(ClassTag(kind), SIG, 3)) == FROZEN_THREE[kind]


def test_all_structures_count():
    assert len(all_structures(SIG, 3)) == 2180


def test_budget_refusal_names_the_budget():
    with pytest.raises(EnumerationBudgetError, match="8 states|limited to 7"):
        enumerate_class(ClassTag(ClassKind.TREE), SIG, 8)
    with pytest.raises(EnumerationBudgetError, match="bits|budget"):
        enumerate_class(ClassTag(ClassKind.CONNECTED), SIG, 5)


def test_bad_bounds_are_rejected():
    with pytest.raises(ValueError):
        enumerate_class(ClassTag(ClassKind.TREE), SIG, 0)
    with pytest.raises(ValueError):
        enumerate_class(ClassTag(ClassKind.TREE), SIG, 2, -1)


def test_random_examples():
    a = random_structure(ClassTag(ClassKind.TREE), SIG, 5, 1)
    assert a == random_structure(ClassTag(ClassKind.TREE), SIG, 5, 1)
    assert a.n == 5 and ClassKind.TREE in classify(a).kinds
    single = random_structure(ClassTag(ClassKind.PG), SIG, 1, 3)
    assert single.n == 1 and single.edges["R"] <= {(0, 0)}
    f = random_structure(ClassTag(ClassKind.FOREST), SIG, 4, 7)
    assert ClassKind.FOREST in classify(f).kinds


def test_random_gives_up_on_infeasible_requests():
    with pytest.raises(ValueError):
        random_structure(ClassTag(ClassKind.TREE, 0), SIG, 3, 0, attempts=20)


# ---------------------------------------------------------------------------
# oracles and properties


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
@pytest.mark.parametrize("depth", [None, 0, 1, 2])
def test_slices_are_complete_at_three_states(kind, depth):
    tag = ClassTag(kind, depth)
    assert len(enumerate_class(tag, SIG, 3)) == brute_slice_count(SIG, tag, 3)


def test_frozen_counts_match_the_oracle():
    for kind, count in FROZEN_THREE.items():
        assert brute_slice_count(SIG, ClassTag(kind), 3) == count
    assert len(brute_classes(SIG.props, SIG.actions, 3)) == 2180


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_slices_are_complete_with_two_actions(kind):
    sig = Signature(("p",), ("R", "S"))
    assert len(enumerate_class(ClassTag(kind), sig, 2)) == brute_slice_count(sig, ClassTag(kind), 2)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_members_are_in_class_and_pairwise_non_isomorphic(kind):
    members = list(enumerate_class(ClassTag(kind, 2), SIG, 3))
    assert all(classify(M).satisfies(ClassTag(kind, 2)) for M in members)
    assert len({brute_key(M) for M in members}) == len(members)
    small = [M for M in members if M.n <= 2]
    for A, B in itertools.combinations(small, 2):
        assert not morphism_check("isomorphic", A, B)


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: k.value)
def test_order_is_by_size_then_code_and_reproducible(kind):
    members = list(enumerate_class(ClassTag(kind), SIG2, 2))
    assert [M.n for M in members] == sorted(M.n for M in members)
    again = list(enumerate_class(ClassTag(kind), SIG2, 2))
    assert members == again


def test_trees_sit_inside_the_other_classes():
    trees = {canonical_code(M) for M in enumerate_class(ClassTag(ClassKind.TREE, 2), SIG, 4)}
    for kind in (ClassKind.ACYCLIC, ClassKind.PG, ClassKind.FOREST):
        others = {canonical_code(M) for M in enumerate_class(ClassTag(kind, 2), SIG, 4)}
        assert trees <= others


def test_larger_tree_slices_match_filtering():
    """Constructive trees agree with filtering all four-state structures."""
    for depth in (None, 1, 2):
        tag = ClassTag(ClassKind.TREE, depth)
        built = {canonical_code(M) for M in enumerate_class(tag, SIG, 4)}
        filtered = {canonical_code(M) for M in all_structures(SIG, 4) if classify(M).satisfies(tag)}
        assert built == filtered


@given(
    st.sampled_from(KINDS),
    st.integers(1, 5),
    st.integers(0, 2**63),
)
def test_random_members_belong_to_their_class(kind, n, seed):
    M = random_structure(ClassTag(kind), SIG2, n, seed)
    assert M.n == n
    assert kind in classify(M).kinds
    assert M == random_structure(ClassTag(kind), SIG2, n, seed)
