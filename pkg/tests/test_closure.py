import pytest
from hypothesis import given, strategies as st

from homprofile.closure import separating_tree
from homprofile.enumeration import enumerate_class
from homprofile.structures import ClassKind, ClassTag, classify, tree_code
from homprofile.transforms import chain, make_clique, unravel
from strategies import SIG, structures
from test_homs import brute_homs

TREES_UP_TO_FIVE = {d: list(enumerate_class(ClassTag(ClassKind.TREE, d), SIG, 5)) for d in range(4)}


def brute_separated(M, N, depth, max_size, boolean=False):
    for T in TREES_UP_TO_FIVE[depth]:
        if T.n > max_size:
            continue
        a, b = len(brute_homs(T, M)), len(brute_homs(T, N))
        if boolean:
            a, b = a > 0, b > 0
        if a != b:
            return True
    return False


def test_figure3_pair(figure3):
    M, N = figure3
    assert separating_tree(M, N, "bool", depth=3) is None
    T = separating_tree(M, N, "nat", depth=1)
    assert T is not None and T.n == 2


def test_cliques_are_never_separated_by_booleans():
    assert separating_tree(make_clique(1), make_clique(3), "bool") is None
    T = separating_tree(make_clique(1), make_clique(3), "nat", depth=1, max_size=2)
    assert T == chain(2, labels={})


def test_bad_arguments(figure3):
    M, N = figure3
    with pytest.raises(ValueError):
        separating_tree(M, N, "modp:3")
    with pytest.raises(ValueError):
        separating_tree(M, N, "bool", depth=2, max_size=3)
    with pytest.raises(ValueError):
        separating_tree(M, N, "nat", max_size=3)


@given(structures(max_states=3), structures(max_states=3), st.integers(0, 2), st.integers(1, 5))
def test_size_bounded_separation_matches_enumeration(M, N, depth, size):
    T = separating_tree(M, N, "nat", depth=depth, max_size=size)
    assert (T is not None) == brute_separated(M, N, depth, size)
    if T is not None:
        assert T.n <= size and classify(T).directed_depth <= depth
        assert len(brute_homs(T, M)) != len(brute_homs(T, N))


@given(structures(max_states=3), structures(max_states=3), st.integers(0, 3))
def test_unbounded_separation_matches_unraveling(M, N, depth):
    T = separating_tree(M, N, "nat", depth=depth)
    same_unravel = tree_code(unravel(M, depth)) == tree_code(unravel(N, depth))
    assert (T is None) == same_unravel
    if T is not None:
        assert classify(T).directed_depth <= depth
        assert len(brute_homs(T, M)) != len(brute_homs(T, N))
    elif depth <= 3:
        assert not brute_separated(M, N, depth, 5)


def _bounded_simulates(M, N, rounds, m=None, n=None):
    """Direct recursion on the definition of a depth-bounded forth simulation."""
    m = M.distinguished if m is None else m
    n = N.distinguished if n is None else n
    if not M.labels[m] <= N.labels[n]:
        return False
    if rounds == 0:
        return True
    return all(
        any(_bounded_simulates(M, N, rounds - 1, s, t) for t in N.succ(n, a))
        for a in M.signature.actions
        for s in M.succ(m, a)
    )


@given(structures(max_states=3), structures(max_states=3), st.integers(0, 3))
def test_boolean_separation_matches_bounded_simulation(M, N, depth):
    T = separating_tree(M, N, "bool", depth=depth)
    mutual = _bounded_simulates(M, N, depth) and _bounded_simulates(N, M, depth)
    assert (T is None) == mutual
    if T is not None:
        assert bool(brute_homs(T, M)) != bool(brute_homs(T, N))
    else:
        assert not brute_separated(M, N, depth, 5, boolean=True)
