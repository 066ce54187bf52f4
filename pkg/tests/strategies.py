"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from homprofile.structures import Signature, Structure

SIG = Signature(("p",), ("R",))
SIG2 = Signature(("p", "q"), ("R", "S"))


@st.composite
def structures(draw, sig=SIG, min_states=1, max_states=3, distinguished_zero=False):
    n = draw(st.integers(min_states, max_states))
    labels = [draw(st.sets(st.sampled_from(sig.props))) if sig.props else set() for _ in range(n)]
    pairs = [(u, v) for u in range(n) for v in range(n)]
    edges = {a: draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) for a in sig.actions}
    d = 0 if distinguished_zero else draw(st.integers(0, n - 1))
    return Structure(sig, n, labels, edges, d)


@st.composite
def trees(draw, sig=SIG, max_states=5):
    """Random trees: each non-root state picks an earlier parent and an action."""
    n = draw(st.integers(1, max_states))
    labels = [draw(st.sets(st.sampled_from(sig.props))) if sig.props else set() for _ in range(n)]
    edges = {a: [] for a in sig.actions}
    for v in range(1, n):
        parent = draw(st.integers(0, v - 1))
        edges[draw(st.sampled_from(sig.actions))].append((parent, v))
    return Structure(sig, n, labels, edges, 0)
