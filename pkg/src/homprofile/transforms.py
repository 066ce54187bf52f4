"""Structure transformations: depth slices, unravelings, generated submodels,
signature expansions, the down/flip pair, PG-augmentation and R_G-connections,
plus the generators used by the negative results."""

from __future__ import annotations

import functools
from typing import Optional

from .structures import (
    ClassKind,
    Expansion,
    Signature,
    Structure,
    StructureError,
    classify,
    connected_components,
    directed_depths,
    in_degrees,
    path_depths,
    structure,
)


# ---------------------------------------------------------------------------
# depth slices, unravelings, generated submodels


def restrict_depth(M: Structure, k: int, notion: str = "directed") -> Structure:
    """Induced substructure on the states of depth at most ``k``.

    ``notion`` is ``directed`` (needs a point-generated ``M``) or ``path``
    (undirected sigma-path depth, needs a connected ``M``).
    """
    if k < 0:
        raise ValueError("depth bound must be nonnegative")
    if notion == "directed":
        depth = directed_depths(M)
    elif notion == "path":
        depth = path_depths(M)
    else:
        raise ValueError(f"unknown depth notion {notion!r}")
    if len(depth) != M.n:
        kind = "point-generated" if notion == "directed" else "connected"
        raise StructureError(f"{notion} depth needs a {kind} structure")
    return M.induced(m for m, d in depth.items() if d <= k)


def unravel(M: Structure, k: int) -> Structure:
    """The depth-``k`` unraveling: directed walks from the distinguished state.

    State ``i`` is named by its walk (a tuple of states of ``M``); states are
    numbered breadth-first with the root walk at 0.
    """
    if k < 0:
        raise ValueError("unraveling depth must be nonnegative")
    acts = M.signature.actions
    walks = [(M.distinguished,)]
    edges = {a: [] for a in acts}
    frontier = [0]
    for _ in range(k):
        nxt = []
        for i in frontier:
            last = walks[i][-1]
            for a in acts:
                for u in M.succ(last, a):
                    walks.append(walks[i] + (u,))
                    j = len(walks) - 1
                    edges[a].append((i, j))
                    nxt.append(j)
        frontier = nxt
    labels = [M.labels[w[-1]] for w in walks]
    return Structure(M.signature, len(walks), labels, edges, 0, names=walks)


def unravel_size(M: Structure, k: int) -> int:
    """``|unr^k(M)|`` without materializing it (number of walks of length <= k)."""
    acts = M.signature.actions
    counts = [0] * M.n
    counts[M.distinguished] = 1
    total = 1
    for _ in range(k):
        nxt = [0] * M.n
        for u in range(M.n):
            if counts[u]:
                for a in acts:
                    for v in M.succ(u, a):
                        nxt[v] += counts[u]
        counts = nxt
        total += sum(counts)
    return total


def unravel_code(M: Structure, k: int, state: Optional[int] = None):
    """Canonical code of ``unr^k`` from ``state``, computed by memoized recursion.

    Equal codes mean isomorphic unravelings.  Agrees with
    ``tree_code(unravel(M, k))`` but never builds the tree.
    """
    acts = M.signature.actions

    @functools.lru_cache(maxsize=None)
    def code(m, d):
        lab = tuple(sorted(M.labels[m]))
        if d == 0:
            return (lab, ())
        return (lab, tuple(sorted((a, code(v, d - 1)) for a in acts for v in M.succ(m, a))))

    return code(M.distinguished if state is None else state, k)


def gsub(M: Structure, k: Optional[int] = None) -> Structure:
    """Substructure generated by the distinguished state (up to depth ``k``)."""
    depth = directed_depths(M)
    return M.induced(m for m, d in depth.items() if k is None or d <= k)


# ---------------------------------------------------------------------------
# signature expansions


def _fresh(base: Signature, stem: str) -> str:
    taken = set(base.props) | set(base.actions)
    name = stem
    while name in taken:
        name += "'"
    return name


def backward_signature(sig: Signature) -> Signature:
    """``sigma_B``: one fresh inverse action per base action."""
    if sig.derived is not None and sig.derived.mode == "backward":
        return sig
    taken = set(sig.props) | set(sig.actions)
    names = []
    for a in sig.actions:
        b = "B_" + a
        while b in taken:
            b += "'"
        taken.add(b)
        names.append((b, a))
    return Signature(sig.props, sig.actions + tuple(b for b, _ in names), Expansion("backward", sig, tuple(names)))


def global_signature(sig: Signature) -> Signature:
    """``sigma_G``: the base signature plus one fresh complete action."""
    if sig.derived is not None and sig.derived.mode == "global":
        return sig
    g = _fresh(sig, "G")
    return Signature(sig.props, sig.actions + (g,), Expansion("global", sig, ((g, None),)))


def base_signature(sig: Signature) -> Signature:
    return sig.derived.base if sig.derived is not None else sig


def inverse_names(sig: Signature) -> dict[str, str]:
    """Base action -> its inverse action name in a backward signature."""
    if sig.derived is None or sig.derived.mode != "backward":
        raise StructureError("not a backward-expanded signature")
    return {a: b for b, a in sig.derived.names}


def global_name(sig: Signature) -> str:
    if sig.derived is None or sig.derived.mode != "global":
        raise StructureError("not a globally expanded signature")
    return sig.derived.names[0][0]


def backward_expansion(M: Structure) -> Structure:
    """Add ``B_R = R^-1`` for every action ``R``; everything else is kept."""
    sig = backward_signature(M.signature)
    inv = inverse_names(sig)
    edges = dict(M.edges)
    for a, b in inv.items():
        edges[b] = [(v, u) for u, v in M.edges[a]]
    return Structure(sig, M.n, M.labels, edges, M.distinguished, M.names)


def global_expansion(M: Structure) -> Structure:
    """Add the complete relation ``R_G = dom x dom`` (self-pairs included)."""
    sig = global_signature(M.signature)
    edges = dict(M.edges)
    edges[global_name(sig)] = [(u, v) for u in range(M.n) for v in range(M.n)]
    return Structure(sig, M.n, M.labels, edges, M.distinguished, M.names)


# ---------------------------------------------------------------------------
# down / flip


def down_transform(T: Structure) -> Structure:
    """Turn a connected acyclic sigma-structure into a sigma_B-tree.

    Edges pointing away from the root stay; an edge ``R(m, n)`` pointing
    towards the root becomes ``B_R(n, m)``.
    """
    info = classify(T)
    if ClassKind.ACYCLIC not in info.kinds:
        raise StructureError("down_transform needs a connected acyclic structure")
    sig = backward_signature(T.signature)
    inv = inverse_names(sig)
    depth = path_depths(T)
    edges = {a: [] for a in sig.actions}
    for a, u, v in T.binary_facts():
        if depth[v] > depth[u]:
            edges[a].append((u, v))
        else:
            edges[inv[a]].append((v, u))
    return Structure(sig, T.n, T.labels, edges, T.distinguished, T.names)


def flip(S: Structure) -> Structure:
    """``R := R u B_R^-1`` and forget the inverse actions."""
    sig = S.signature
    if sig.derived is None or sig.derived.mode != "backward":
        raise StructureError("flip needs a structure over a backward-expanded signature")
    base = sig.derived.base
    inv = inverse_names(sig)
    edges = {a: set(S.edges[a]) | {(v, u) for u, v in S.edges[inv[a]]} for a in base.actions}
    return Structure(base, S.n, S.labels, edges, S.distinguished, S.names)


# ---------------------------------------------------------------------------
# exp / PG-augmentation


def reach(M: Structure) -> set[int]:
    return set(directed_depths(M))


def satisfies_p(M: Structure) -> bool:
    """Every transition from an unreachable into a reachable state is a base action."""
    sig = M.signature
    base = set(base_signature(sig).actions)
    r = reach(M)
    return all(a in base for a, u, v in M.binary_facts() if u not in r and v in r)


def _as_backward(M: Structure) -> Structure:
    if M.signature.derived is not None and M.signature.derived.mode == "backward":
        return M
    if M.signature.derived is not None:
        raise StructureError("expected a structure over sigma or sigma_B")
    sig = backward_signature(M.signature)
    edges = dict(M.edges)
    for b in inverse_names(sig).values():
        edges[b] = ()
    return Structure(sig, M.n, M.labels, edges, M.distinguished, M.names)


def exp_step(M: Structure) -> Structure:
    """Reverse every base-action edge from an unreachable into a reachable state.

    Accepts sigma-structures (read as sigma_B with empty inverses).
    """
    M = _as_backward(M)
    if len(path_depths(M)) != M.n:
        raise StructureError("exp_step needs a connected structure")
    if not satisfies_p(M):
        raise StructureError("exp_step needs every unreachable-to-reachable transition to be a base action")
    r = reach(M)
    inv = inverse_names(M.signature)
    edges = {a: set(p) for a, p in M.edges.items()}
    for a, b in inv.items():
        crossing = {(u, v) for u, v in M.edges[a] if u not in r and v in r}
        edges[a] -= crossing
        edges[b] |= {(v, u) for u, v in crossing}
    return Structure(M.signature, M.n, M.labels, edges, M.distinguished, M.names)


def pg_augment(T: Structure) -> Structure:
    """Iterate :func:`exp_step` from a connected sigma-structure until point-generated."""
    if T.signature.derived is not None:
        raise StructureError("pg_augment starts from a structure over the base signature")
    if len(path_depths(T)) != T.n:
        raise StructureError("pg_augment needs a connected structure")
    M = _as_backward(T)
    while len(reach(M)) < M.n:
        before = len(reach(M))
        M = exp_step(M)
        if len(reach(M)) <= before:
            raise AssertionError("exp_step failed to grow the reachable set")
    return M


def is_pg_augmentation(T: Structure, A: Structure) -> bool:
    """Whether ``A`` arises from ``T`` by turning some ``R`` edges into reversed ``B_R`` edges."""
    if A.signature.derived is None or A.signature.derived.mode != "backward":
        return False
    if A.n != T.n or A.labels != T.labels or A.distinguished != T.distinguished:
        return False
    if len(reach(A)) != A.n:
        return False
    for a, b in inverse_names(A.signature).items():
        kept, moved = A.edges[a], {(v, u) for u, v in A.edges[b]}
        if not kept <= T.edges[a] or kept | moved != T.edges[a] or kept & moved:
            return False
    return True


# ---------------------------------------------------------------------------
# R_G-connections


def rg_connect(F: Structure) -> Structure:
    """Join a sigma-forest into a sigma_G-tree with a star of ``R_G`` edges.

    Every component other than the distinguished one is hung below the
    distinguished root by one ``R_G`` edge to its own root; components are
    taken in order of least state.
    """
    if ClassKind.FOREST not in classify(F).kinds:
        raise StructureError("rg_connect needs a forest")
    sig = global_signature(F.signature)
    g = global_name(sig)
    indeg = in_degrees(F)
    edges = dict(F.edges)
    star = []
    for block in connected_components(F):
        if F.distinguished in block:
            continue
        root = next(m for m in block if indeg[m] == 0)
        star.append((F.distinguished, root))
    edges[g] = star
    return Structure(sig, F.n, F.labels, edges, F.distinguished, F.names)


def is_rg_connection(F: Structure, T: Structure) -> bool:
    if T.signature.derived is None or T.signature.derived.mode != "global":
        return False
    return ClassKind.TREE in classify(T).kinds and T.reduct(F.signature) == F


# ---------------------------------------------------------------------------
# negative-result generators


def make_clique(n: int, with_p: bool = True, props=("p",), action: str = "R") -> Structure:
    """``K^n``: complete ``R`` (loops included), every state labeled ``p`` when ``with_p``."""
    if n < 1:
        raise ValueError("a clique needs at least one state")
    labels = {m: [props[0]] for m in range(n)} if with_p else {}
    return structure(props, (action,), n, labels, [(u, v) for u in range(n) for v in range(n)], 0)


def make_figure3_pair(props=("p",), action: str = "R") -> tuple[Structure, Structure]:
    """The homomorphically equivalent pair: ``a -> x1 {}``, ``a -> x2 {p}`` versus ``b -> y1 {p}``."""
    M = structure(props, (action,), 3, {2: [props[0]]}, [(0, 1), (0, 2)], 0)
    N = structure(props, (action,), 2, {1: [props[0]]}, [(0, 1)], 0)
    return M, N


def chain(n: int, props=("p",), action: str = "R", labels=None) -> Structure:
    """Directed path ``0 -> 1 -> ... -> n-1``."""
    return structure(props, (action,), n, labels or {}, [(i, i + 1) for i in range(n - 1)], 0)
