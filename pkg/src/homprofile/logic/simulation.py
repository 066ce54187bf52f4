"""Greatest-fixpoint simulations and bisimulations, per pair and batched."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..structures import Structure, StructureError

KINDS = ("simulation", "directed-simulation", "bisimulation")


def _prop_ok(kind, lm, ln) -> bool:
    return lm == ln if kind == "bisimulation" else lm <= ln


def simulation_fixpoint(
    kind: str, M: Structure, N: Structure, rounds: Optional[int] = None
) -> tuple[bool, frozenset]:
    """Largest relation ``Z`` (state of ``M``, state of ``N``) satisfying the clauses of ``kind``.

    ``simulation``: labels included, forth.  ``directed-simulation``: labels
    included, forth and back.  ``bisimulation``: labels equal, forth and
    back.  With ``rounds`` the refinement stops after that many steps (the
    depth-bounded variant).  Returns whether the distinguished pair survives.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    if M.signature != N.signature:
        raise StructureError("structures must share a signature")
    acts = M.signature.actions
    Z = {(m, n) for m in range(M.n) for n in range(N.n) if _prop_ok(kind, M.labels[m], N.labels[n])}
    back = kind != "simulation"
    step = 0
    while rounds is None or step < rounds:
        keep = set()
        for m, n in Z:
            ok = all(any((s, t) in Z for t in N.succ(n, a)) for a in acts for s in M.succ(m, a))
            if ok and back:
                ok = all(any((s, t) in Z for s in M.succ(m, a)) for a in acts for t in N.succ(n, a))
            if ok:
                keep.add((m, n))
        step += 1
        if keep == Z:
            break
        Z = keep
    return (M.distinguished, N.distinguished) in Z, frozenset(Z)


def mutual_simulation(M: Structure, N: Structure, rounds: Optional[int] = None, kind: str = "simulation") -> bool:
    return simulation_fixpoint(kind, M, N, rounds)[0] and simulation_fixpoint(kind, N, M, rounds)[0]


# ---------------------------------------------------------------------------
# batched relation on a disjoint union


class UnionGraph:
    """Disjoint union of many structures with padded numpy successor tables.

    Index ``size`` is a sentinel used for padding.
    """

    def __init__(self, structures: Sequence[Structure]):
        sig = structures[0].signature
        self.signature = sig
        offsets, off = [], 0
        for M in structures:
            if M.signature != sig:
                raise StructureError("structures must share a signature")
            offsets.append(off)
            off += M.n
        self.size = off
        self.offsets = np.array(offsets)
        self.points = np.array([o + M.distinguished for o, M in zip(offsets, structures)])
        P = len(sig.props)
        self.labels = np.zeros((off + 1, P), dtype=bool)
        self.succ = {}
        self.pred = {}
        for a in sig.actions:
            width = max([len(M.succ(m, a)) for M in structures for m in range(M.n)] + [1])
            pw = max([len(M.pred(m, a)) for M in structures for m in range(M.n)] + [1])
            S = np.full((off + 1, width), off, dtype=np.int64)
            Pr = np.full((off + 1, pw), off, dtype=np.int64)
            for o, M in zip(offsets, structures):
                for m in range(M.n):
                    for j, v in enumerate(M.succ(m, a)):
                        S[o + m, j] = o + v
                    for j, v in enumerate(M.pred(m, a)):
                        Pr[o + m, j] = o + v
            self.succ[a] = S
            self.pred[a] = Pr
        for o, M in zip(offsets, structures):
            for m in range(M.n):
                for pi, p in enumerate(sig.props):
                    self.labels[o + m, pi] = p in M.labels[m]


def simulation_matrix(kind: str, G: UnionGraph, rounds: Optional[int] = None) -> np.ndarray:
    """``Z[x, y]`` for all states of the union (sentinel row/column excluded)."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    D = G.size
    L = G.labels[:D]
    if kind == "bisimulation":
        Z = (L[:, None, :] == L[None, :, :]).all(axis=2)
    else:
        Z = (~L[:, None, :] | L[None, :, :]).all(axis=2)
    back = kind != "simulation"
    step = 0
    while rounds is None or step < rounds:
        Zp = np.zeros((D + 1, D + 1), dtype=bool)
        Zp[:D, :D] = Z
        new = Z.copy()
        for a, S in G.succ.items():
            # reach[x', y]: some successor y' of y has Z[x', y']
            reach = np.zeros((D + 1, D + 1), dtype=bool)
            for j in range(S.shape[1]):
                reach[:, :D] |= Zp[:, S[:D, j]]
            # forth: every successor x' of x has reach[x', y]; padding counts as satisfied
            reach[D, :] = True
            for i in range(S.shape[1]):
                new &= reach[S[:D, i], :D]
            if back:
                cover = np.zeros((D + 1, D + 1), dtype=bool)
                for i in range(S.shape[1]):
                    cover[:D, :] |= Zp[S[:D, i], :]
                cover[:, D] = True
                for j in range(S.shape[1]):
                    new &= cover[:D, S[:D, j]]
        step += 1
        if np.array_equal(new, Z):
            break
        Z = new
    return Z


def bisimulation_classes(G: UnionGraph, rounds: Optional[int] = None) -> np.ndarray:
    """Class ids of the distinguished points under (bounded) bisimilarity."""
    Z = simulation_matrix("bisimulation", G, rounds)
    return _classes(Z[np.ix_(G.points, G.points)])


def mutual_simulation_classes(G: UnionGraph, rounds: Optional[int] = None, kind: str = "simulation") -> np.ndarray:
    Z = simulation_matrix(kind, G, rounds)
    sub = Z[np.ix_(G.points, G.points)]
    return _classes(sub & sub.T)


def _classes(E: np.ndarray) -> np.ndarray:
    """Component ids of a symmetric, transitive boolean relation."""
    n = E.shape[0]
    ids = np.full(n, -1, dtype=np.int64)
    nxt = 0
    for i in range(n):
        if ids[i] < 0:
            ids[E[i]] = nxt
            nxt += 1
    return ids
