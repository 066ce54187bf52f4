"""Structural deciders for logical equivalence, one per language."""

from __future__ import annotations

from typing import Optional, Sequence

from ..homs import isomorphic
from ..structures import MAX_CANONICAL_STATES, Structure, StructureError, canonical_code
from ..transforms import backward_expansion, global_expansion, gsub, unravel_code
from .simulation import mutual_simulation, simulation_fixpoint

LANGUAGE_IDS = ("pml", "pmlb", "pmlg", "gml", "gmlb", "gmlg", "hl", "hlb", "ml", "mlplus")
DEPTH_BOUNDED = ("pml", "pmlb", "gml", "gmlb")

DESCRIPTIONS = {
    "pml": "positive existential modal logic up to depth k (bounded mutual simulation)",
    "pmlb": "positive existential with backward diamonds up to depth k (bounded mutual simulation of backward expansions)",
    "pmlg": "positive existential with the global diamond (mutual simulation of global expansions)",
    "gml": "graded modal logic up to depth k (isomorphic depth-k unravelings)",
    "gmlb": "graded modal logic with backward modalities up to depth k (unravelings of backward expansions)",
    "gmlg": "graded modal logic with global counting (full unravelings of global expansions)",
    "hl": "hybrid logic with binder and jump (isomorphic generated submodels)",
    "hlb": "hybrid logic with backward diamonds (generated submodels of backward expansions)",
    "ml": "basic modal logic (bisimilarity)",
    "mlplus": "positive modal logic (mutual directed simulation)",
}


def iso_pointed(A: Structure, B: Structure) -> bool:
    if A.n != B.n:
        return False
    if A.n <= MAX_CANONICAL_STATES:
        return canonical_code(A) == canonical_code(B)
    return isomorphic(A, B)


def refinement_colors(structures: Sequence[Structure], rounds: Optional[int] = None) -> list[int]:
    """Colors of the distinguished states after counting refinement.

    Two points get the same color after ``k`` rounds iff their depth-``k``
    unravelings are isomorphic; with ``rounds=None`` refinement runs to its
    fixpoint (isomorphic full unravelings).
    """
    sig = structures[0].signature
    colors = []
    offsets = []
    succ = []
    for M in structures:
        if M.signature != sig:
            raise StructureError("structures must share a signature")
        offsets.append(len(colors))
        base = len(colors)
        for m in range(M.n):
            colors.append(tuple(sorted(M.labels[m])))
            succ.append([(a, base + v) for a in sig.actions for v in M.succ(m, a)])
    colors = _intern(colors)
    step = 0
    n_classes = len(set(colors))
    while rounds is None or step < rounds:
        sig_ = [(colors[x], tuple(sorted((a, colors[y]) for a, y in succ[x]))) for x in range(len(colors))]
        new = _intern(sig_)
        step += 1
        k = len(set(new))
        colors = new
        if rounds is None and k == n_classes:
            break
        n_classes = k
    return [colors[o + M.distinguished] for o, M in zip(offsets, structures)]


def _intern(values) -> list[int]:
    table: dict = {}
    return [table.setdefault(v, len(table)) for v in values]


def _need_k(language, k):
    if k is None:
        raise ValueError(f"language {language!r} needs a depth bound k")
    if k < 0:
        raise ValueError("depth bound must be nonnegative")


def equivalent(M: Structure, N: Structure, language: str, k: Optional[int] = None) -> bool:
    """Decide ``M =_L N`` through the structural characterization of ``language``."""
    if M.signature != N.signature:
        raise StructureError("structures must share a signature")
    if language not in LANGUAGE_IDS:
        raise ValueError(f"unknown language {language!r}; expected one of {LANGUAGE_IDS}")
    if language in DEPTH_BOUNDED:
        _need_k(language, k)
    if language == "pml":
        return mutual_simulation(M, N, rounds=k)
    if language == "pmlb":
        return mutual_simulation(backward_expansion(M), backward_expansion(N), rounds=k)
    if language == "pmlg":
        return mutual_simulation(global_expansion(M), global_expansion(N))
    if language == "gml":
        return unravel_code(M, k) == unravel_code(N, k)
    if language == "gmlb":
        return unravel_code(backward_expansion(M), k) == unravel_code(backward_expansion(N), k)
    if language == "gmlg":
        a, b = refinement_colors([global_expansion(M), global_expansion(N)])
        return a == b
    if language == "hl":
        return iso_pointed(gsub(M), gsub(N))
    if language == "hlb":
        return iso_pointed(gsub(backward_expansion(M)), gsub(backward_expansion(N)))
    if language == "ml":
        return simulation_fixpoint("bisimulation", M, N)[0]
    # mlplus
    return mutual_simulation(M, N, kind="directed-simulation")
