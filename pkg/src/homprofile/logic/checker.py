"""Model checking for every formula language, including hybrid binders."""

from __future__ import annotations

from typing import Mapping, Optional

from ..structures import Structure
from .formulas import (
    And,
    At,
    BackDia,
    Bind,
    Bot,
    Box,
    Dia,
    Formula,
    FormulaError,
    Global,
    Not,
    Or,
    Prop,
    Top,
    Var,
)


def check(M: Structure, g: Optional[Mapping[str, int]], phi: Formula, state: Optional[int] = None) -> bool:
    """``M, state, g |= phi`` (``state`` defaults to the distinguished state)."""
    g = dict(g or {})
    return _sat(M, phi, M.distinguished if state is None else state, g)


def satisfying_states(M: Structure, phi: Formula, g: Optional[Mapping[str, int]] = None) -> frozenset:
    g = dict(g or {})
    return frozenset(m for m in range(M.n) if _sat(M, phi, m, g))


def _count(M, phi, states, g, need) -> bool:
    hits = 0
    for s in states:
        if _sat(M, phi, s, g):
            hits += 1
            if hits >= need:
                return True
    return False


def _sat(M: Structure, phi: Formula, m: int, g: dict) -> bool:
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Prop):
        if phi.name not in M.signature.props:
            raise FormulaError(f"unknown proposition {phi.name!r}")
        return phi.name in M.labels[m]
    if isinstance(phi, Var):
        if phi.name not in g:
            raise FormulaError(f"unbound world variable {phi.name!r}")
        return g[phi.name] == m
    if isinstance(phi, Not):
        return not _sat(M, phi.sub, m, g)
    if isinstance(phi, And):
        return _sat(M, phi.left, m, g) and _sat(M, phi.right, m, g)
    if isinstance(phi, Or):
        return _sat(M, phi.left, m, g) or _sat(M, phi.right, m, g)
    if isinstance(phi, Dia):
        return _count(M, phi.sub, _succ(M, m, phi.action), g, phi.grade)
    if isinstance(phi, Box):
        return all(_sat(M, phi.sub, s, g) for s in _succ(M, m, phi.action))
    if isinstance(phi, BackDia):
        return _count(M, phi.sub, _pred(M, m, phi.action), g, phi.grade)
    if isinstance(phi, Global):
        return _count(M, phi.sub, range(M.n), g, phi.grade)
    if isinstance(phi, Bind):
        inner = dict(g)
        inner[phi.var] = m
        return _sat(M, phi.sub, m, inner)
    if isinstance(phi, At):
        if phi.var not in g:
            raise FormulaError(f"unbound world variable {phi.var!r}")
        return _sat(M, phi.sub, g[phi.var], g)
    raise FormulaError(f"not a formula: {phi!r}")


def _succ(M, m, action):
    if action not in M.signature.actions:
        raise FormulaError(f"unknown action {action!r}")
    return M.succ(m, action)


def _pred(M, m, action):
    if action not in M.signature.actions:
        raise FormulaError(f"unknown action {action!r}")
    return M.pred(m, action)
