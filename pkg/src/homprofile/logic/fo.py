"""First-order formulas over a modal signature, the standard translation of
basic modal formulas, and a deliberately naive evaluator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from ..homs import ConjunctiveQuery
from ..structures import Structure
from .formulas import And, Bot, Box, Dia, Formula, FormulaError, Not, Or, Prop, Top


@dataclass(frozen=True)
class FTrue:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class FFalse:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class FAtom:
    relation: str
    args: tuple

    def __str__(self):
        return f"{self.relation}({','.join(self.args)})"


@dataclass(frozen=True)
class FEq:
    left: str
    right: str

    def __str__(self):
        return f"{self.left}={self.right}"


@dataclass(frozen=True)
class FNot:
    sub: "FO"

    def __str__(self):
        return f"~{_paren(self.sub)}"


@dataclass(frozen=True)
class FAnd:
    parts: tuple

    def __str__(self):
        return " & ".join(_paren(p) for p in self.parts) if self.parts else "true"


@dataclass(frozen=True)
class FOr:
    parts: tuple

    def __str__(self):
        return " | ".join(_paren(p) for p in self.parts) if self.parts else "false"


@dataclass(frozen=True)
class FExists:
    var: str
    sub: "FO"

    def __str__(self):
        return f"exists {self.var} {_paren(self.sub)}"


@dataclass(frozen=True)
class FForall:
    var: str
    sub: "FO"

    def __str__(self):
        return f"forall {self.var} {_paren(self.sub)}"


FO = Union[FTrue, FFalse, FAtom, FEq, FNot, FAnd, FOr, FExists, FForall]


def _paren(f) -> str:
    s = str(f)
    return s if isinstance(f, (FAtom, FEq, FTrue, FFalse, FNot)) else f"({s})"


def f_and(*parts) -> FO:
    return FAnd(tuple(parts))


def f_or(*parts) -> FO:
    return FOr(tuple(parts))


def f_implies(a, b) -> FO:
    return FOr((FNot(a), b))


def f_iff(a, b) -> FO:
    return FAnd((f_implies(a, b), f_implies(b, a)))


def exists_many(variables, body) -> FO:
    for v in reversed(list(variables)):
        body = FExists(v, body)
    return body


# ---------------------------------------------------------------------------
# standard translation


def standard_translation(phi: Formula, x: str = "x") -> FO:
    """``ST_x(phi)`` for basic modal formulas (props, boolean connectives, diamonds, boxes)."""
    counter = itertools.count(1)

    def st(f, v):
        if isinstance(f, Top):
            return FTrue()
        if isinstance(f, Bot):
            return FFalse()
        if isinstance(f, Prop):
            return FAtom(f.name, (v,))
        if isinstance(f, Not):
            return FNot(st(f.sub, v))
        if isinstance(f, And):
            return f_and(st(f.left, v), st(f.right, v))
        if isinstance(f, Or):
            return f_or(st(f.left, v), st(f.right, v))
        if isinstance(f, Dia) and f.grade == 1:
            y = f"y{next(counter)}"
            return FExists(y, f_and(FAtom(f.action, (v, y)), st(f.sub, y)))
        if isinstance(f, Box):
            y = f"y{next(counter)}"
            return FForall(y, f_implies(FAtom(f.action, (v, y)), st(f.sub, y)))
        raise FormulaError(f"the standard translation covers basic modal formulas only, not {type(f).__name__}")

    return st(phi, x)


# ---------------------------------------------------------------------------
# naive evaluation


def eval_fo(M: Structure, psi: FO, assignment: Mapping[str, int]) -> bool:
    """Evaluate by brute force, quantifiers ranging over all states."""
    g = dict(assignment)

    def ev(f) -> bool:
        if isinstance(f, FTrue):
            return True
        if isinstance(f, FFalse):
            return False
        if isinstance(f, FAtom):
            try:
                vals = tuple(g[a] for a in f.args)
            except KeyError as exc:
                raise FormulaError(f"unassigned variable {exc.args[0]!r}") from None
            if len(vals) == 1:
                if f.relation not in M.signature.props:
                    raise FormulaError(f"unknown unary relation {f.relation!r}")
                return f.relation in M.labels[vals[0]]
            if f.relation not in M.signature.actions:
                raise FormulaError(f"unknown binary relation {f.relation!r}")
            return vals in M.edges[f.relation]
        if isinstance(f, FEq):
            return g[f.left] == g[f.right]
        if isinstance(f, FNot):
            return not ev(f.sub)
        if isinstance(f, FAnd):
            return all(ev(p) for p in f.parts)
        if isinstance(f, FOr):
            return any(ev(p) for p in f.parts)
        if isinstance(f, (FExists, FForall)):
            saved = g.get(f.var, None)
            had = f.var in g
            results = []
            for m in range(M.n):
                g[f.var] = m
                results.append(ev(f.sub))
                if isinstance(f, FExists) and results[-1]:
                    break
                if isinstance(f, FForall) and not results[-1]:
                    break
            if had:
                g[f.var] = saved
            else:
                del g[f.var]
            return any(results) if isinstance(f, FExists) else all(results)
        raise FormulaError(f"not a first-order formula: {f!r}")

    return ev(psi)


def cq_body(q: ConjunctiveQuery) -> FO:
    return FAnd(tuple(FAtom(a.relation, a.args) for a in q.atoms))


def cq_to_fo(q: ConjunctiveQuery) -> FO:
    return exists_many(q.bound, cq_body(q))


def count_satisfying_assignments(q: ConjunctiveQuery, M: Structure) -> int:
    """Assignments of all variables of ``q`` with the free one at the distinguished state
    that make the body true, counted by trying every assignment."""
    body = cq_body(q)
    total = 0
    for values in itertools.product(range(M.n), repeat=len(q.bound)):
        g = dict(zip(q.bound, values))
        g[q.free] = M.distinguished
        if eval_fo(M, body, g):
            total += 1
    return total


def count_satisfying_assignments_batch(q: ConjunctiveQuery, targets) -> list[int]:
    """:func:`count_satisfying_assignments` for many targets, vectorized over the assignment grid.

    Targets of equal size are stacked; every atom of the body is looked up
    for all assignments at once and the conjunction is summed.
    """
    out = [0] * len(targets)
    by_size: dict[int, list[int]] = {}
    for j, M in enumerate(targets):
        by_size.setdefault(M.n, []).append(j)
    variables = (q.free,) + tuple(q.bound)
    for n, idx in by_size.items():
        group = [targets[j] for j in idx]
        grid = np.array(list(itertools.product(range(n), repeat=len(q.bound))), dtype=np.int64)
        grid = grid.reshape(n ** len(q.bound), len(q.bound))
        cols = {v: grid[:, i] for i, v in enumerate(q.bound)}
        d = np.array([M.distinguished for M in group])
        truth = np.ones((len(group), grid.shape[0]), dtype=bool)
        for atom in q.atoms:
            vals = []
            for a in atom.args:
                if a not in variables:
                    raise FormulaError(f"unassigned variable {a!r}")
                vals.append(np.broadcast_to(d[:, None], truth.shape) if a == q.free else np.broadcast_to(cols[a][None, :], truth.shape))
            rows = np.arange(len(group))[:, None]
            if len(vals) == 1:
                table = np.array([[atom.relation in M.labels[m] for m in range(n)] for M in group])
                truth &= table[rows, vals[0]]
            else:
                table = np.zeros((len(group), n, n), dtype=bool)
                for g, M in enumerate(group):
                    for u, v in M.edges[atom.relation]:
                        table[g, u, v] = True
                truth &= table[rows, vals[0], vals[1]]
        for g, j in enumerate(idx):
            out[j] = int(truth[g].sum())
    return out
