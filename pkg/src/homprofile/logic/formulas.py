"""Formula ASTs for the modal, graded, backward, global and hybrid languages."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Union


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Var:
    """World variable; true exactly at the state it is bound to."""

    name: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Dia:
    """At least ``grade`` ``action``-successors satisfy ``sub``."""

    action: str
    sub: "Formula"
    grade: int = 1

    def __post_init__(self):
        if self.grade < 1:
            raise FormulaError("modal grades start at 1")


@dataclass(frozen=True)
class Box:
    action: str
    sub: "Formula"


@dataclass(frozen=True)
class BackDia:
    """At least ``grade`` ``action``-predecessors satisfy ``sub``."""

    action: str
    sub: "Formula"
    grade: int = 1

    def __post_init__(self):
        if self.grade < 1:
            raise FormulaError("modal grades start at 1")


@dataclass(frozen=True)
class Global:
    """At least ``grade`` states of the whole structure satisfy ``sub``."""

    sub: "Formula"
    grade: int = 1

    def __post_init__(self):
        if self.grade < 1:
            raise FormulaError("modal grades start at 1")


@dataclass(frozen=True)
class Bind:
    """``down var. sub``: name the current state ``var``."""

    var: str
    sub: "Formula"


@dataclass(frozen=True)
class At:
    """``@var sub``: evaluate ``sub`` at the state named ``var``."""

    var: str
    sub: "Formula"


Formula = Union[Top, Bot, Prop, Var, Not, And, Or, Dia, Box, BackDia, Global, Bind, At]

UNARY = (Not, Dia, Box, BackDia, Global, Bind, At)
BINARY = (And, Or)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    parts = list(parts)
    return reduce(And, parts) if parts else Top()


def disj(parts: Iterable[Formula]) -> Formula:
    parts = list(parts)
    return reduce(Or, parts) if parts else Bot()


def exactly(action: str, n: int, sub: Formula) -> Formula:
    """Exactly ``n`` ``action``-successors satisfy ``sub`` (graded shorthand)."""
    if n == 0:
        return Not(Dia(action, sub, 1))
    return And(Dia(action, sub, n), Not(Dia(action, sub, n + 1)))


def children(phi: Formula) -> tuple:
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, UNARY):
        return (phi.sub,)
    return ()


def subformulas(phi: Formula):
    yield phi
    for c in children(phi):
        yield from subformulas(c)


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(c) for c in children(phi)), default=0)
    return inner + (1 if isinstance(phi, (Dia, Box, BackDia, Global)) else 0)


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Var):
        return frozenset((phi.name,))
    if isinstance(phi, Bind):
        return free_vars(phi.sub) - {phi.var}
    out = frozenset().union(*(free_vars(c) for c in children(phi)))
    if isinstance(phi, At):
        out |= {phi.var}
    return out


def size(phi: Formula) -> int:
    return 1 + sum(size(c) for c in children(phi))


def actions_used(phi: Formula) -> set:
    return {f.action for f in subformulas(phi) if isinstance(f, (Dia, Box, BackDia))}


def props_used(phi: Formula) -> set:
    return {f.name for f in subformulas(phi) if isinstance(f, Prop)}


# ---------------------------------------------------------------------------
# language membership

_BASE = (Top, Bot, Prop, And, Or)

LANGUAGES = {
    # id: (allowed node types, largest grade of a counting modality or None)
    "ml": (_BASE + (Not, Dia, Box), 1),
    "mlplus": ((Top, Bot, Prop, And, Or, Dia, Box), 1),
    "pml": (_BASE + (Dia,), 1),
    "pmlb": (_BASE + (Dia, BackDia), 1),
    "pmlg": (_BASE + (Dia, Global), 1),
    "gml": (_BASE + (Not, Dia, Box), None),
    "gmlb": (_BASE + (Not, Dia, Box, BackDia), None),
    "gmlg": (_BASE + (Not, Dia, Box, Global), None),
    "hl": (_BASE + (Not, Dia, Box, Var, Bind, At), 1),
    "hlb": (_BASE + (Not, Dia, Box, BackDia, Var, Bind, At), 1),
}


def in_language(phi: Formula, language: str) -> bool:
    """Whether every node of ``phi`` belongs to ``language`` (ids as in :data:`LANGUAGES`)."""
    try:
        allowed, max_grade = LANGUAGES[language]
    except KeyError:
        raise FormulaError(f"unknown language {language!r}") from None
    for f in subformulas(phi):
        if not isinstance(f, allowed):
            return False
        if max_grade is not None and isinstance(f, (Dia, BackDia, Global)) and f.grade > max_grade:
            return False
    return True


def is_disjunction_free(phi: Formula) -> bool:
    return not any(isinstance(f, Or) for f in subformulas(phi))


def random_formula(signature, depth: int, rng, graded: bool = False, max_grade: int = 3, leaf_bias: float = 0.15) -> Formula:
    """A random formula of modal depth at most ``depth``.

    Uses propositions, ``true``/``false``, negation, conjunction,
    disjunction, boxes and diamonds (graded ones when ``graded``).  ``rng``
    is a ``numpy.random.Generator``, so equal seeds give equal formulas.
    """
    props = list(signature.props)
    actions = list(signature.actions)

    def leaf():
        r = rng.random()
        if props and r < 0.8:
            return Prop(props[int(rng.integers(len(props)))])
        return Top() if r < 0.9 else Bot()

    def go(d, budget):
        if budget <= 0 or rng.random() < leaf_bias:
            return leaf()
        choice = int(rng.integers(5 if d > 0 and actions else 3))
        if choice == 0:
            return Not(go(d, budget - 1))
        if choice == 1:
            return And(go(d, budget // 2), go(d, budget // 2))
        if choice == 2:
            return Or(go(d, budget // 2), go(d, budget // 2))
        a = actions[int(rng.integers(len(actions)))]
        if choice == 3:
            grade = int(rng.integers(1, max_grade + 1)) if graded else 1
            return Dia(a, go(d - 1, budget - 1), grade)
        return Box(a, go(d - 1, budget - 1))

    return go(depth, 12)
