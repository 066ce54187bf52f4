"""Semirings, the counting map ``count_S`` and its ultimate periodicity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional


@dataclass(frozen=True)
class Semiring:
    """A semiring ``<S, +, *, 0, 1>``.

    ``elements`` enumerates a finite carrier; ``None`` marks the unbounded
    natural-number carrier.  ``fast_count`` may shortcut the iterated sum
    and must agree with it.
    """

    name: str
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    zero: Any
    one: Any
    elements: Optional[tuple] = None
    fast_count: Optional[Callable[[int], Any]] = field(default=None, compare=False, repr=False)

    @property
    def finite(self) -> bool:
        return self.elements is not None

    def __str__(self):
        return self.name


def count_in(S: Semiring, n: int) -> Any:
    """``0_S`` for ``n == 0``, otherwise the ``n``-fold sum of ``1_S``."""
    if n < 0:
        raise ValueError("count_in needs n >= 0")
    if S.fast_count is not None:
        return S.fast_count(n)
    return fold_count(S, n)


def fold_count(S: Semiring, n: int) -> Any:
    acc = S.zero
    for _ in range(n):
        acc = S.add(acc, S.one)
    return acc


BOOL = Semiring(
    "bool",
    add=lambda a, b: a or b,
    mul=lambda a, b: a and b,
    zero=False,
    one=True,
    elements=(False, True),
    fast_count=lambda n: n > 0,
)

NAT = Semiring(
    "nat",
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    zero=0,
    one=1,
    elements=None,
    fast_count=lambda n: n,
)


def mod_p(p: int) -> Semiring:
    """Integers modulo ``p`` (any ``p >= 2``; a ring, hence a semiring)."""
    if p < 2:
        raise ValueError("modp needs p >= 2")
    return Semiring(
        f"modp:{p}",
        add=lambda a, b: (a + b) % p,
        mul=lambda a, b: (a * b) % p,
        zero=0,
        one=1 % p,
        elements=tuple(range(p)),
        fast_count=lambda n: n % p,
    )


INF = math.inf


def min_plus(cap: int) -> Semiring:
    """Tropical semiring ``<{0..cap, inf}, min, +, inf, 0>`` with sums clipped at ``cap``."""
    if cap < 0:
        raise ValueError("minplus needs cap >= 0")

    def mul(a, b):
        if a == INF or b == INF:
            return INF
        return min(a + b, cap)

    return Semiring(
        f"minplus:{cap}",
        add=min,
        mul=mul,
        zero=INF,
        one=0,
        elements=tuple(range(cap + 1)) + (INF,),
    )


def parse_semiring(text: str) -> Semiring:
    """Parse a selector: ``bool``, ``nat``, ``modp:<p>`` or ``minplus:<cap>``."""
    text = text.strip().lower()
    if text in ("bool", "b"):
        return BOOL
    if text in ("nat", "n"):
        return NAT
    kind, _, arg = text.partition(":")
    try:
        if kind == "modp":
            return mod_p(int(arg))
        if kind == "minplus":
            return min_plus(int(arg))
    except ValueError as exc:
        raise ValueError(f"bad semiring selector {text!r}: {exc}") from exc
    raise ValueError(f"unknown semiring {text!r}; expected bool, nat, modp:<p> or minplus:<cap>")


def axiom_violations(S: Semiring) -> list[str]:
    """Exhaustively check the semiring laws on a finite carrier."""
    if not S.finite:
        raise ValueError("axioms can only be checked exhaustively on finite carriers")
    bad = []
    E = S.elements
    add, mul, z, o = S.add, S.mul, S.zero, S.one
    for a in E:
        if add(a, z) != a:
            bad.append(f"{a} + 0 != {a}")
        if mul(a, o) != a or mul(o, a) != a:
            bad.append(f"1 is not a unit for {a}")
        if mul(a, z) != z or mul(z, a) != z:
            bad.append(f"0 does not annihilate {a}")
        for b in E:
            if add(a, b) != add(b, a):
                bad.append(f"+ not commutative on {a},{b}")
            for c in E:
                if add(add(a, b), c) != add(a, add(b, c)):
                    bad.append(f"+ not associative on {a},{b},{c}")
                if mul(mul(a, b), c) != mul(a, mul(b, c)):
                    bad.append(f"* not associative on {a},{b},{c}")
                if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
                    bad.append(f"left distributivity fails on {a},{b},{c}")
                if mul(add(b, c), a) != add(mul(b, a), mul(c, a)):
                    bad.append(f"right distributivity fails on {a},{b},{c}")
    return bad


@dataclass(frozen=True)
class PeriodicityReport:
    injective_up_to_probe: bool
    L: Optional[int]
    P: Optional[int]
    preperiod: tuple
    segment: tuple
    probe: int

    def negative_case(self, S: Semiring) -> str:
        """Which branch of the clique argument applies to this counting sequence."""
        if self.injective_up_to_probe:
            return "injective"
        if S.zero in self.segment:
            return "zero-in-segment"
        if S.one in self.segment:
            return "one-in-segment-P1" if self.P == 1 else "one-in-segment-Pgt1"
        return "one-not-in-segment"

    def as_dict(self) -> dict:
        return {
            "injective_up_to_probe": self.injective_up_to_probe,
            "L": self.L,
            "P": self.P,
            "preperiod": [json_value(x) for x in self.preperiod],
            "segment": [json_value(x) for x in self.segment],
            "probe": self.probe,
        }


def json_value(x):
    """A JSON-ready form of a semiring element (infinity becomes ``"inf"``)."""
    if isinstance(x, float) and x == INF:
        return "inf"
    return x


def element_text(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return str(json_value(x))


DEFAULT_PROBE = 64


def analyze_periodicity(S: Semiring, probe: int = DEFAULT_PROBE) -> PeriodicityReport:
    """Find the minimal preperiod ``L`` and period ``P`` of ``count_S``.

    Scans ``count_S(0..probe)`` for the first repeated value.  Finite
    carriers are always scanned at least ``|S| + 1`` steps, which must
    contain a repeat.
    """
    if probe < 2:
        raise ValueError("probe must be at least 2")
    if S.finite:
        probe = max(probe, len(S.elements) + 1)
    seen: dict = {}
    seq = []
    acc = S.zero
    for n in range(probe + 1):
        if n > 0:
            acc = S.add(acc, S.one)
        key = _hashable(acc)
        if key in seen:
            L = seen[key]
            P = n - L
            for m in range(L, probe + 1 - P):
                if _hashable(count_in(S, m)) != _hashable(count_in(S, m + P)):
                    raise AssertionError(f"{S.name}: count is not periodic from {L} with period {P}")
            return PeriodicityReport(False, L, P, tuple(seq[:L]), tuple(seq[L:n]), probe)
        seen[key] = n
        seq.append(acc)
    if S.finite:
        raise AssertionError("pigeonhole violated: finite carrier without a repeat")
    return PeriodicityReport(True, None, None, (), (), probe)


def _hashable(x):
    return ("inf",) if x == INF else x


BUILTIN = ("bool", "nat", "modp:2", "modp:3", "modp:5", "minplus:3")


def builtin_zoo() -> list[Semiring]:
    return [parse_semiring(s) for s in BUILTIN]
