"""Exact deciders for tree-profile equality over a whole depth-bounded tree class.

Fix a finite *frame* (here the disjoint union of a few structures).  A
pointed tree ``T`` induces the vector ``v_T[x] = |Hom(T, (frame, x))|``.  It
satisfies

    v_T = mask(label of root) * prod over children (S_R v_child)

where ``(S_R v)[x]`` sums ``v`` over the ``R``-successors of ``x`` and ``*``
is the pointwise product.  Gluing two trees at their roots multiplies their
vectors, so the vectors of trees of depth ``<= d`` span a space closed under
pointwise products.  We compute a basis of that span from actual trees (each
basis vector is the vector of a concrete witness tree), which decides
whether *any* tree of depth ``<= d`` separates two states.  A size-graded
variant decides the same question for trees with at most ``b`` states.

The Boolean analogue replaces sums by "some successor" and spans by sets of
bit-vectors closed under pointwise AND.

Tree witnesses use the nested codes of :mod:`enumeration`:
``(sorted label tuple, sorted tuple of (action, child code))``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from .enumeration import tree_from_code
from .homs import count_hom_maps
from .structures import Signature, Structure, StructureError

EMPTY_KIDS: tuple = ()


class Frame:
    """Disjoint union of structures over one signature, as successor lists."""

    def __init__(self, structures: Sequence[Structure]):
        if not structures:
            raise ValueError("a frame needs at least one structure")
        sig = structures[0].signature
        self.signature: Signature = sig
        self.offsets = []
        self.labels = []
        self.succ = {a: [] for a in sig.actions}
        off = 0
        for M in structures:
            if M.signature != sig:
                raise StructureError("frame structures must share a signature")
            self.offsets.append(off)
            self.labels.extend(M.labels)
            for a in sig.actions:
                self.succ[a].extend(tuple(v + off for v in M.succ(m, a)) for m in range(M.n))
            off += M.n
        self.size = off
        self.points = [o + M.distinguished for o, M in zip(self.offsets, structures)]

    def mask(self, label) -> tuple:
        lab = set(label)
        return tuple(1 if lab <= l else 0 for l in self.labels)

    def push(self, action: str, v: Sequence[int]) -> tuple:
        return tuple(sum(v[y] for y in ys) for ys in self.succ[action])

    def push_bits(self, action: str, v: int) -> int:
        out = 0
        for x, ys in enumerate(self.succ[action]):
            if any(v >> y & 1 for y in ys):
                out |= 1 << x
        return out

    def mask_bits(self, label) -> int:
        return sum(1 << x for x, bit in enumerate(self.mask(label)) if bit)


def glue(c1, c2):
    """Code of the tree obtained by identifying the roots of two trees."""
    return (tuple(sorted(set(c1[0]) | set(c2[0]))), tuple(sorted(c1[1] + c2[1])))


def code_size(code) -> int:
    return 1 + sum(code_size(c) for _, c in code[1])


def code_depth(code) -> int:
    return 1 + max((code_depth(c) for _, c in code[1]), default=-1)


def tree_vector(frame: Frame, code) -> tuple:
    """``v_T`` computed directly from the code (independent of any span)."""
    v = frame.mask(code[0])
    for a, child in code[1]:
        w = frame.push(a, tree_vector(frame, child))
        v = tuple(x * y for x, y in zip(v, w))
    return v


def _label_subsets(props):
    return [tuple(c) for r in range(len(props) + 1) for c in combinations(props, r)]


# ---------------------------------------------------------------------------
# exact rational spans with concrete generators


class Span:
    """Row-reduced rational basis whose generators are concrete vectors."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple[int, list]] = []  # (pivot, reduced row)
        self.gens: list[tuple[tuple, object]] = []  # (raw integer vector, witness)

    def __len__(self):
        return len(self.gens)

    def _reduce(self, vec) -> list:
        r = [Fraction(x) for x in vec]
        for piv, row in self.rows:
            c = r[piv]
            if c:
                for i in range(piv, self.dim):
                    if row[i]:
                        r[i] -= c * row[i]
        return r

    def add(self, vec: Sequence[int], witness) -> bool:
        """Insert ``vec``; returns True iff it enlarged the span."""
        if len(self.rows) == self.dim:
            return False
        r = self._reduce(vec)
        piv = next((i for i, x in enumerate(r) if x), None)
        if piv is None:
            return False
        lead = r[piv]
        r = [x / lead for x in r]
        for _, row in self.rows:
            c = row[piv]
            if c:
                for i in range(self.dim):
                    row[i] -= c * r[i]
        self.rows.append((piv, r))
        self.gens.append((tuple(vec), witness))
        return True


def nat_algebra(frame: Frame, depth: Optional[int]) -> Span:
    """Span of ``v_T`` over all trees of depth ``<= depth`` (``None``: any depth)."""
    props = frame.signature.props
    acts = frame.signature.actions

    def close(span: Span, fresh: list):
        # close under pointwise products; new generators are multiplied by all
        queue = list(fresh)
        while queue:
            v, c = queue.pop()
            for w, d in list(span.gens):
                prod = tuple(x * y for x, y in zip(v, w))
                code = glue(c, d)
                if span.add(prod, code):
                    queue.append((prod, code))

    span = Span(frame.size)
    seeds = []
    for lab in [()] + [(p,) for p in props]:
        code = (lab, EMPTY_KIDS)
        if span.add(frame.mask(lab), code):
            seeds.append((frame.mask(lab), code))
    close(span, seeds)
    d = 0
    while depth is None or d < depth:
        prev = list(span.gens)
        fresh = []
        for v, c in prev:
            for a in acts:
                w = frame.push(a, v)
                code = ((), ((a, c),))
                if span.add(w, code):
                    fresh.append((w, code))
        close(span, fresh)
        d += 1
        if not fresh:
            break
    return span


def nat_graded(frame: Frame, depth: int, max_size: int) -> dict[int, Span]:
    """``out[n]`` spans ``v_T`` over trees of depth ``<= depth`` with exactly ``n`` states."""
    props = frame.signature.props
    acts = frame.signature.actions
    labels = _label_subsets(props)
    D = frame.size
    ones = tuple([1] * D)
    level = {1: Span(D)}
    for lab in labels:
        level[1].add(frame.mask(lab), (lab, EMPTY_KIDS))
    for n in range(2, max_size + 1):
        level[n] = Span(D)
    for _ in range(depth):
        child = {}
        for t in range(1, max_size):
            sp = Span(D)
            for v, c in level[t].gens:
                for a in acts:
                    sp.add(frame.push(a, v), ((a, c),))
            child[t] = sp
        prod = {0: Span(D)}
        prod[0].add(ones, EMPTY_KIDS)
        for m in range(1, max_size):
            sp = Span(D)
            for t in range(1, m + 1):
                for cv, ck in child[t].gens:
                    for pv, pk in prod[m - t].gens:
                        sp.add(tuple(x * y for x, y in zip(cv, pv)), tuple(sorted(ck + pk)))
            prod[m] = sp
        nxt = {}
        for n in range(1, max_size + 1):
            sp = Span(D)
            for pv, pk in prod[n - 1].gens:
                for lab in labels:
                    mv = frame.mask(lab)
                    sp.add(tuple(x * y for x, y in zip(mv, pv)), (lab, pk))
            nxt[n] = sp
        level = nxt
    return level


def bool_closure(frame: Frame, depth: Optional[int]) -> dict[int, object]:
    """Bit-vectors ``[Hom(T, (frame, x)) nonempty]`` over trees of depth ``<= depth``.

    Returns ``{bitvector: witness code}``, closed under pointwise AND.
    """
    props = frame.signature.props
    acts = frame.signature.actions
    found: dict[int, object] = {}

    def close(fresh):
        queue = list(fresh)
        while queue:
            v, c = queue.pop()
            for w, d in list(found.items()):
                x = v & w
                if x not in found:
                    found[x] = glue(c, d)
                    queue.append((x, found[x]))

    seeds = []
    for lab in [()] + [(p,) for p in props]:
        v = frame.mask_bits(lab)
        if v not in found:
            found[v] = (lab, EMPTY_KIDS)
            seeds.append((v, found[v]))
    close(seeds)
    d = 0
    while depth is None or d < depth:
        fresh = []
        for v, c in list(found.items()):
            for a in acts:
                w = frame.push_bits(a, v)
                if w not in found:
                    found[w] = ((), ((a, c),))
                    fresh.append((w, found[w]))
        close(fresh)
        d += 1
        if not fresh:
            break
    return found


# ---------------------------------------------------------------------------
# pairwise separation


def _verify(sig: Signature, code, M: Structure, N: Structure, boolean: bool) -> Structure:
    T = tree_from_code(sig, code)
    cm, cn = count_hom_maps(T, M), count_hom_maps(T, N)
    if boolean:
        cm, cn = cm > 0, cn > 0
    if cm == cn:
        raise AssertionError(f"closure witness {code} does not separate the pair")
    return T


def separating_tree(
    M: Structure,
    N: Structure,
    semiring: str = "nat",
    depth: Optional[int] = None,
    max_size: Optional[int] = None,
) -> Optional[Structure]:
    """A tree (depth ``<= depth``, at most ``max_size`` states) whose counts into
    ``M`` and ``N`` differ, or ``None`` if no such tree exists.

    ``semiring`` is ``nat`` or ``bool``.  ``max_size`` is only supported for
    ``nat`` with a finite ``depth``.  Any witness returned has been rechecked
    by direct hom counting.
    """
    frame = Frame([M, N])
    x, y = frame.points
    sig = M.signature
    if semiring == "bool":
        if max_size is not None:
            raise ValueError("size-bounded Boolean separation is not supported")
        best = None
        for v, code in bool_closure(frame, depth).items():
            if (v >> x & 1) != (v >> y & 1):
                if best is None or (code_size(code), repr(code)) < (code_size(best), repr(best)):
                    best = code
        return None if best is None else _verify(sig, best, M, N, True)
    if semiring != "nat":
        raise ValueError(f"unknown semiring {semiring!r}")
    if max_size is None:
        span = nat_algebra(frame, depth)
        sep = [c for v, c in span.gens if v[x] != v[y]]
        if not sep:
            return None
        best = min(sep, key=lambda c: (code_size(c), repr(c)))
        return _verify(sig, best, M, N, False)
    if depth is None:
        raise ValueError("size-bounded separation needs a depth bound")
    level = nat_graded(frame, depth, max_size)
    for n in range(1, max_size + 1):
        for v, c in level[n].gens:
            if v[x] != v[y]:
                return _verify(sig, c, M, N, False)
    return None
