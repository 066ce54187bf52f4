"""Exhaustive and random generation of structure classes, up to isomorphism."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .structures import (
    ClassKind,
    ClassTag,
    Signature,
    Structure,
    bit_layout,
    classify,
    decode,
)


class EnumerationBudgetError(ValueError):
    pass


# raw search space for filter-based classes is 2**bits candidate structures per size
RAW_BUDGET_BITS = 22
TREE_BUDGET_STATES = 7


@dataclass
class ClassSlice:
    tag: ClassTag
    signature: Signature
    max_states: int
    max_depth: Optional[int]
    structures: list

    def __len__(self):
        return len(self.structures)

    def __iter__(self):
        return iter(self.structures)

    def __getitem__(self, i):
        return self.structures[i]


# ---------------------------------------------------------------------------
# trees and forests, built constructively


def _tree_codes(sig: Signature, n: int, depth: int) -> tuple:
    """Canonical codes of all trees with exactly ``n`` states and depth <= ``depth``."""
    return _tree_codes_cached(sig.props, sig.actions, n, depth)


@functools.lru_cache(maxsize=None)
def _tree_codes_cached(props, actions, n, depth):
    labels = [tuple(sorted(c)) for r in range(len(props) + 1) for c in itertools.combinations(props, r)]
    if n == 1:
        return tuple((lab, ()) for lab in labels)
    if depth == 0:
        return ()
    items = []
    for size in range(1, n):
        for a in actions:
            for code in _tree_codes_cached(props, actions, size, depth - 1):
                items.append((a, code, size))
    items.sort(key=lambda t: (t[0], repr(t[1])))
    out = []

    def pick(start, remaining, chosen):
        if remaining == 0:
            kids = tuple(sorted((a, c) for a, c, _ in chosen))
            for lab in labels:
                out.append((lab, kids))
            return
        for i in range(start, len(items)):
            a, c, size = items[i]
            if size <= remaining:
                chosen.append(items[i])
                pick(i, remaining - size, chosen)
                chosen.pop()

    pick(0, n - 1, [])
    return tuple(sorted(set(out), key=repr))


def tree_from_code(sig: Signature, code) -> Structure:
    """Build the tree of a nested code, numbering states breadth-first from 0."""
    labels, edges = [], {a: [] for a in sig.actions}
    queue = [(code, None, None)]
    i = 0
    while i < len(queue):
        (lab, kids), parent, action = queue[i]
        labels.append(lab)
        if parent is not None:
            edges[action].append((parent, i))
        for a, child in kids:
            queue.append((child, i, a))
        i += 1
    return Structure(sig, len(labels), labels, edges, 0)


def forest_from_codes(sig: Signature, root_code, others: Sequence) -> Structure:
    parts = [tree_from_code(sig, root_code)] + [tree_from_code(sig, c) for c in others]
    labels, edges, offset = [], {a: [] for a in sig.actions}, 0
    for P in parts:
        labels.extend(P.labels)
        for a, u, v in P.binary_facts():
            edges[a].append((u + offset, v + offset))
        offset += P.n
    return Structure(sig, offset, labels, edges, 0)


def _forests(sig: Signature, n: int, depth: int) -> list:
    out = []
    for root_size in range(1, n + 1):
        for root_code in _tree_codes(sig, root_size, depth):
            rest = n - root_size
            pool = [c for size in range(1, rest + 1) for c in _tree_codes(sig, size, depth)]
            pool_sizes = {c: _code_size(c) for c in pool}
            pool.sort(key=repr)

            def pick(start, remaining, chosen):
                if remaining == 0:
                    out.append((root_code, tuple(chosen)))
                    return
                for i in range(start, len(pool)):
                    s = pool_sizes[pool[i]]
                    if s <= remaining:
                        chosen.append(pool[i])
                        pick(i, remaining - s, chosen)
                        chosen.pop()

            pick(0, rest, [])
    out.sort(key=repr)
    return [forest_from_codes(sig, r, o) for r, o in out]


def _code_size(code) -> int:
    return 1 + sum(_code_size(c) for _, c in code[1])


# ---------------------------------------------------------------------------
# filter-based classes


def raw_canonical_codes(sig: Signature, n: int) -> np.ndarray:
    """Sorted orbit minima of all ``n``-state structures with distinguished state 0.

    A code is kept iff it is the least encoding among its renamings fixing
    state 0, so the result lists every isomorphism type exactly once.
    """
    _check_raw_budget(sig, n)
    return _raw_cached(sig.props, sig.actions, n)


def _check_raw_budget(sig: Signature, n: int) -> None:
    _, bits = bit_layout(sig, n)
    if bits > RAW_BUDGET_BITS:
        raise EnumerationBudgetError(
            f"raw search space 2**{bits} for {n} states exceeds the budget 2**{RAW_BUDGET_BITS}"
        )


@functools.lru_cache(maxsize=None)
def _raw_cached(props, actions, n):
    sig = Signature(props, actions)
    e_bits, bits = bit_layout(sig, n)
    codes = np.arange(1 << bits, dtype=np.uint64)
    best = codes.copy()
    A, P = len(actions), len(props)
    for rest in itertools.permutations(range(1, n)):
        perm = (0,) + rest
        if perm == tuple(range(n)):
            continue
        moved = np.zeros_like(codes)
        for a in range(A):
            for u in range(n):
                for v in range(n):
                    src = a * n * n + u * n + v
                    dst = a * n * n + perm[u] * n + perm[v]
                    moved |= ((codes >> np.uint64(src)) & np.uint64(1)) << np.uint64(dst)
        for p in range(P):
            for m in range(n):
                src = e_bits + p * n + m
                dst = e_bits + p * n + perm[m]
                moved |= ((codes >> np.uint64(src)) & np.uint64(1)) << np.uint64(dst)
        np.minimum(best, moved, out=best)
    return codes[codes == best]


@functools.lru_cache(maxsize=None)
def _classified(props, actions, n):
    sig = Signature(props, actions)
    out = []
    for code in raw_canonical_codes(sig, n):
        M = decode(sig, n, int(code), 0)
        out.append((M, classify(M)))
    return tuple(out)


def all_structures(sig: Signature, max_states: int, exact_states: bool = False) -> list:
    """Every pointed structure up to isomorphism with at most ``max_states`` states."""
    sizes = [max_states] if exact_states else range(1, max_states + 1)
    return [M for n in sizes for M, _ in _classified(sig.props, sig.actions, n)]


def enumerate_class(
    tag: ClassTag,
    sig: Signature,
    max_states: int,
    max_depth: Optional[int] = None,
    exact_states: bool = False,
    tree_budget: int = TREE_BUDGET_STATES,
) -> ClassSlice:
    """All members of a class up to isomorphism, within size and depth bounds.

    Order is (state count, canonical encoding).  Trees and forests are
    generated constructively; the other classes by filtering all structures
    of each size through :func:`classify`.  ``max_depth`` defaults to the
    tag's own depth bound (or no bound).
    """
    if isinstance(tag, (str, ClassKind)):
        tag = ClassTag(ClassKind(tag))
    if max_states < 1:
        raise ValueError("max_states must be at least 1")
    depth = max_depth if max_depth is not None else tag.depth
    if depth is not None and depth < 0:
        raise ValueError("max_depth must be nonnegative")
    if tag.depth is not None and depth is not None:
        depth = min(depth, tag.depth)
    sizes = [max_states] if exact_states else list(range(1, max_states + 1))
    found: list = []
    if tag.kind in (ClassKind.TREE, ClassKind.FOREST):
        if max_states > tree_budget:
            raise EnumerationBudgetError(f"tree/forest enumeration limited to {tree_budget} states")
        d = depth if depth is not None else max_states - 1
        for n in sizes:
            if tag.kind == ClassKind.TREE:
                found.extend(tree_from_code(sig, c) for c in sorted(_tree_codes(sig, n, d), key=repr))
            else:
                found.extend(_forests(sig, n, d))
    else:
        _check_raw_budget(sig, max_states)
        check = ClassTag(tag.kind, depth)
        for n in sizes:
            found.extend(M for M, info in _classified(sig.props, sig.actions, n) if info.satisfies(check))
    return ClassSlice(tag, sig, max_states, depth, found)


# ---------------------------------------------------------------------------
# random structures


def random_structure(
    tag: Optional[ClassTag],
    sig: Signature,
    n: int,
    seed: int,
    density: float = 0.3,
    label_prob: float = 0.5,
    attempts: int = 1000,
) -> Structure:
    """A random member of ``tag`` with ``n`` states, deterministic per seed.

    Proposals are shaped to the class and then accepted only if
    :func:`classify` confirms membership (including any depth bound).
    """
    if isinstance(tag, (str, ClassKind)):
        tag = ClassTag(ClassKind(tag))
    rng = np.random.default_rng(seed)
    kind = tag.kind if tag is not None else None
    for _ in range(attempts):
        M = _propose(kind, sig, n, rng, density, label_prob)
        if tag is None or classify(M).satisfies(tag):
            return M
    raise ValueError(f"no {tag} with {n} states found in {attempts} attempts")


def _propose(kind, sig, n, rng, density, label_prob) -> Structure:
    acts = sig.actions
    labels = [[p for p in sig.props if rng.random() < label_prob] for _ in range(n)]
    edges = {a: set() for a in acts}

    def rand_action():
        return acts[int(rng.integers(len(acts)))]

    def tree_edges(nodes, oriented=True):
        for i in range(1, len(nodes)):
            parent = nodes[int(rng.integers(i))]
            if oriented or rng.random() < 0.5:
                edges[rand_action()].add((parent, nodes[i]))
            else:
                edges[rand_action()].add((nodes[i], parent))

    def extra_edges():
        for a in acts:
            for u in range(n):
                for v in range(n):
                    if rng.random() < density:
                        edges[a].add((u, v))

    if not acts or n == 1:
        if acts and kind in (ClassKind.PG, ClassKind.CONNECTED, None) and rng.random() < 0.5:
            edges[acts[0]].add((0, 0))
        return Structure(sig, n, labels, edges, 0)
    if kind == ClassKind.TREE:
        tree_edges(list(range(n)))
    elif kind == ClassKind.FOREST:
        cuts = sorted(rng.choice(np.arange(1, n), size=int(rng.integers(0, n)), replace=False).tolist()) if n > 1 else []
        bounds = [0] + cuts + [n]
        for lo, hi in zip(bounds, bounds[1:]):
            tree_edges(list(range(lo, hi)))
    elif kind == ClassKind.ACYCLIC:
        tree_edges(list(range(n)), oriented=False)
    elif kind == ClassKind.PG:
        tree_edges(list(range(n)))
        extra_edges()
    elif kind == ClassKind.CONNECTED:
        tree_edges(list(range(n)), oriented=False)
        extra_edges()
    else:
        extra_edges()
    return Structure(sig, n, labels, edges, 0)
