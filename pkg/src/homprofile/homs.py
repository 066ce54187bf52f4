"""Homomorphism enumeration and counting, morphism checks, conjunctive queries
and left-profile comparison."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .semiring import NAT, Semiring, count_in, json_value
from .structures import (
    ClassKind,
    ClassTag,
    Signature,
    Structure,
    StructureError,
    bit_layout,
    classify,
    connected_components,
    encode,
    to_json,
    tree_code,
)


@dataclass(frozen=True)
class HomMap:
    source: Structure = field(repr=False)
    target: Structure = field(repr=False)
    assignment: tuple[int, ...]

    def __call__(self, m: int) -> int:
        return self.assignment[m]


def _check_signatures(T: Structure, M: Structure) -> None:
    if T.signature != M.signature:
        raise StructureError(f"signature mismatch: {T.signature} vs {M.signature}")


def search_order(T: Structure) -> list[int]:
    """Distinguished state first, then BFS over sigma-paths, then the rest by index."""
    order, seen = [], set()
    starts = [T.distinguished] + list(range(T.n))
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            m = queue.popleft()
            order.append(m)
            for x in sorted(T.neighbours(m)):
                if x not in seen:
                    seen.add(x)
                    queue.append(x)
    return order


def _plan(T: Structure):
    order = search_order(T)
    pos = {v: i for i, v in enumerate(order)}
    steps = []
    for i, v in enumerate(order):
        checks = []
        anchor = None
        for a, u, w in T.binary_facts():
            if v not in (u, w):
                continue
            if pos[u] <= i and pos[w] <= i:
                checks.append((a, u, w))
                if anchor is None and u != v and w == v:
                    anchor = ("succ", a, u)
                elif anchor is None and w != v and u == v:
                    anchor = ("pred", a, w)
        steps.append((v, T.labels[v], anchor, checks))
    return steps


def iter_homs(T: Structure, M: Structure, injective: bool = False) -> Iterator[tuple[int, ...]]:
    """Yield every homomorphism ``T -> M`` as an assignment tuple."""
    _check_signatures(T, M)
    steps = _plan(T)
    h = [-1] * T.n
    used = set()
    n_steps = len(steps)
    edges = M.edges
    labels = M.labels

    def candidates(i):
        v, _, anchor, _ = steps[i]
        if i == 0 and v == T.distinguished:
            return (M.distinguished,)
        if anchor is None:
            return range(M.n)
        kind, a, other = anchor
        return M.succ(h[other], a) if kind == "succ" else M.pred(h[other], a)

    def go(i):
        if i == n_steps:
            yield tuple(h)
            return
        v, lab, _, checks = steps[i]
        for x in candidates(i):
            if injective and x in used:
                continue
            if not lab <= labels[x]:
                continue
            h[v] = x
            if all((h[u], h[w]) in edges[a] for a, u, w in checks):
                if injective:
                    used.add(x)
                yield from go(i + 1)
                if injective:
                    used.discard(x)
            h[v] = -1

    yield from go(0)


def enumerate_homs(T: Structure, M: Structure) -> list[HomMap]:
    """All homomorphisms ``T -> M`` in deterministic backtracking order."""
    return [HomMap(T, M, a) for a in iter_homs(T, M)]


def is_homomorphism(T: Structure, M: Structure, assignment: Sequence[int]) -> bool:
    if assignment[T.distinguished] != M.distinguished:
        return False
    for m in range(T.n):
        if not T.labels[m] <= M.labels[assignment[m]]:
            return False
    return all((assignment[u], assignment[v]) in M.edges[a] for a, u, v in T.binary_facts())


# ---------------------------------------------------------------------------
# counting


def tree_count_vector(T: Structure, M: Structure, root: Optional[int] = None) -> list[int]:
    """``v[x] = |Hom((T, root), (M, x))|`` for every state ``x``, by bottom-up DP.

    The part of ``T`` below ``root`` must be a tree.
    """
    root = T.distinguished if root is None else root
    acts = T.signature.actions
    memo = {}

    def vec(s):
        if s in memo:
            return memo[s]
        kids = [(a, c) for a in acts for c in T.succ(s, a)]
        lab = T.labels[s]
        out = []
        child_vecs = [(a, vec(c)) for a, c in kids]
        for x in range(M.n):
            if not lab <= M.labels[x]:
                out.append(0)
                continue
            prod = 1
            for a, cv in child_vecs:
                prod *= sum(cv[y] for y in M.succ(x, a))
                if prod == 0:
                    break
            out.append(prod)
        memo[s] = out
        return out

    return vec(root)


def _count_backtrack(T: Structure, M: Structure) -> int:
    return sum(1 for _ in iter_homs(T, M))


def _count_components(T: Structure, M: Structure, tree_dp: bool) -> int:
    total = 1
    for block in connected_components(T):
        if T.distinguished in block:
            part = T.induced(block)
            c = _count_pointed(part, M, tree_dp)
        else:
            sub = T.with_distinguished(block[0]).induced(block)
            root = _component_root(sub) if tree_dp else None
            if root is not None:
                c = sum(tree_count_vector(sub, M, root))
            else:
                c = sum(_count_backtrack(sub, M.with_distinguished(x)) for x in range(M.n))
        total *= c
        if total == 0:
            return 0
    return total


def _component_root(C: Structure) -> Optional[int]:
    for r in range(C.n):
        if classify(C.with_distinguished(r)).satisfies(ClassTag(ClassKind.TREE)):
            return r
    return None


def _count_pointed(T: Structure, M: Structure, tree_dp: bool) -> int:
    if tree_dp and ClassKind.TREE in classify(T).kinds:
        return tree_count_vector(T, M)[M.distinguished]
    return _count_backtrack(T, M)


def count_hom_maps(T: Structure, M: Structure, method: str = "auto") -> int:
    """``|Hom(T, M)|`` as an exact integer.

    ``method`` is ``auto`` (tree DP for trees, component product for
    forests and other disconnected sources, else backtracking),
    ``backtrack``, ``tree`` or ``components``.
    """
    _check_signatures(T, M)
    if method == "backtrack":
        return _count_backtrack(T, M)
    if method == "tree":
        if ClassKind.TREE not in classify(T).kinds:
            raise StructureError("tree DP needs a tree-shaped source")
        return tree_count_vector(T, M)[M.distinguished]
    if method == "components":
        return _count_components(T, M, tree_dp=True)
    if method != "auto":
        raise ValueError(f"unknown counting method {method!r}")
    kinds = classify(T).kinds
    if ClassKind.TREE in kinds:
        return tree_count_vector(T, M)[M.distinguished]
    if ClassKind.FOREST in kinds or len(connected_components(T)) > 1:
        return _count_components(T, M, tree_dp=True)
    return _count_backtrack(T, M)


def count_homs(S: Semiring, T: Structure, M: Structure, method: str = "auto"):
    """``hom_S(T, M) = count_S(|Hom(T, M)|)``."""
    return count_in(S, count_hom_maps(T, M, method))


MAX_BATCH_BITS = 63


def hom_count_matrix(sources: Sequence[Structure], targets: Sequence[Structure]) -> np.ndarray:
    """``out[i, j] = |Hom(sources[i], targets[j])|`` by vectorized brute force.

    Each source is packed into a bitmask (:func:`structures.encode`); for each
    map ``h`` into a target the mask of facts ``h`` would preserve is built,
    and a source counts ``h`` iff its own mask lies inside.  Meant for small
    sources (few maps per target); falls back to backtracking otherwise.
    """
    out = np.zeros((len(sources), len(targets)), dtype=np.int64)
    for j, col in hom_count_columns(sources, targets):
        out[:, j] = col
    return out


def hom_count_columns(sources: Sequence[Structure], targets: Sequence[Structure]):
    """Yield ``(j, counts)`` with ``counts[i] = |Hom(sources[i], targets[j])|``, one target at a time."""
    if not sources or not targets:
        for j in range(len(targets)):
            yield j, np.zeros(len(sources), dtype=np.int64)
        return
    sig = sources[0].signature
    groups: dict[tuple[int, int], list[int]] = {}
    for i, T in enumerate(sources):
        if T.signature != sig:
            raise StructureError("hom_count_columns needs a common signature")
        groups.setdefault((T.n, T.distinguished), []).append(i)
    for M in targets:
        _check_signatures(sources[0], M)
    packed = {}
    for (n, d), idx in groups.items():
        _, total_bits = bit_layout(sig, n)
        if total_bits <= MAX_BATCH_BITS:
            packed[(n, d)] = (np.array(idx), np.array([encode(sources[i]) for i in idx], dtype=np.uint64))
    for j, M in enumerate(targets):
        arrays = _adjacency_arrays(M)
        col = np.zeros(len(sources), dtype=np.int64)
        for (n, d), idx in groups.items():
            if (n, d) not in packed:
                for i in idx:
                    col[i] = _count_backtrack(sources[i], M)
                continue
            where, codes = packed[(n, d)]
            allowed = _allowed_masks(sig, n, d, M, arrays)
            acc = np.zeros(len(codes), dtype=np.int64)
            for chunk in np.array_split(allowed, max(1, len(allowed) // 64)):
                acc += ((codes[:, None] & ~chunk[None, :]) == 0).sum(axis=1)
            col[where] = acc
        yield j, col


def tree_count_table(trees: Sequence[Structure], targets: Sequence[Structure]) -> np.ndarray:
    """``out[i, j] = |Hom(trees[i], targets[j])|`` by a bottom-up DP run on all targets at once.

    Shared subtrees are evaluated once.  Counts are exact Python integers
    (object array), so large targets cannot overflow.
    """
    if not trees or not targets:
        return np.zeros((len(trees), len(targets)), dtype=object)
    sig = targets[0].signature
    offsets, off = [], 0
    labels = []
    src = {a: [] for a in sig.actions}
    dst = {a: [] for a in sig.actions}
    for M in targets:
        if M.signature != sig:
            raise StructureError("targets must share a signature")
        offsets.append(off)
        labels.extend(M.labels)
        for a, u, v in M.binary_facts():
            src[a].append(u + off)
            dst[a].append(v + off)
        off += M.n
    src = {a: np.array(x, dtype=np.int64) for a, x in src.items()}
    dst = {a: np.array(x, dtype=np.int64) for a, x in dst.items()}
    points = np.array([o + M.distinguished for o, M in zip(offsets, targets)])
    masks = {}
    memo = {}

    def mask(lab):
        if lab not in masks:
            masks[lab] = np.array([1 if set(lab) <= l else 0 for l in labels], dtype=object)
        return masks[lab]

    def vec(code):
        if code in memo:
            return memo[code]
        v = mask(code[0]).copy()
        for a, child in code[1]:
            w = np.zeros(off, dtype=object)
            np.add.at(w, src[a], vec(child)[dst[a]])
            v = v * w
        memo[code] = v
        return v

    out = np.zeros((len(trees), len(targets)), dtype=object)
    for i, T in enumerate(trees):
        if T.signature != sig:
            raise StructureError("trees and targets must share a signature")
        if ClassKind.TREE not in classify(T).kinds:
            raise StructureError("tree_count_table needs tree-shaped sources")
        out[i] = vec(tree_code(T))[points]
    return out


def _adjacency_arrays(M: Structure):
    A = np.zeros((len(M.signature.actions), M.n, M.n), dtype=bool)
    for ai, a in enumerate(M.signature.actions):
        for u, v in M.edges[a]:
            A[ai, u, v] = True
    L = np.zeros((len(M.signature.props), M.n), dtype=bool)
    for pi, p in enumerate(M.signature.props):
        for m in range(M.n):
            L[pi, m] = p in M.labels[m]
    return A, L


def _allowed_masks(sig: Signature, n: int, d: int, M: Structure, arrays) -> np.ndarray:
    A, L = arrays
    free = [m for m in range(n) if m != d]
    grid = np.array(list(itertools.product(range(M.n), repeat=len(free))), dtype=np.int64)
    H = np.empty((grid.shape[0], n), dtype=np.int64)
    H[:, d] = M.distinguished
    if free:
        H[:, free] = grid
    mask = np.zeros(H.shape[0], dtype=np.uint64)
    bit = 0
    for ai in range(len(sig.actions)):
        for u in range(n):
            for v in range(n):
                mask |= A[ai, H[:, u], H[:, v]].astype(np.uint64) << np.uint64(bit)
                bit += 1
    for pi in range(len(sig.props)):
        for m in range(n):
            mask |= L[pi, H[:, m]].astype(np.uint64) << np.uint64(bit)
            bit += 1
    return mask


# ---------------------------------------------------------------------------
# morphism kinds


MORPHISM_KINDS = ("injective-hom-exists", "fully-surjective-hom-exists", "isomorphic", "hom-equivalent", "hom-exists")


def _is_fully_surjective(A: Structure, B: Structure, h: Sequence[int]) -> bool:
    if set(h) != set(range(B.n)):
        return False
    for p in B.signature.props:
        for m in range(B.n):
            if p in B.labels[m] and not any(h[s] == m and p in A.labels[s] for s in range(A.n)):
                return False
    for a in B.signature.actions:
        image = {(h[u], h[v]) for u, v in A.edges[a]}
        if not B.edges[a] <= image:
            return False
    return True


def morphism_check(kind: str, A: Structure, B: Structure) -> bool:
    _check_signatures(A, B)
    if kind == "hom-exists":
        return next(iter_homs(A, B), None) is not None
    if kind == "hom-equivalent":
        return morphism_check("hom-exists", A, B) and morphism_check("hom-exists", B, A)
    if kind == "injective-hom-exists":
        if A.n > B.n:
            return False
        return next(iter_homs(A, B, injective=True), None) is not None
    if kind == "fully-surjective-hom-exists":
        if A.n < B.n:
            return False
        return any(_is_fully_surjective(A, B, h) for h in iter_homs(A, B))
    if kind == "isomorphic":
        return find_isomorphism(A, B) is not None
    raise ValueError(f"unknown morphism kind {kind!r}; expected one of {MORPHISM_KINDS}")


def find_isomorphism(A: Structure, B: Structure) -> Optional[tuple[int, ...]]:
    if A.signature != B.signature or A.n != B.n:
        return None
    if sorted(map(sorted, A.labels)) != sorted(map(sorted, B.labels)):
        return None
    if any(len(A.edges[a]) != len(B.edges[a]) for a in A.signature.actions):
        return None
    for h in iter_homs(A, B, injective=True):
        inverse = [0] * B.n
        for m, x in enumerate(h):
            inverse[x] = m
        if is_homomorphism(B, A, inverse):
            return h
    return None


def isomorphic(A: Structure, B: Structure) -> bool:
    return find_isomorphism(A, B) is not None


# ---------------------------------------------------------------------------
# conjunctive queries


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.relation}({','.join(self.args)})"


@dataclass(frozen=True)
class ConjunctiveQuery:
    """``exists bound (atom & ... & atom)`` with the single free variable ``free``."""

    signature: Signature
    free: str
    bound: tuple[str, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self):
        object.__setattr__(self, "bound", tuple(self.bound))
        object.__setattr__(self, "atoms", tuple(self.atoms))
        variables = (self.free,) + self.bound
        if len(set(variables)) != len(variables):
            raise StructureError("CQ variables must be distinct")
        for at in self.atoms:
            if not set(at.args) <= set(variables):
                raise StructureError(f"atom {at} uses an undeclared variable")

    @property
    def variables(self) -> tuple[str, ...]:
        return (self.free,) + self.bound

    def __str__(self):
        body = " & ".join(map(str, self.atoms)) or "true"
        if self.bound:
            return f"exists {','.join(self.bound)} ({body})"
        return body


def canonical_instance(q: ConjunctiveQuery) -> Structure:
    """Domain = the variables of ``q`` (free one first), facts = its atoms."""
    sig = q.signature
    idx = {v: i for i, v in enumerate(q.variables)}
    labels = [set() for _ in idx]
    edges = {a: [] for a in sig.actions}
    for at in q.atoms:
        if len(at.args) == 1:
            if at.relation not in sig.props:
                raise StructureError(f"unary symbol {at.relation!r} not in the signature")
            labels[idx[at.args[0]]].add(at.relation)
        elif len(at.args) == 2:
            if at.relation not in sig.actions:
                raise StructureError(f"binary symbol {at.relation!r} not in the signature")
            edges[at.relation].append((idx[at.args[0]], idx[at.args[1]]))
        else:
            raise StructureError(f"atom {at} has unsupported arity")
    return Structure(sig, len(idx), labels, edges, 0)


def query_of_structure(T: Structure, prefix: str = "y") -> ConjunctiveQuery:
    """The CQ whose canonical instance is ``T`` (free variable ``x``)."""
    names = {}
    k = 0
    for m in range(T.n):
        if m == T.distinguished:
            names[m] = "x"
        else:
            k += 1
            names[m] = f"{prefix}{k}"
    atoms = [Atom(f.relation, tuple(names[e] for e in f.elements)) for f in T.facts()]
    bound = tuple(names[m] for m in range(T.n) if m != T.distinguished)
    return ConjunctiveQuery(T.signature, "x", bound, tuple(atoms))


# ---------------------------------------------------------------------------
# extension classes and profiles


def ext_membership(N: Structure, tag: ClassTag, bound: int) -> Optional[bool]:
    """Three-valued ``N in Inj(C) & Sur(C)`` with witnesses searched up to ``bound`` states.

    Returns ``None`` when neither witnesses nor a sound obstruction are found.
    """
    from .enumeration import enumerate_class

    info = classify(N)
    acyclic_tags = (ClassKind.TREE, ClassKind.ACYCLIC, ClassKind.FOREST)
    pg_tags = (ClassKind.TREE, ClassKind.PG)
    connected_tags = (ClassKind.TREE, ClassKind.ACYCLIC, ClassKind.PG, ClassKind.CONNECTED)
    # injective homs send distinct facts to distinct facts, so cycles survive;
    # fully surjective images of connected / point-generated sources keep that shape
    if tag.kind in acyclic_tags and not _acyclic(N):
        return False
    if tag.kind in connected_tags and ClassKind.CONNECTED not in info.kinds:
        return False
    if tag.kind in pg_tags and ClassKind.PG not in info.kinds:
        return False
    if tag.kind in pg_tags and tag.depth is not None and info.directed_depth > tag.depth:
        return False
    if tag.kind in (ClassKind.ACYCLIC, ClassKind.CONNECTED) and tag.depth is not None and info.path_depth > tag.depth:
        return False
    if info.satisfies(tag):
        return True
    depth = tag.depth if tag.depth is not None else bound
    inj = sur = False
    for n in range(1, bound + 1):
        for M in enumerate_class(tag, N.signature, n, depth, exact_states=True).structures:
            if not inj and M.n >= N.n and morphism_check("injective-hom-exists", N, M):
                inj = True
            if not sur and M.n >= N.n and morphism_check("fully-surjective-hom-exists", M, N):
                sur = True
            if inj and sur:
                return True
    return None


def _acyclic(N: Structure) -> bool:
    from .structures import is_acyclic

    return is_acyclic(N)


@dataclass
class ProfileVerdict:
    status: str
    bound: tuple
    witness: Optional[Structure] = None
    counts: Optional[tuple] = None
    compared: int = 0

    @property
    def equal(self) -> bool:
        return self.status == "EqualUpToBound"

    def as_dict(self) -> dict:
        out = {"status": self.status, "bound": list(self.bound), "compared": self.compared}
        if self.witness is not None:
            out["witness"] = to_json(self.witness)
            out["countLeft"] = json_value(self.counts[0])
            out["countRight"] = json_value(self.counts[1])
        return out


def compare_profiles(
    M: Structure,
    N: Structure,
    tag: ClassTag,
    S: Semiring = NAT,
    bound: tuple[int, int] = (3, 2),
    sources: Optional[Sequence[Structure]] = None,
) -> ProfileVerdict:
    """Compare ``hom_S(C, M)`` and ``hom_S(C, N)`` over an enumerated class slice.

    Sources are visited in the enumerator's canonical order and the first
    one with differing counts is returned as the witness.
    """
    from .enumeration import enumerate_class

    _check_signatures(M, N)
    if sources is None:
        max_states, max_depth = bound
        sources = enumerate_class(tag, M.signature, max_states, max_depth).structures
    for i, T in enumerate(sources):
        left = count_homs(S, T, M)
        right = count_homs(S, T, N)
        if left != right:
            return ProfileVerdict("Distinguished", tuple(bound), T, (left, right), i + 1)
    return ProfileVerdict("EqualUpToBound", tuple(bound), compared=len(sources))
