"""Theorem-verification experiments and the negative-result demonstration.

A biconditional experiment puts every pair of a corpus through two deciders:
a left-profile comparison over an enumerated (or closure-decided) class of
sources, and a structural or logical oracle.  Per-structure identities check
an equation of hom counts for every (source, target) pair in range.

Profiles are not compared pair by pair.  Hom counts from all sources up to a
hash size ``h`` are computed in one batch, which partitions the corpus into
blocks per source-size level.  Only pairs that share a block, or that the
oracle calls equivalent, are examined individually; every other pair is
distinct on both sides.  Pairs whose profile bound exceeds ``h`` are settled
by an exact decider (the closure span of tree vectors, or a scan of the
larger sources).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .closure import separating_tree
from .enumeration import all_structures, enumerate_class, random_structure
from .homs import (
    count_hom_maps,
    count_homs,
    hom_count_columns,
    hom_count_matrix,
    morphism_check,
    query_of_structure,
    tree_count_table,
)
from .logic.equivalence import refinement_colors
from .logic.fo import count_satisfying_assignments_batch
from .logic.simulation import UnionGraph, mutual_simulation, mutual_simulation_classes, simulation_fixpoint
from .semiring import Semiring, analyze_periodicity, count_in, json_value
from .structures import (
    ClassKind,
    ClassTag,
    Signature,
    Structure,
    canonical_code,
    classify,
    signature_to_json,
    to_json,
    tree_code,
)
from .transforms import (
    backward_expansion,
    chain,
    down_transform,
    flip,
    global_expansion,
    gsub,
    make_clique,
    make_figure3_pair,
    pg_augment,
    unravel,
    unravel_size,
)

BICONDITIONAL = ("T3.2", "T3.5", "T3.7", "T4.5", "T4.12", "T-global", "T5.4", "T-HLB", "Lovász")
IDENTITIES = ("Fact2.1", "L4.4", "P4.9", "L5.3")
THEOREMS = BICONDITIONAL + IDENTITIES
DEPTH_INDEXED = ("T3.2", "T3.5", "T4.5", "T4.12")

DEFAULT_BOUNDS = {
    "corpus": "exhaustive",  # or "figure3" / "random"
    "max_states": 3,
    "props": 1,
    "actions": 1,
    "k": (1, 2, 3),
    "hash_size": 5,
    "pairs": 200,
    "source_states": 4,
    "random_targets": 100,
}

# exhaustive corpora are only generated below this many states
EXHAUSTIVE_LIMIT = 4
# filter-enumerated source classes are hashed up to this size
FILTER_HASH_LIMIT = 4


class HarnessError(ValueError):
    pass


@dataclass
class Disagreement:
    left: Structure
    right: Structure
    profile: str
    oracle: str
    witness: Optional[Structure] = None
    note: str = ""

    def as_dict(self) -> dict:
        out = {"left": to_json(self.left), "right": to_json(self.right), "profile": self.profile, "oracle": self.oracle}
        if self.witness is not None:
            out["witness"] = to_json(self.witness)
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class TheoremReport:
    theorem: str
    corpus: dict
    pairs_tested: int
    agreements: int
    disagreements: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if (not self.disagreements) != (self.agreements == self.pairs_tested):
            raise HarnessError("report counts are inconsistent with its disagreement list")

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "corpus": self.corpus,
            "pairsTested": self.pairs_tested,
            "agreements": self.agreements,
            "disagreements": [d.as_dict() for d in self.disagreements],
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, default=str)

    def text(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        lines = [
            f"{self.theorem}: {verdict}  {self.agreements}/{self.pairs_tested} agree, {len(self.disagreements)} disagree",
            f"  corpus: {json.dumps(self.corpus, sort_keys=True, default=str)}",
        ]
        for key in sorted(self.details):
            lines.append(f"  {key}: {self.details[key]}")
        for d in self.disagreements[:5]:
            lines.append(f"  disagreement: profile={d.profile} oracle={d.oracle} {d.note}".rstrip())
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# corpora


def _signature(bounds) -> Signature:
    props = tuple(f"p{i}" if bounds["props"] > 1 else "p" for i in range(bounds["props"]))
    actions = tuple(f"R{i}" if bounds["actions"] > 1 else "R" for i in range(bounds["actions"]))
    return Signature(props, actions)


def _bounds(bounds: Optional[dict]) -> dict:
    out = dict(DEFAULT_BOUNDS)
    for key, value in (bounds or {}).items():
        if key not in DEFAULT_BOUNDS:
            raise HarnessError(f"unknown bound {key!r}; known: {sorted(DEFAULT_BOUNDS)}")
        out[key] = value
    if isinstance(out["k"], int):
        out["k"] = (out["k"],)
    out["k"] = tuple(out["k"])
    if out["corpus"] not in ("exhaustive", "figure3", "random"):
        raise HarnessError(f"unknown corpus {out['corpus']!r}")
    if out["corpus"] == "exhaustive" and out["max_states"] >= EXHAUSTIVE_LIMIT:
        out["corpus"] = "random"
    if out["corpus"] == "figure3":
        out["props"], out["actions"] = 1, 1
    if min(out["k"], default=0) < 0 or out["max_states"] < 1 or out["pairs"] < 1:
        raise HarnessError("bounds must be positive")
    return out


def _corpus(b: dict, seed: int):
    """Structures and the pairs to test (``None`` means all pairs)."""
    sig = _signature(b)
    if b["corpus"] == "figure3":
        M, N = make_figure3_pair()
        return [M, N], [(0, 1)]
    if b["corpus"] == "exhaustive":
        return all_structures(sig, b["max_states"]), None
    rng = np.random.default_rng(seed)
    structures = []
    for _ in range(2 * b["pairs"]):
        n = int(rng.integers(1, b["max_states"] + 1))
        structures.append(random_structure(None, sig, n, int(rng.integers(2**31))))
    return structures, [(2 * i, 2 * i + 1) for i in range(b["pairs"])]


def _corpus_description(theorem, b, seed, n_structures) -> dict:
    sig = _signature(b)
    out = {
        "kind": b["corpus"],
        "maxStates": b["max_states"],
        "signature": signature_to_json(sig),
        "seed": seed,
        "structures": n_structures,
    }
    if theorem in DEPTH_INDEXED:
        out["k"] = list(b["k"])
    return out


# ---------------------------------------------------------------------------
# the graded profile partition


class GradedProfile:
    """Profile equality on a corpus, decided by hashing plus an exact fallback.

    ``counts[i, j]`` is the count from hashed source ``i`` into structure
    ``j``; sources of every size up to ``h`` must all be present.  Structure
    ``j`` has profile bound ``bounds[j]`` (``None`` for unbounded); a pair is
    compared on sources of size at most ``max`` of the two bounds.  When that
    bound exceeds ``h`` and the hashes agree, ``exact(i, j, bound)`` returns a
    separating source or ``None``.  ``key`` groups structures whose profiles
    are equal for a trivial reason (isomorphic relevant parts), so the exact
    decider runs once per key pair.
    """

    def __init__(
        self,
        structures: Sequence[Structure],
        sources: Sequence[Structure],
        counts: np.ndarray,
        bounds: Sequence[Optional[int]],
        exact: Optional[Callable] = None,
        key: Optional[Callable] = None,
    ):
        self.structures = structures
        order = sorted(range(len(sources)), key=lambda i: sources[i].n)
        self.sources = [sources[i] for i in order]
        self.counts = np.ascontiguousarray(counts[order]) if len(order) else counts
        self.bounds = list(bounds)
        self.sizes = np.array([T.n for T in self.sources], dtype=np.int64)
        self.h = int(self.sizes.max()) if len(self.sources) else 0
        self.exact = exact
        self.key = key
        self.labels = {}
        # sources are sorted by size, so each level is a prefix of the rows
        self.prefix = {s: int(np.searchsorted(self.sizes, s, side="right")) for s in range(self.h + 1)}
        for s in range(0, self.h + 1):
            rows = self.counts[: self.prefix[s]]
            if rows.shape[0] == 0:
                self.labels[s] = np.zeros(len(structures), dtype=np.int64)
            else:
                self.labels[s] = np.unique(rows.T, axis=0, return_inverse=True)[1].reshape(-1)
        self._exact_cache: dict = {}
        self._keys: dict = {}
        self._classes: dict = {}
        self._reps: dict = {}
        self.exact_calls = 0

    def level(self, i: int) -> int:
        b = self.bounds[i]
        return self.h if b is None else min(b, self.h)

    def pair_bound(self, i: int, j: int) -> Optional[int]:
        if self.bounds[i] is None or self.bounds[j] is None:
            return None
        return max(self.bounds[i], self.bounds[j])

    def candidates(self) -> set:
        """Every pair that could have equal profiles (a superset of the equal pairs)."""
        out = set()
        n = len(self.structures)
        levels = np.array([self.level(i) for i in range(n)])
        order = np.lexsort((np.arange(n), levels))
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.arange(n)
        for L in np.unique(levels):
            lab = self.labels[int(L)]
            blocks: dict = {}
            for j in range(n):
                blocks.setdefault(lab[j], []).append(j)
            for x in np.nonzero(levels == L)[0]:
                for y in blocks[lab[x]]:
                    if rank[y] > rank[x]:
                        out.add((min(x, y), max(x, y)))
        return out

    def _key(self, i):
        if i not in self._keys:
            self._keys[i] = self.key(self.structures[i]) if self.key else i
        return self._keys[i]

    def compare(self, i: int, j: int) -> tuple[bool, Optional[Structure]]:
        b = self.pair_bound(i, j)
        L = self.h if b is None else min(b, self.h)
        li, lj = self.labels[L][i], self.labels[L][j]
        if li != lj:
            rows = self.counts[: self.prefix[L]]
            diff = np.nonzero(rows[:, i] != rows[:, j])[0]
            return False, self.sources[int(diff[0])]
        if b is not None and b <= self.h:
            return True, None
        if self.exact is None:
            raise HarnessError("profile bound exceeds the hashed sources and no exact decider is set")
        if b is None:
            # profile equality is an equivalence, so unbounded pairs go through class representatives
            if self._class_of(i) == self._class_of(j):
                return True, None
        w = self._exact_pair(i, j, b)
        return w is None, w

    def _exact_pair(self, i: int, j: int, b: Optional[int]) -> Optional[Structure]:
        ki, kj = self._key(i), self._key(j)
        if ki == kj:
            return None
        ck = (min(ki, kj), max(ki, kj), b)
        if ck not in self._exact_cache:
            self.exact_calls += 1
            self._exact_cache[ck] = self.exact(self.structures[i], self.structures[j], b)
        return self._exact_cache[ck]

    def _class_of(self, i: int) -> int:
        if i not in self._classes:
            reps = self._reps.setdefault(self.labels[self.h][i], [])
            for r in reps:
                if self._exact_pair(r, i, None) is None:
                    self._classes[i] = r
                    break
            else:
                reps.append(i)
                self._classes[i] = i
        return self._classes[i]


def _evaluate_pairs(theorem, structures, pairs, profile: GradedProfile, oracle_ids, oracle_name, details):
    """Count agreements; ``pairs=None`` covers every unordered pair."""
    ids = np.asarray(oracle_ids)
    if pairs is None:
        total = len(structures) * (len(structures) - 1) // 2
        todo = profile.candidates()
        groups: dict = {}
        for i, c in enumerate(ids):
            groups.setdefault(c, []).append(i)
        for members in groups.values():
            todo.update(itertools.combinations(members, 2))
        todo = sorted(todo)
    else:
        total = len(pairs)
        todo = list(pairs)
    disagreements = []
    equal_both = 0
    examined = 0
    for i, j in todo:
        examined += 1
        p_eq, witness = profile.compare(i, j)
        o_eq = bool(ids[i] == ids[j])
        if p_eq and o_eq:
            equal_both += 1
        if p_eq != o_eq:
            disagreements.append(
                Disagreement(
                    structures[i],
                    structures[j],
                    "equal" if p_eq else "distinguished",
                    "equivalent" if o_eq else "not equivalent",
                    witness,
                )
            )
        if len(todo) <= 10:
            details.setdefault("verdicts", []).append(
                {
                    "pair": [int(i), int(j)],
                    "profile": "equal" if p_eq else "distinguished",
                    "oracle": "equivalent" if o_eq else "not equivalent",
                    "witness": to_json(witness) if witness is not None else None,
                }
            )
    details["pairsExamined"] = details.get("pairsExamined", 0) + examined
    details["equivalentPairs"] = details.get("equivalentPairs", 0) + equal_both
    details["exactDeciderCalls"] = details.get("exactDeciderCalls", 0) + profile.exact_calls
    details["hashSources"] = details.get("hashSources", 0) + len(profile.sources)
    details["oracle"] = oracle_name
    return total, disagreements


# ---------------------------------------------------------------------------
# deciders shared by the experiments


def _counts(sources, targets, boolean: bool) -> np.ndarray:
    if not sources:
        return np.zeros((0, len(targets)), dtype=np.int64)
    counts = hom_count_matrix(sources, targets)
    return counts > 0 if boolean else counts


def _checked_witness(T: Structure, M: Structure, N: Structure, boolean: bool) -> Structure:
    cm, cn = count_hom_maps(T, M), count_hom_maps(T, N)
    if boolean:
        cm, cn = cm > 0, cn > 0
    if cm == cn:
        raise HarnessError("a translated closure witness failed to separate the pair")
    return T


def _scan_exact(tag: ClassTag, h: int):
    """Exact decider that compares the enumerated sources with ``h < size <= bound``."""

    def exact(M, N, b):
        for n in range(h + 1, b + 1):
            sources = enumerate_class(tag, M.signature, n, exact_states=True).structures
            if not sources:
                continue
            c = hom_count_matrix(sources, [M, N])
            diff = np.nonzero(c[:, 0] != c[:, 1])[0]
            if len(diff):
                return sources[int(diff[0])]
        return None

    return exact


def _gsub_code(M: Structure, k: Optional[int] = None):
    G = gsub(M, k)
    return (G.n, canonical_code(G))


def _profile_for(theorem: str, structures, b: dict, k: Optional[int]) -> tuple[GradedProfile, np.ndarray, str]:
    sig = structures[0].signature
    hash_size = b["hash_size"]
    # hashing only narrows the candidate pairs; small corpora do not need large filtered sources
    filt = min(hash_size, FILTER_HASH_LIMIT, b["max_states"] + 1)

    if theorem == "T3.2":
        sources = enumerate_class(ClassTag(ClassKind.TREE, k), sig, hash_size).structures

        def exact(M, N, _b):
            return separating_tree(M, N, "bool", k)

        prof = GradedProfile(structures, sources, _counts(sources, structures, True),
                             [None] * len(structures), exact, lambda M: _gsub_code(M, k))
        ids = mutual_simulation_classes(UnionGraph(structures), rounds=k)
        return prof, ids, f"{k}-round mutual simulation"

    if theorem == "T3.5":
        sources = enumerate_class(ClassTag(ClassKind.ACYCLIC, k), sig, filt).structures
        expanded = [backward_expansion(M) for M in structures]

        def exact(M, N, _b):
            w = separating_tree(backward_expansion(M), backward_expansion(N), "bool", k)
            return None if w is None else _checked_witness(flip(w), M, N, True)

        prof = GradedProfile(structures, sources, _counts(sources, structures, True),
                             [None] * len(structures), exact, lambda M: _gsub_code(backward_expansion(M), k))
        ids = mutual_simulation_classes(UnionGraph(expanded), rounds=k)
        return prof, ids, f"{k}-round mutual simulation of backward expansions"

    if theorem == "T3.7":
        sources = enumerate_class(ClassTag(ClassKind.FOREST), sig, hash_size).structures
        expanded = [global_expansion(M) for M in structures]

        def exact(M, N, _b):
            w = separating_tree(global_expansion(M), global_expansion(N), "bool", None)
            return None if w is None else _checked_witness(w.reduct(sig), M, N, True)

        prof = GradedProfile(structures, sources, _counts(sources, structures, True),
                             [None] * len(structures), exact, canonical_code)
        ids = mutual_simulation_classes(UnionGraph(expanded))
        return prof, ids, "mutual simulation of global expansions"

    if theorem == "T4.5":
        sources = enumerate_class(ClassTag(ClassKind.TREE, k), sig, hash_size).structures
        bounds = [unravel_size(M, k) for M in structures]

        def exact(M, N, bound):
            if separating_tree(M, N, "nat", k) is None:
                return None
            return separating_tree(M, N, "nat", k, max_size=bound)

        prof = GradedProfile(structures, sources, _counts(sources, structures, False), bounds, exact,
                             lambda M: _gsub_code(M, k))
        ids = _intern([tree_code(unravel(M, k)) for M in structures])
        return prof, ids, f"isomorphism of depth-{k} unravelings"

    if theorem == "T4.12":
        sources = enumerate_class(ClassTag(ClassKind.ACYCLIC, k), sig, filt).structures

        def exact(M, N, _b):
            w = separating_tree(backward_expansion(M), backward_expansion(N), "nat", k)
            return None if w is None else _checked_witness(flip(w), M, N, False)

        prof = GradedProfile(structures, sources, _counts(sources, structures, False),
                             [None] * len(structures), exact, lambda M: _gsub_code(backward_expansion(M), k))
        ids = _intern([tree_code(unravel(backward_expansion(M), k)) for M in structures])
        return prof, ids, f"isomorphism of depth-{k} unravelings of backward expansions"

    if theorem == "T-global":
        sources = enumerate_class(ClassTag(ClassKind.FOREST), sig, hash_size).structures

        def exact(M, N, _b):
            w = separating_tree(global_expansion(M), global_expansion(N), "nat", None)
            return None if w is None else _checked_witness(w.reduct(sig), M, N, False)

        prof = GradedProfile(structures, sources, _counts(sources, structures, False),
                             [None] * len(structures), exact, canonical_code)
        ids = refinement_colors([global_expansion(M) for M in structures])
        return prof, ids, "isomorphic full unravelings of global expansions (counting refinement)"

    if theorem in ("T5.4", "T-HLB", "Lovász"):
        if theorem == "T5.4":
            tag = ClassTag(ClassKind.PG)
            bounds = [gsub(M).n for M in structures]
            ids = _intern([_gsub_code(M) for M in structures])
            name = "isomorphism of generated submodels"
        elif theorem == "T-HLB":
            tag = ClassTag(ClassKind.CONNECTED)
            bounds = [gsub(backward_expansion(M)).n for M in structures]
            ids = _intern([_gsub_code(backward_expansion(M)) for M in structures])
            name = "isomorphism of generated submodels of backward expansions"
        else:
            tag = None
            bounds = [M.n for M in structures]
            ids = _intern([(M.n, canonical_code(M)) for M in structures])
            name = "isomorphism"
        h = min(max(bounds), 3)
        if tag is None:
            sources = all_structures(sig, h)
            exact = _scan_all_exact(h)
        else:
            sources = enumerate_class(tag, sig, h).structures
            exact = _scan_exact(tag, h)
        prof = GradedProfile(structures, sources, _counts(sources, structures, False), bounds, exact)
        return prof, np.asarray(ids), name

    raise HarnessError(f"unknown theorem {theorem!r}")


def _scan_all_exact(h: int):
    def exact(M, N, b):
        for n in range(h + 1, b + 1):
            sources = all_structures(M.signature, n, exact_states=True)
            c = hom_count_matrix(sources, [M, N])
            diff = np.nonzero(c[:, 0] != c[:, 1])[0]
            if len(diff):
                return sources[int(diff[0])]
        return None

    return exact


def _intern(values) -> np.ndarray:
    table: dict = {}
    return np.array([table.setdefault(v, len(table)) for v in values], dtype=np.int64)


# ---------------------------------------------------------------------------
# per-structure identities


class _Tally:
    """Checked/failed counts of an identity; only the first ``cap`` failures are kept."""

    def __init__(self, cap: int = 20):
        self.checked = 0
        self.bad = 0
        self.failures: list = []
        self.cap = cap

    def record(self, ok_array, make):
        ok_array = np.asarray(ok_array, dtype=bool)
        self.checked += int(ok_array.size)
        misses = np.argwhere(~ok_array)
        self.bad += len(misses)
        for idx in misses[: max(0, self.cap - len(self.failures))]:
            self.failures.append(make(*[int(x) for x in idx]))

    def fail(self, item):
        self.checked += 1
        self.bad += 1
        if len(self.failures) < self.cap:
            self.failures.append(item)


def _identity_report(theorem, corpus, tally: _Tally, details) -> TheoremReport:
    details = dict(details, failures=tally.bad)
    return TheoremReport(theorem, corpus, tally.checked, tally.checked - tally.bad, tally.failures, details)


def _targets(b: dict, seed: int) -> list:
    sig = _signature(b)
    targets = list(all_structures(sig, min(b["max_states"], 3)))
    if b["max_states"] >= EXHAUSTIVE_LIMIT:
        rng = np.random.default_rng(seed)
        for _ in range(b["random_targets"]):
            n = int(rng.integers(EXHAUSTIVE_LIMIT, b["max_states"] + 1))
            targets.append(random_structure(None, sig, n, int(rng.integers(2**31))))
    return targets


def _fact21(b, seed) -> TheoremReport:
    sig = _signature(b)
    targets = _targets(b, seed)
    trees = enumerate_class(ClassTag(ClassKind.TREE), sig, 4).structures
    others = [M for M in all_structures(sig, 2) if ClassKind.TREE not in classify(M).kinds]
    sources = list(trees) + others
    queries = [query_of_structure(T) for T in sources]
    homs = hom_count_matrix(sources, targets)
    tally = _Tally()
    for qi, q in enumerate(queries):
        naive = np.array(count_satisfying_assignments_batch(q, targets), dtype=np.int64)

        def fail(j, qi=qi, q=q, naive=naive):
            return Disagreement(sources[qi], targets[j], f"assignments={naive[j]}", f"homs={homs[qi, j]}", None,
                                note=str(q))

        tally.record(naive == homs[qi], fail)
    corpus = {"queries": len(queries), "treeQueries": len(trees), "targets": len(targets),
              "signature": signature_to_json(sig), "seed": seed}
    return _identity_report("Fact2.1", corpus, tally, {"identity": "satisfying assignments = homomorphisms"})


def _l44(b, seed) -> TheoremReport:
    sig = _signature(b)
    targets = _targets(b, seed)
    tally = _Tally()
    for k in b["k"]:
        trees = enumerate_class(ClassTag(ClassKind.TREE, k), sig, 5).structures
        direct = hom_count_matrix(trees, targets)
        unr = tree_count_table(trees, [unravel(M, k) for M in targets])

        def fail(i, j, k=k, direct=direct, unr=unr, trees=trees):
            return Disagreement(trees[i], targets[j], f"into M: {direct[i, j]}", f"into unr^{k}: {unr[i, j]}")

        tally.record(direct == unr.astype(np.int64), fail)
    corpus = {"treeStates": 5, "k": list(b["k"]), "targets": len(targets), "signature": signature_to_json(sig),
              "seed": seed}
    return _identity_report("L4.4", corpus, tally, {"identity": "count(T, M) = count(T, unr^k(M))"})


def _stream_identity(tally, left_sources, left_targets, right_sources, right_targets, describe):
    cols = zip(hom_count_columns(left_sources, left_targets), hom_count_columns(right_sources, right_targets))
    for (j, a), (_, c) in cols:
        tally.record(a == c, lambda i, j=j, a=a, c=c: describe(i, j, a[i], c[i]))


def _p49(b, seed) -> TheoremReport:
    sig = _signature(b)
    targets = list(all_structures(sig, min(b["max_states"], 3)))
    back = [backward_expansion(M) for M in targets]
    sb = back[0].signature
    n_src = b["source_states"]
    tally = _Tally()
    details: dict = {}

    acyclic = enumerate_class(ClassTag(ClassKind.ACYCLIC), sig, n_src).structures
    down = [down_transform(T) for T in acyclic]
    _stream_identity(tally, acyclic, targets, down, back,
                     lambda i, j, x, y: Disagreement(acyclic[i], targets[j], f"count(T,M)={x}", f"count(down T, M^B)={y}"))
    details["downSources"] = len(acyclic)

    btrees = enumerate_class(ClassTag(ClassKind.TREE), sb, n_src).structures
    flipped = [flip(S) for S in btrees]
    _stream_identity(tally, btrees, back, flipped, targets,
                     lambda i, j, x, y: Disagreement(btrees[i], targets[j], f"count(S,M^B)={x}", f"count(flip S, M)={y}"))
    details["flipSources"] = len(btrees)

    connected = enumerate_class(ClassTag(ClassKind.CONNECTED), sig, n_src).structures
    augmented = [pg_augment(T) for T in connected]
    _stream_identity(tally, connected, targets, augmented, back,
                     lambda i, j, x, y: Disagreement(connected[i], targets[j], f"count(T,M)={x}", f"count(aug T, M^B)={y}"))
    details["augmentSources"] = len(connected)

    for T in acyclic:
        if flip(down_transform(T)) != T:
            tally.fail(Disagreement(T, T, "flip(down T)", "T", note="flip after down is not the identity"))
        else:
            tally.checked += 1
    for S in btrees:
        if down_transform(flip(S)) != S:
            tally.fail(Disagreement(S, S, "down(flip S)", "S", note="down after flip is not the identity"))
        else:
            tally.checked += 1
    details["roundTrips"] = len(acyclic) + len(btrees)
    corpus = {"sourceStates": n_src, "targets": len(targets), "signature": signature_to_json(sig), "seed": seed}
    return _identity_report("P4.9", corpus, tally, details)


def _l53(b, seed) -> TheoremReport:
    sig = _signature(b)
    targets = list(all_structures(sig, min(b["max_states"], 3)))
    sources = enumerate_class(ClassTag(ClassKind.PG), sig, b["source_states"]).structures
    by_depth: dict = {}
    for T in sources:
        by_depth.setdefault(classify(T).directed_depth, []).append(T)
    tally = _Tally()
    for d, group in sorted(by_depth.items()):
        cut = [gsub(M, d) for M in targets]
        _stream_identity(tally, group, targets, group, cut,
                         lambda i, j, x, y, group=group, d=d: Disagreement(group[i], targets[j], f"count(T,M)={x}",
                                                                          f"count(T, gsub^{d} M)={y}"))
    corpus = {"sourceStates": b["source_states"], "sources": len(sources), "targets": len(targets),
              "signature": signature_to_json(sig), "seed": seed}
    return _identity_report("L5.3", corpus, tally, {"identity": "count(T, M) = count(T, gsub^depth(T)(M))"})


# ---------------------------------------------------------------------------
# entry points


def verify_theorem(theorem: str, bounds: Optional[dict] = None, seed: int = 0) -> TheoremReport:
    """Run one experiment; the result depends only on ``(theorem, bounds, seed)``."""
    if theorem not in THEOREMS:
        raise HarnessError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    b = _bounds(bounds)
    if theorem == "Fact2.1":
        return _fact21(b, seed)
    if theorem == "L4.4":
        return _l44(b, seed)
    if theorem == "P4.9":
        return _p49(b, seed)
    if theorem == "L5.3":
        return _l53(b, seed)

    structures, pairs = _corpus(b, seed)
    details: dict = {}
    total = 0
    disagreements: list = []
    for k in b["k"] if theorem in DEPTH_INDEXED else (None,):
        prof, ids, name = _profile_for(theorem, structures, b, k)
        sub: dict = {}
        n, dis = _evaluate_pairs(theorem, structures, pairs, prof, ids, name, sub)
        total += n
        disagreements.extend(dis)
        label = "all" if k is None else f"k={k}"
        details[label] = {key: v for key, v in sub.items() if key != "verdicts"}
        if "verdicts" in sub:
            details[label]["verdicts"] = sub["verdicts"]
    corpus = _corpus_description(theorem, b, seed, len(structures))
    return TheoremReport(theorem, corpus, total, total - len(disagreements), disagreements, details)


# ---------------------------------------------------------------------------
# negative results


NEGATIVE_CASES = {
    "injective": "counting is injective; periodicity does not apply (Lovász regime)",
    "zero-in-segment": "0 recurs: counting is purely periodic, so K^1 and K^P separate",
    "one-in-segment-P1": "1 recurs with period 1: counts only record existence, so the hom-equivalent pair collapses",
    "one-in-segment-Pgt1": "1 recurs with period P > 1: K^1 and K^P separate",
    "one-not-in-segment": "1 never recurs: K^1 and a large clique separate",
}

DEMO_TREE_STATES = 4


def negative_demo(S: Semiring) -> dict:
    """Reproduce the ingredients of the clique argument for semiring ``S``."""
    report: dict = {"semiring": S.name}
    sig_tree_states = DEMO_TREE_STATES
    # (1) clique counts
    trees = enumerate_class(ClassTag(ClassKind.TREE), make_clique(1).signature, sig_tree_states).structures
    clique_rows = []
    clique_ok = True
    for n in range(1, 5):
        K = make_clique(n)
        for T in trees:
            got = count_hom_maps(T, K)
            expect = n ** (T.n - 1)
            ok = got == expect and count_homs(S, T, K) == count_in(S, expect)
            clique_ok &= ok
        clique_rows.append({"n": n, "trees": len(trees)})
    report["cliqueCounts"] = {"ok": clique_ok, "checked": clique_rows, "law": "|Hom(T, K^n)| = n^(|T|-1)"}
    # (2) cliques are pairwise bisimilar
    cliques = [make_clique(n) for n in range(1, 5)]
    bisim = all(simulation_fixpoint("bisimulation", A, B)[0] for A, B in itertools.combinations(cliques, 2))
    report["cliquesBisimilar"] = bisim
    # (3) the Figure-3 pair
    M, N = make_figure3_pair()
    bool_profiles_equal = True
    for T in trees:
        if (count_hom_maps(T, M) > 0) != (count_hom_maps(T, N) > 0):
            bool_profiles_equal = False
    report["figure3"] = {
        "homEquivalent": morphism_check("hom-equivalent", M, N),
        "booleanTreeProfilesEqual": bool_profiles_equal,
        "treeStates": sig_tree_states,
        "bisimilar": simulation_fixpoint("bisimulation", M, N)[0],
        "mutualDirectedSimulation": mutual_simulation(M, N, kind="directed-simulation"),
    }
    # (4) periodicity and the separating pair of the matching case
    per = analyze_periodicity(S)
    case = per.negative_case(S)
    report["periodicity"] = per.as_dict()
    report["case"] = case
    report["caseDescription"] = NEGATIVE_CASES[case]
    T = chain(sig_tree_states)
    edges = sig_tree_states - 1
    if case == "injective":
        report["separatingExample"] = {"note": "no periodic collapse; Lovász regime"}
    elif case == "one-in-segment-P1":
        report["separatingExample"] = {
            "pair": "figure3",
            "note": "hom-equivalent but neither bisimilar nor mutually directed-similar",
        }
    else:
        if case in ("zero-in-segment", "one-in-segment-Pgt1"):
            big = per.P
        else:
            big = 2
            while big ** edges < per.L:
                big += 1
        left = count_homs(S, T, make_clique(1))
        right = count_homs(S, T, make_clique(big))
        report["separatingExample"] = {
            "pair": f"K^1 vs K^{big}",
            "treeStates": sig_tree_states,
            "left": json_value(left),
            "right": json_value(right),
            "separates": left != right,
            "bisimilar": simulation_fixpoint("bisimulation", make_clique(1), make_clique(big))[0],
        }
    report["ok"] = bool(
        clique_ok
        and bisim
        and report["figure3"]["homEquivalent"]
        and report["figure3"]["booleanTreeProfilesEqual"]
        and not report["figure3"]["bisimilar"]
        and not report["figure3"]["mutualDirectedSimulation"]
        and report["separatingExample"].get("separates", True)
    )
    return report


def negative_demo_text(report: dict) -> str:
    lines = [f"semiring {report['semiring']}: case {report['case']} ({report['caseDescription']})"]
    per = report["periodicity"]
    lines.append(f"  periodicity: L={per['L']} P={per['P']} preperiod={per['preperiod']} segment={per['segment']}")
    lines.append(f"  clique counts n^(|T|-1): {'ok' if report['cliqueCounts']['ok'] else 'FAILED'}")
    lines.append(f"  K^1..K^4 pairwise bisimilar: {report['cliquesBisimilar']}")
    f3 = report["figure3"]
    lines.append(
        "  figure-3 pair: hom-equivalent={homEquivalent} boolean tree profiles equal={booleanTreeProfilesEqual} "
        "bisimilar={bisimilar} mutual directed simulation={mutualDirectedSimulation}".format(**f3)
    )
    lines.append(f"  separating example: {report['separatingExample']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# model-checker cross-validation


def checker_cross_validation(samples: int = 1000, seed: int = 0, max_depth: int = 3, max_states: int = 4) -> dict:
    """Compare the model checker with naive evaluation of the standard translation,
    and check that graded formulas of depth ``k`` cannot tell a structure from
    its depth-``k`` unraveling.

    Each sample draws a structure with at most ``max_states`` states, one
    basic modal formula and one graded formula, both of depth at most
    ``max_depth``.
    """
    from .logic.checker import check
    from .logic.fo import eval_fo, standard_translation
    from .logic.formulas import modal_depth, random_formula
    from .logic.parser import to_text

    sig = Signature(("p", "q"), ("R",))
    rng = np.random.default_rng(seed)
    st_bad, unr_bad = [], []
    for _ in range(samples):
        n = int(rng.integers(1, max_states + 1))
        M = random_structure(None, sig, n, int(rng.integers(2**31)), density=float(rng.uniform(0.1, 0.6)))
        phi = random_formula(sig, int(rng.integers(0, max_depth + 1)), rng)
        fo_value = eval_fo(M, standard_translation(phi), {"x": M.distinguished})
        if check(M, {}, phi) != fo_value:
            st_bad.append({"structure": to_json(M), "formula": to_text(phi)})
        psi = random_formula(sig, int(rng.integers(0, max_depth + 1)), rng, graded=True)
        k = modal_depth(psi)
        if check(M, {}, psi) != check(unravel(M, k), {}, psi):
            unr_bad.append({"structure": to_json(M), "formula": to_text(psi), "k": k})
    return {
        "samples": samples,
        "seed": seed,
        "maxDepth": max_depth,
        "maxStates": max_states,
        "standardTranslationDisagreements": st_bad,
        "unravelingDisagreements": unr_bad,
        "ok": not st_bad and not unr_bad,
    }
