"""Modal signatures, finite pointed structures (LTSs) and structure classes.

States of a structure are the integers ``0..n-1``; the distinguished state
can be any of them.  Structures are immutable and hashable.
"""

from __future__ import annotations

import enum
import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence


class StructureError(ValueError):
    """Raised for malformed signatures, structures or files."""


@dataclass(frozen=True)
class Expansion:
    """Provenance of a derived signature (backward or global expansion).

    ``names`` maps each derived action to the base action it inverts
    (backward mode) or is ``{R_G: None}`` for the global mode.
    """

    mode: str
    base: "Signature"
    names: tuple[tuple[str, Optional[str]], ...]

    def inverse_of(self, action: str) -> Optional[str]:
        return dict(self.names).get(action)


@dataclass(frozen=True)
class Signature:
    props: tuple[str, ...] = ()
    actions: tuple[str, ...] = ()
    derived: Optional[Expansion] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "props", tuple(self.props))
        object.__setattr__(self, "actions", tuple(self.actions))
        names = self.props + self.actions
        if any(not isinstance(x, str) or not x for x in names):
            raise StructureError("signature names must be nonempty strings")
        if len(set(names)) != len(names):
            raise StructureError(f"duplicate names in signature {names}")

    def prop_index(self, p: str) -> int:
        return self.props.index(p)

    def action_index(self, a: str) -> int:
        return self.actions.index(a)

    def __repr__(self):
        return f"Signature(props={self.props!r}, actions={self.actions!r})"


class Fact(NamedTuple):
    relation: str
    elements: tuple[int, ...]


class Structure:
    """A finite pointed structure over a modal signature.

    ``labels[m]`` is the set of propositions true at ``m`` and ``edges[R]``
    the set of ordered pairs in relation ``R``.  ``names`` optionally carries
    human-readable state names (e.g. walk strings of an unraveling); names
    never take part in equality.
    """

    __slots__ = ("signature", "n", "labels", "edges", "distinguished", "names", "_key", "_adj")

    def __init__(
        self,
        signature: Signature,
        n: int,
        labels: Optional[Sequence[Iterable[str]]] = None,
        edges: Optional[Mapping[str, Iterable[tuple[int, int]]]] = None,
        distinguished: int = 0,
        names: Optional[Sequence] = None,
    ):
        if n < 1:
            raise StructureError("a structure needs at least one state")
        if not 0 <= distinguished < n:
            raise StructureError(f"distinguished state {distinguished} not in 0..{n - 1}")
        props = set(signature.props)
        if labels is None:
            labels = [()] * n
        if len(labels) != n:
            raise StructureError(f"expected {n} labels, got {len(labels)}")
        labs = tuple(frozenset(l) for l in labels)
        for m, lab in enumerate(labs):
            if not lab <= props:
                raise StructureError(f"state {m} uses unknown propositions {sorted(lab - props)}")
        edges = dict(edges or {})
        unknown = set(edges) - set(signature.actions)
        if unknown:
            raise StructureError(f"unknown actions {sorted(unknown)}")
        frozen = {}
        for a in signature.actions:
            pairs = frozenset((int(u), int(v)) for u, v in edges.get(a, ()))
            for u, v in pairs:
                if not (0 <= u < n and 0 <= v < n):
                    raise StructureError(f"edge {a}({u},{v}) leaves the state set")
            frozen[a] = pairs
        self.signature = signature
        self.n = n
        self.labels = labs
        self.edges = frozen
        self.distinguished = distinguished
        self.names = tuple(names) if names is not None else None
        self._key = None
        self._adj = None

    # -- identity ---------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = (
                self.signature.props,
                self.signature.actions,
                self.n,
                self.distinguished,
                tuple(tuple(sorted(l)) for l in self.labels),
                tuple(tuple(sorted(self.edges[a])) for a in self.signature.actions),
            )
        return self._key

    def __eq__(self, other):
        return isinstance(other, Structure) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        es = ", ".join(f"{a}({u},{v})" for a in self.signature.actions for u, v in sorted(self.edges[a]))
        ls = ", ".join(f"{m}:{{{','.join(sorted(l))}}}" for m, l in enumerate(self.labels) if l)
        return f"Structure(n={self.n}, d={self.distinguished}, labels=[{ls}], edges=[{es}])"

    # -- adjacency --------------------------------------------------------
    def _adjacency(self):
        if self._adj is None:
            succ = {a: [[] for _ in range(self.n)] for a in self.signature.actions}
            pred = {a: [[] for _ in range(self.n)] for a in self.signature.actions}
            for a, pairs in self.edges.items():
                for u, v in sorted(pairs):
                    succ[a][u].append(v)
                    pred[a][v].append(u)
            self._adj = (
                {a: tuple(tuple(x) for x in s) for a, s in succ.items()},
                {a: tuple(tuple(x) for x in p) for a, p in pred.items()},
            )
        return self._adj

    def succ(self, m: int, action: Optional[str] = None) -> tuple[int, ...]:
        s = self._adjacency()[0]
        if action is not None:
            return s[action][m]
        return tuple(sorted({v for a in self.signature.actions for v in s[a][m]}))

    def pred(self, m: int, action: Optional[str] = None) -> tuple[int, ...]:
        p = self._adjacency()[1]
        if action is not None:
            return p[action][m]
        return tuple(sorted({u for a in self.signature.actions for u in p[a][m]}))

    def neighbours(self, m: int) -> set[int]:
        return set(self.succ(m)) | set(self.pred(m))

    def facts(self) -> list[Fact]:
        out = [Fact(p, (m,)) for m in range(self.n) for p in sorted(self.labels[m])]
        out += [Fact(a, e) for a in self.signature.actions for e in sorted(self.edges[a])]
        return out

    def binary_facts(self) -> list[tuple[str, int, int]]:
        return [(a, u, v) for a in self.signature.actions for u, v in sorted(self.edges[a])]

    @property
    def num_edges(self) -> int:
        return sum(len(p) for p in self.edges.values())

    # -- derived structures ----------------------------------------------
    def with_distinguished(self, d: int) -> "Structure":
        return Structure(self.signature, self.n, self.labels, self.edges, d, self.names)

    def induced(self, states: Iterable[int]) -> "Structure":
        """Induced substructure on ``states`` (order preserved, reindexed)."""
        keep = sorted(set(states))
        if self.distinguished not in keep:
            raise StructureError("induced substructure must keep the distinguished state")
        idx = {m: i for i, m in enumerate(keep)}
        edges = {
            a: [(idx[u], idx[v]) for u, v in pairs if u in idx and v in idx]
            for a, pairs in self.edges.items()
        }
        names = [self.names[m] for m in keep] if self.names is not None else None
        return Structure(self.signature, len(keep), [self.labels[m] for m in keep], edges, idx[self.distinguished], names)

    def relabel(self, perm: Sequence[int]) -> "Structure":
        """Rename state ``m`` to ``perm[m]``."""
        labels = [None] * self.n
        for m in range(self.n):
            labels[perm[m]] = self.labels[m]
        edges = {a: [(perm[u], perm[v]) for u, v in pairs] for a, pairs in self.edges.items()}
        return Structure(self.signature, self.n, labels, edges, perm[self.distinguished])

    def reduct(self, signature: Signature) -> "Structure":
        """Forget every symbol not in ``signature``."""
        if not set(signature.props) <= set(self.signature.props):
            missing = set(signature.props) - set(self.signature.props)
            raise StructureError(f"reduct signature has unknown propositions {sorted(missing)}")
        labels = [l & set(signature.props) for l in self.labels]
        edges = {a: self.edges.get(a, ()) for a in signature.actions}
        return Structure(signature, self.n, labels, edges, self.distinguished, self.names)


def structure(
    props: Sequence[str],
    actions: Sequence[str],
    n: int,
    labels: Optional[Mapping[int, Iterable[str]]] = None,
    edges: Iterable[tuple] = (),
    distinguished: int = 0,
) -> Structure:
    """Convenience constructor.

    ``edges`` holds ``(action, u, v)`` triples, or ``(u, v)`` pairs when the
    signature has exactly one action.
    """
    sig = Signature(tuple(props), tuple(actions))
    labs = [labels.get(m, ()) if labels else () for m in range(n)]
    es: dict[str, list] = {a: [] for a in sig.actions}
    for e in edges:
        if len(e) == 2:
            if len(sig.actions) != 1:
                raise StructureError("bare (u, v) edges need a single-action signature")
            es[sig.actions[0]].append(tuple(e))
        else:
            es[e[0]].append((e[1], e[2]))
    return Structure(sig, n, labs, es, distinguished)


# ---------------------------------------------------------------------------
# Paths, components and classification


def connected_components(M: Structure) -> list[list[int]]:
    """Blocks of states joined by undirected sigma-paths, in order of least element."""
    seen = [False] * M.n
    blocks = []
    for s in range(M.n):
        if seen[s]:
            continue
        block, queue = [], deque([s])
        seen[s] = True
        while queue:
            m = queue.popleft()
            block.append(m)
            for x in sorted(M.neighbours(m)):
                if not seen[x]:
                    seen[x] = True
                    queue.append(x)
        blocks.append(sorted(block))
    return blocks


def directed_depths(M: Structure, root: Optional[int] = None) -> dict[int, int]:
    """Shortest directed-path distance from ``root`` to every reachable state."""
    root = M.distinguished if root is None else root
    dist = {root: 0}
    queue = deque([root])
    while queue:
        m = queue.popleft()
        for x in M.succ(m):
            if x not in dist:
                dist[x] = dist[m] + 1
                queue.append(x)
    return dist


def path_depths(M: Structure, root: Optional[int] = None) -> dict[int, int]:
    """Shortest undirected sigma-path distance from ``root``."""
    root = M.distinguished if root is None else root
    dist = {root: 0}
    queue = deque([root])
    while queue:
        m = queue.popleft()
        for x in sorted(M.neighbours(m)):
            if x not in dist:
                dist[x] = dist[m] + 1
                queue.append(x)
    return dist


def is_acyclic(M: Structure) -> bool:
    # facts are edges of an undirected multigraph; a self-loop or two facts
    # on the same pair already form a simple cycle
    parent = list(range(M.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, u, v in M.binary_facts():
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def in_degrees(M: Structure) -> list[int]:
    deg = [0] * M.n
    for _, _, v in M.binary_facts():
        deg[v] += 1
    return deg


class ClassKind(enum.Enum):
    TREE = "tree"
    ACYCLIC = "acyclic"
    FOREST = "forest"
    PG = "pg"
    CONNECTED = "connected"


@dataclass(frozen=True)
class ClassTag:
    kind: ClassKind
    depth: Optional[int] = None

    def __post_init__(self):
        if isinstance(self.kind, str):
            object.__setattr__(self, "kind", ClassKind(self.kind))
        if self.depth is not None and self.depth < 0:
            raise StructureError("class depth bound must be nonnegative")


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify`.

    ``directed_depth`` is defined for point-generated inputs, ``path_depth``
    for connected ones and ``forest_depth`` (the largest component depth)
    for forests; each is ``None`` when the notion does not apply.
    """

    kinds: frozenset
    directed_depth: Optional[int]
    path_depth: Optional[int]
    forest_depth: Optional[int] = None

    def __contains__(self, kind) -> bool:
        return ClassKind(kind) in self.kinds

    def satisfies(self, tag: ClassTag) -> bool:
        if tag.kind not in self.kinds:
            return False
        if tag.depth is None:
            return True
        depth = {
            ClassKind.TREE: self.directed_depth,
            ClassKind.PG: self.directed_depth,
            ClassKind.ACYCLIC: self.path_depth,
            ClassKind.CONNECTED: self.path_depth,
            ClassKind.FOREST: self.forest_depth,
        }[tag.kind]
        return depth <= tag.depth


def _is_rooted_tree(M: Structure, block: Sequence[int], root: int, indeg: Sequence[int]) -> bool:
    # unique directed path to every state <=> root has no incoming fact, every
    # other state exactly one, and the block is connected (then n-1 facts)
    return indeg[root] == 0 and all(indeg[m] == 1 for m in block if m != root)


def classify(M: Structure) -> Classification:
    """Every class the structure belongs to, with its depths."""
    kinds = set()
    dd = directed_depths(M)
    pd = path_depths(M)
    connected = len(pd) == M.n
    pg = len(dd) == M.n
    acyclic = is_acyclic(M)
    indeg = in_degrees(M)
    if connected:
        kinds.add(ClassKind.CONNECTED)
        if acyclic:
            kinds.add(ClassKind.ACYCLIC)
    if pg:
        kinds.add(ClassKind.PG)
    tree = pg and acyclic and _is_rooted_tree(M, range(M.n), M.distinguished, indeg)
    if tree:
        kinds.add(ClassKind.TREE)
    forest_depth = None
    if acyclic:
        ok, fdepth = True, 0
        for block in connected_components(M):
            roots = [m for m in block if indeg[m] == 0]
            if len(roots) != 1 or not _is_rooted_tree(M, block, roots[0], indeg):
                ok = False
                break
            if M.distinguished in block and roots[0] != M.distinguished:
                ok = False
                break
            fdepth = max(fdepth, max(directed_depths(M, roots[0]).values()))
        if ok:
            kinds.add(ClassKind.FOREST)
            forest_depth = fdepth
    return Classification(
        frozenset(kinds),
        max(dd.values()) if pg else None,
        max(pd.values()) if connected else None,
        forest_depth,
    )


def in_class(M: Structure, tag: ClassTag) -> bool:
    return classify(M).satisfies(tag)


# ---------------------------------------------------------------------------
# Canonical encodings


def bit_layout(signature: Signature, n: int) -> tuple[int, int]:
    """(number of edge bits, total bits) of the integer encoding used below."""
    e = len(signature.actions) * n * n
    return e, e + len(signature.props) * n


def encode(M: Structure) -> int:
    """Integer serialization with the distinguished state read as-is.

    Bit ``a*n*n + u*n + v`` is edge ``R_a(u, v)``; bit ``E + p*n + m`` is
    proposition ``p`` at ``m`` where ``E`` is the number of edge bits.
    """
    n = M.n
    sig = M.signature
    e_bits, _ = bit_layout(sig, n)
    code = 0
    for ai, a in enumerate(sig.actions):
        for u, v in M.edges[a]:
            code |= 1 << (ai * n * n + u * n + v)
    for pi, p in enumerate(sig.props):
        for m in range(n):
            if p in M.labels[m]:
                code |= 1 << (e_bits + pi * n + m)
    return code


def decode(signature: Signature, n: int, code: int, distinguished: int = 0) -> Structure:
    e_bits, _ = bit_layout(signature, n)
    edges = {a: [] for a in signature.actions}
    for ai, a in enumerate(signature.actions):
        for u in range(n):
            for v in range(n):
                if code >> (ai * n * n + u * n + v) & 1:
                    edges[a].append((u, v))
    labels = [
        [p for pi, p in enumerate(signature.props) if code >> (e_bits + pi * n + m) & 1]
        for m in range(n)
    ]
    return Structure(signature, n, labels, edges, distinguished)


MAX_CANONICAL_STATES = 8


def canonical_code(M: Structure) -> tuple[int, int]:
    """``(n, code)`` minimal over renamings that send the distinguished state to 0.

    Two structures over the same signature are isomorphic iff their codes
    agree.  Only intended for small structures.
    """
    if M.n > MAX_CANONICAL_STATES:
        raise StructureError(f"canonical codes limited to {MAX_CANONICAL_STATES} states")
    others = [m for m in range(M.n) if m != M.distinguished]
    best = None
    for order in itertools.permutations(range(1, M.n)):
        perm = [0] * M.n
        for m, target in zip(others, order):
            perm[m] = target
        code = encode(M.relabel(perm))
        if best is None or code < best:
            best = code
    return (M.n, best)


def canonical_form(M: Structure) -> Structure:
    n, code = canonical_code(M)
    return decode(M.signature, n, code, 0)


def tree_code(M: Structure, root: Optional[int] = None):
    """Canonical nested-tuple code of the tree hanging below ``root``.

    Only meaningful when ``M`` is a tree (or the part below ``root`` is).
    """
    root = M.distinguished if root is None else root

    def go(m):
        kids = sorted((a, go(v)) for a in M.signature.actions for v in M.succ(m, a))
        return (tuple(sorted(M.labels[m])), tuple(kids))

    return go(root)


# ---------------------------------------------------------------------------
# JSON and DOT


def signature_to_json(sig: Signature) -> dict:
    out = {"props": list(sig.props), "actions": list(sig.actions)}
    if sig.derived is not None:
        out["derivedFrom"] = {
            "mode": sig.derived.mode,
            "base": signature_to_json(sig.derived.base),
            "names": {k: v for k, v in sig.derived.names},
        }
    return out


def signature_from_json(obj: Mapping) -> Signature:
    derived = None
    if "derivedFrom" in obj:
        d = obj["derivedFrom"]
        derived = Expansion(d["mode"], signature_from_json(d["base"]), tuple(d["names"].items()))
    return Signature(tuple(obj.get("props", ())), tuple(obj.get("actions", ())), derived)


def to_json(M: Structure) -> dict:
    out = signature_to_json(M.signature)
    out.update(
        {
            "states": M.n,
            "distinguished": M.distinguished,
            "labels": {str(m): sorted(M.labels[m]) for m in range(M.n)},
            "edges": [{"action": a, "from": u, "to": v} for a, u, v in M.binary_facts()],
        }
    )
    return out


def from_json(obj) -> Structure:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        sig = signature_from_json(obj)
        n = int(obj["states"])
        labels = [obj.get("labels", {}).get(str(m), []) for m in range(n)]
        edges: dict[str, list] = {a: [] for a in sig.actions}
        for e in obj.get("edges", []):
            if e["action"] not in edges:
                raise StructureError(f"unknown action {e['action']!r}")
            edges[e["action"]].append((int(e["from"]), int(e["to"])))
        return Structure(sig, n, labels, edges, int(obj.get("distinguished", 0)))
    except (KeyError, TypeError) as exc:
        raise StructureError(f"malformed structure JSON: {exc}") from exc


def dumps(M: Structure) -> str:
    return json.dumps(to_json(M), sort_keys=True)


def load(path) -> Structure:
    with open(path) as fh:
        return from_json(json.load(fh))


def save(M: Structure, path) -> None:
    with open(path, "w") as fh:
        json.dump(to_json(M), fh, indent=2, sort_keys=True)


def to_dot(M: Structure, name: str = "M") -> str:
    lines = [f"digraph {name} {{"]
    for m in range(M.n):
        shape = "doublecircle" if m == M.distinguished else "circle"
        label = f"{m}:{{{','.join(sorted(M.labels[m]))}}}"
        lines.append(f'  {m} [shape={shape}, label="{label}"];')
    for a, u, v in M.binary_facts():
        lines.append(f'  {u} -> {v} [label="{a}"];')
    lines.append("}")
    return "\n".join(lines)
