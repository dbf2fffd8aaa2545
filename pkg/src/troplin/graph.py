"""Labeled DAGs on nodes 1..n: structural queries, path and trek enumeration,
and exhaustive enumeration of all labeled DAGs at small n."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .trop_core import CycleError, SchemaError, SizeCapError

#: Enumeration of all labeled DAGs is capped here (29281 DAGs at n = 5).
ENUM_NODE_CAP = 5


class Dag:
    """Directed acyclic graph on nodes 1..n, defined by its edge set.

    Acyclicity is verified at construction.  Instances are immutable and
    hashable; two DAGs are equal iff they have the same node count and edges.
    """

    __slots__ = ("n", "edges", "_pa", "_ch", "_pa_mask", "_ch_mask", "_topo")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError("node count must be a positive integer")
        es = set()
        for e in edges:
            u, v = e
            if not (isinstance(u, int) and isinstance(v, int)):
                raise TypeError(f"edge {e!r} is not a pair of integers")
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) leaves the node range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            es.add((u, v))
        self.n = n
        self.edges = frozenset(es)
        pa = [set() for _ in range(n + 1)]
        ch = [set() for _ in range(n + 1)]
        for u, v in es:
            pa[v].add(u)
            ch[u].add(v)
        self._pa = tuple(frozenset(s) for s in pa)
        self._ch = tuple(frozenset(s) for s in ch)
        self._pa_mask = tuple(sum(1 << (u - 1) for u in pa[v]) for v in range(1, n + 1))
        self._ch_mask = tuple(sum(1 << (w - 1) for w in ch[v]) for v in range(1, n + 1))
        self._topo = self._toposort()

    def _toposort(self) -> tuple[int, ...]:
        indeg = {v: len(self._pa[v]) for v in range(1, self.n + 1)}
        ready = sorted(v for v, d in indeg.items() if d == 0)
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            added = False
            for w in self._ch[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    ready.append(w)
                    added = True
            if added:
                ready.sort()
        if len(order) < self.n:
            raise CycleError("edge set contains a directed cycle")
        return tuple(order)

    def _check_node(self, i) -> None:
        if not isinstance(i, int) or isinstance(i, bool) or not 1 <= i <= self.n:
            raise ValueError(f"node {i!r} out of range 1..{self.n}")

    def parents(self, i: int) -> frozenset:
        self._check_node(i)
        return self._pa[i]

    def children(self, i: int) -> frozenset:
        self._check_node(i)
        return self._ch[i]

    def _node_set(self, nodes) -> frozenset:
        if isinstance(nodes, int):
            nodes = (nodes,)
        s = frozenset(nodes)
        for v in s:
            self._check_node(v)
        return s

    def ancestors(self, nodes) -> frozenset:
        """All nodes with a directed path of length >= 1 into the given set."""
        s = self._node_set(nodes)
        out = set()
        stack = list(s)
        while stack:
            v = stack.pop()
            for p in self._pa[v]:
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return frozenset(out)

    def descendants(self, nodes) -> frozenset:
        s = self._node_set(nodes)
        out = set()
        stack = list(s)
        while stack:
            v = stack.pop()
            for c in self._ch[v]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return frozenset(out)

    def topological_order(self) -> tuple[int, ...]:
        return self._topo

    def skeleton(self) -> frozenset:
        return frozenset(frozenset(e) for e in self.edges)

    def unshielded_colliders(self) -> frozenset:
        """Triples ({i,j}, k) with i -> k <- j and no edge between i and j."""
        out = set()
        for k in range(1, self.n + 1):
            ps = sorted(self._pa[k])
            for i, j in itertools.combinations(ps, 2):
                if (i, j) not in self.edges and (j, i) not in self.edges:
                    out.add((frozenset((i, j)), k))
        return frozenset(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, edges={sorted(self.edges)})"

    def to_json_dict(self, weights=None) -> dict:
        edges = sorted(self.edges)
        doc = {"n": self.n, "edges": [{"from": u, "to": v} for u, v in edges]}
        if weights is not None:
            doc["weights"] = list(weights)
        return doc

    @classmethod
    def from_json_dict(cls, obj) -> "Dag":
        if not isinstance(obj, dict):
            raise SchemaError("graph JSON must be an object")
        try:
            n = obj["n"]
            raw_edges = obj["edges"]
        except KeyError as e:
            raise SchemaError(f"graph JSON is missing key {e.args[0]!r}") from None
        edges = []
        for item in raw_edges:
            try:
                edges.append((item["from"], item["to"]))
            except (TypeError, KeyError):
                raise SchemaError(f"bad edge record {item!r}") from None
        return cls(n, edges)


@dataclass(frozen=True)
class Path:
    """Simple path in a DAG's skeleton with per-step orientation.

    ``forward[t]`` is True when the edge between nodes[t] and nodes[t+1] is
    directed nodes[t] -> nodes[t+1] in the host graph.
    """

    nodes: tuple[int, ...]
    forward: tuple[bool, ...]

    def __post_init__(self):
        if len(self.nodes) < 2 or len(self.forward) != len(self.nodes) - 1:
            raise ValueError("path needs k+1 nodes and k step orientations")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path must be simple")


def all_simple_paths(g: Dag, i: int, j: int) -> list[Path]:
    """Every simple path between i and j in the skeleton, deterministic order."""
    g._check_node(i)
    g._check_node(j)
    if i == j:
        raise ValueError("path endpoints must differ")
    nbrs = {v: sorted(g._pa[v] | g._ch[v]) for v in range(1, g.n + 1)}
    out: list[Path] = []
    visited = {i}

    def rec(v, nodes, dirs):
        for w in nbrs[v]:
            step = (v, w) in g.edges
            if w == j:
                out.append(Path(nodes + (w,), dirs + (step,)))
            elif w not in visited:
                visited.add(w)
                rec(w, nodes + (w,), dirs + (step,))
                visited.remove(w)

    rec(i, (i,), ())
    return out


def colliders_on(path: Path) -> frozenset:
    """Interior nodes of the path whose two incident steps both point inward."""
    nodes, fwd = path.nodes, path.forward
    return frozenset(
        nodes[t] for t in range(1, len(nodes) - 1) if fwd[t - 1] and not fwd[t]
    )


@dataclass(frozen=True)
class Trek:
    """Two directed paths descending from a common top node.

    ``left`` and ``right`` both start at ``top`` and end at the trek's
    endpoints; a single-node path on both sides is the trivial trek.
    """

    top: int
    left: tuple[int, ...]
    right: tuple[int, ...]

    def __post_init__(self):
        if not self.left or not self.right or self.left[0] != self.top or self.right[0] != self.top:
            raise ValueError("trek sides must start at the top node")

    @property
    def left_end(self) -> int:
        return self.left[-1]

    @property
    def right_end(self) -> int:
        return self.right[-1]

    def steps(self) -> Iterator[tuple[int, int]]:
        """(parent, child) pairs along both sides."""
        for side in (self.left, self.right):
            for a, b in zip(side, side[1:]):
                yield a, b


def directed_paths(g: Dag, src: int, dst: int) -> list[tuple[int, ...]]:
    """All directed paths from src to dst; the trivial path when src == dst."""
    g._check_node(src)
    g._check_node(dst)
    if src == dst:
        return [(src,)]
    out: list[tuple[int, ...]] = []

    def rec(v, acc):
        for w in sorted(g._ch[v]):
            if w == dst:
                out.append(acc + (w,))
            else:
                rec(w, acc + (w,))

    rec(src, (src,))
    return out


def all_treks(g: Dag, i: int, j: int) -> list[Trek]:
    """Every trek between i and j, tops ascending then sides lexicographic.

    One-sided treks (top equal to an endpoint) and, for i == j, the trivial
    trek are included.  A trek and its mirror are distinct objects.
    """
    g._check_node(i)
    g._check_node(j)
    out: list[Trek] = []
    for top in range(1, g.n + 1):
        lefts = directed_paths(g, top, i)
        if not lefts:
            continue
        rights = directed_paths(g, top, j)
        for lp in lefts:
            for rp in rights:
                out.append(Trek(top, lp, rp))
    return out


def _acyclic(n: int, edges: list[tuple[int, int]]) -> bool:
    ch = [[] for _ in range(n + 1)]
    indeg = [0] * (n + 1)
    for u, v in edges:
        ch[u].append(v)
        indeg[v] += 1
    stack = [v for v in range(1, n + 1) if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in ch[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == n


def enumerate_dags(n: int) -> Iterator[Dag]:
    """Yield every labeled DAG on 1..n exactly once, in a fixed order.

    Iterates all assignments of {absent, forward, backward} to the node pairs
    in lexicographic order (first pair least significant) and keeps the
    acyclic ones.  Counts are 1, 3, 25, 543, 29281 for n = 1..5.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("node count must be a positive integer")
    if n > ENUM_NODE_CAP:
        raise SizeCapError(
            f"DAG enumeration is capped at n = {ENUM_NODE_CAP} (29281 DAGs); got {n}"
        )
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for code in range(3 ** len(pairs)):
        edges = []
        x = code
        for u, v in pairs:
            x, d = divmod(x, 3)
            if d == 1:
                edges.append((u, v))
            elif d == 2:
                edges.append((v, u))
        if _acyclic(n, edges):
            yield Dag(n, edges)
