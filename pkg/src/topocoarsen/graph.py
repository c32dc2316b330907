"""Mutable undirected graph with lazy node deletion and supernode bookkeeping.

Node ids are dense integers ``0..n-1``.  Deleting a node only tombstones it;
neighbor sets keep the dead id until more than half of a set is dead, at
which point that set is purged.  Edge deletion is physical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "GraphError",
    "InvalidNodeError",
    "InvalidEdgeError",
    "WorkingGraph",
    "SupernodeMap",
    "AttributedData",
    "open_neighborhood",
    "closed_neighborhood",
    "edge_neighborhood",
    "closed_edge_neighborhood",
]


class GraphError(Exception):
    pass


class InvalidNodeError(GraphError):
    pass


class InvalidEdgeError(GraphError):
    pass


class WorkingGraph:
    """Undirected simple graph over dense ids.

    ``adj``, ``alive`` and ``deg`` are exposed for the collapse passes, which
    read them directly in their inner loops.  Treat them as read-only and go
    through the mutating methods.  ``adj[u]`` may still hold dead ids; filter
    with ``alive`` when iterating.
    """

    def __init__(self, n: int = 0):
        self.adj: list[set[int]] = [set() for _ in range(n)]
        self.alive: list[bool] = [True] * n
        self.deg: list[int] = [0] * n
        self._stale: list[int] = [0] * n
        self.node_count = n
        self.edge_count = 0

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> WorkingGraph:
        """Build from an edge iterable; self-loops and repeats are skipped silently."""
        g = cls(n)
        adj = g.adj
        for x, y in edges:
            x = int(x)
            y = int(y)
            if x == y:
                continue
            if not (0 <= x < n and 0 <= y < n):
                raise InvalidNodeError(f"edge ({x}, {y}) outside 0..{n - 1}")
            if y in adj[x]:
                continue
            adj[x].add(y)
            adj[y].add(x)
            g.edge_count += 1
        g.deg = [len(s) for s in adj]
        return g

    @property
    def capacity(self) -> int:
        """Number of ids ever allocated (the original node count)."""
        return len(self.alive)

    def copy(self) -> WorkingGraph:
        g = WorkingGraph.__new__(WorkingGraph)
        g.adj = [{w for w in s if self.alive[w]} if a else set()
                 for s, a in zip(self.adj, self.alive)]
        g.alive = list(self.alive)
        g.deg = list(self.deg)
        g._stale = [0] * len(self.alive)
        g.node_count = self.node_count
        g.edge_count = self.edge_count
        return g

    # -- queries -----------------------------------------------------------

    def _check_node(self, u: int) -> None:
        if not (0 <= u < len(self.alive)) or not self.alive[u]:
            raise InvalidNodeError(f"node {u} is dead or unknown")

    def is_alive(self, u: int) -> bool:
        return 0 <= u < len(self.alive) and self.alive[u]

    def degree(self, u: int) -> int:
        self._check_node(u)
        return self.deg[u]

    def has_edge(self, x: int, y: int) -> bool:
        return (x != y and self.is_alive(x) and self.is_alive(y)
                and y in self.adj[x])

    def neighbors(self, u: int) -> list[int]:
        """Alive neighbors of ``u`` in ascending id order."""
        self._check_node(u)
        alive = self.alive
        return sorted(w for w in self.adj[u] if alive[w])

    def nodes(self) -> Iterator[int]:
        return (u for u, a in enumerate(self.alive) if a)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Alive edges as ``(x, y)`` with ``x < y``, in lexicographic order."""
        alive = self.alive
        for x, a in enumerate(alive):
            if not a:
                continue
            for y in sorted(w for w in self.adj[x] if w > x and alive[w]):
                yield x, y

    def edge_list(self) -> list[tuple[int, int]]:
        return list(self.edges())

    def max_degree(self) -> int:
        return max((d for d, a in zip(self.deg, self.alive) if a), default=0)

    def average_degree(self) -> float:
        return 2.0 * self.edge_count / self.node_count if self.node_count else 0.0

    # -- mutation ----------------------------------------------------------

    def delete_node(self, u: int, dominator: int,
                    supernodes: SupernodeMap | None = None) -> None:
        """Tombstone ``u`` and fold its supernode into ``dominator``'s."""
        if u == dominator:
            raise GraphError(f"cannot merge node {u} into itself")
        self._check_node(u)
        self._check_node(dominator)
        alive = self.alive
        deg = self.deg
        stale = self._stale
        adj = self.adj
        alive[u] = False
        for w in adj[u]:
            if alive[w]:
                deg[w] -= 1
                stale[w] += 1
                if 2 * stale[w] > len(adj[w]):
                    adj[w] = {x for x in adj[w] if alive[x]}
                    stale[w] = 0
        self.edge_count -= deg[u]
        self.node_count -= 1
        deg[u] = 0
        adj[u] = set()
        stale[u] = 0
        if supernodes is not None:
            supernodes.merge(u, dominator)

    def delete_edge(self, x: int, y: int) -> None:
        if not self.has_edge(x, y):
            raise InvalidEdgeError(f"edge ({x}, {y}) is not present")
        self.adj[x].discard(y)
        self.adj[y].discard(x)
        self.deg[x] -= 1
        self.deg[y] -= 1
        self.edge_count -= 1

    def insert_edge(self, x: int, y: int) -> None:
        self._check_node(x)
        self._check_node(y)
        if x == y:
            raise InvalidEdgeError(f"self-loop ({x}, {x})")
        if y in self.adj[x]:
            raise InvalidEdgeError(f"edge ({x}, {y}) already present")
        self.adj[x].add(y)
        self.adj[y].add(x)
        self.deg[x] += 1
        self.deg[y] += 1
        self.edge_count += 1

    def compact(self) -> None:
        """Purge every tombstoned id from every neighbor set."""
        alive = self.alive
        for u, a in enumerate(alive):
            if a and self._stale[u]:
                self.adj[u] = {w for w in self.adj[u] if alive[w]}
            self._stale[u] = 0

    def check_invariants(self) -> None:
        """Raise AssertionError if adjacency or caches are inconsistent."""
        alive = self.alive
        edges2 = 0
        for u, a in enumerate(alive):
            if not a:
                continue
            nbrs = {w for w in self.adj[u] if alive[w]}
            assert u not in nbrs, f"self-loop at {u}"
            assert self.deg[u] == len(nbrs), f"degree cache wrong at {u}"
            for w in nbrs:
                assert u in self.adj[w], f"asymmetric edge ({u}, {w})"
            edges2 += len(nbrs)
        assert edges2 == 2 * self.edge_count, "edge count drifted"
        assert self.node_count == sum(alive), "node count drifted"


def open_neighborhood(g: WorkingGraph, u: int) -> set[int]:
    g._check_node(u)
    alive = g.alive
    return {w for w in g.adj[u] if alive[w]}


def closed_neighborhood(g: WorkingGraph, u: int) -> set[int]:
    s = open_neighborhood(g, u)
    s.add(u)
    return s


def edge_neighborhood(g: WorkingGraph, x: int, y: int) -> set[int]:
    """Common neighbors of an alive edge, ``N(x) & N(y)``."""
    if not g.has_edge(x, y):
        raise InvalidEdgeError(f"edge ({x}, {y}) is not present")
    return open_neighborhood(g, x) & open_neighborhood(g, y)


def closed_edge_neighborhood(g: WorkingGraph, x: int, y: int) -> set[int]:
    s = edge_neighborhood(g, x, y)
    s.update((x, y))
    return s


class SupernodeMap:
    """Assignment of original nodes to surviving representatives.

    Merges only set a parent pointer, so chains of merges stay O(1) each;
    lookups compress paths.
    """

    def __init__(self, n: int):
        self._parent = list(range(n))
        self._size = [1] * n

    def __len__(self) -> int:
        return len(self._parent)

    def merge(self, u: int, into: int) -> None:
        parent = self._parent
        if parent[u] != u or parent[into] != into:
            raise GraphError(f"merge {u} -> {into}: both must be supernode roots")
        if u == into:
            raise GraphError(f"cannot merge supernode {u} into itself")
        parent[u] = into
        self._size[into] += self._size[u]
        self._size[u] = 0

    def find(self, x: int) -> int:
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def assignment(self) -> list[int]:
        return [self.find(x) for x in range(len(self._parent))]

    def size(self, s: int) -> int:
        return self._size[s]

    def supernodes(self) -> list[int]:
        return [x for x, p in enumerate(self._parent) if p == x]

    def member_lists(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {s: [] for s in self.supernodes()}
        for x, s in enumerate(self.assignment()):
            out[s].append(x)
        return out


@dataclass
class AttributedData:
    """Per-node features (n x d floats) and labels (n ints, -1 = unlabeled)."""

    features: np.ndarray | None = None
    labels: np.ndarray | None = None

    def __post_init__(self):
        if self.features is not None:
            self.features = np.asarray(self.features, dtype=float)
            if self.features.ndim != 2:
                raise ValueError("features must be a 2-d array")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.ndim != 1:
                raise ValueError("labels must be a 1-d array")
            if (self.labels < -1).any():
                raise ValueError("labels must be non-negative (-1 marks unlabeled)")
        if (self.features is not None and self.labels is not None
                and len(self.features) != len(self.labels)):
            raise ValueError("features and labels cover different node counts")

    def __len__(self) -> int:
        if self.features is not None:
            return len(self.features)
        return 0 if self.labels is None else len(self.labels)
