"""Small-scale ground truth: clique complexes, GF(2) Betti numbers,
exhaustive dominance scans and all-pairs BFS distances.

Everything here is deliberately naive and independent of the collapse code.
Columns of boundary matrices are Python ints used as GF(2) bit vectors.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .graph import WorkingGraph

__all__ = [
    "OracleScaleError",
    "CliqueComplex",
    "BettiVector",
    "build_clique_complex",
    "gf2_rank",
    "betti_numbers",
    "betti",
    "brute_force_dominated_scan",
    "all_pairs_distances",
    "component_count",
]

MAX_SIMPLICES = 10**6


class OracleScaleError(Exception):
    """Graph too large for exhaustive enumeration."""


def _snapshot(g: WorkingGraph) -> dict[int, set[int]]:
    alive = g.alive
    return {u: {w for w in g.adj[u] if alive[w]} for u in g.nodes()}


@dataclass
class CliqueComplex:
    max_dim: int
    simplices: list[list[tuple[int, ...]]]
    # boundary[k] maps k-simplices to (k-1)-simplices; boundary[0] is empty
    boundary: list[list[int]] = field(default_factory=list)

    def count(self, k: int) -> int:
        return len(self.simplices[k]) if k < len(self.simplices) else 0


def build_clique_complex(g: WorkingGraph, max_dim: int = 2) -> CliqueComplex:
    if max_dim not in (1, 2, 3):
        raise ValueError("max_dim must be 1, 2 or 3")
    nbrs = _snapshot(g)
    up = {u: sorted(w for w in s if w > u) for u, s in nbrs.items()}
    nodes = [(u,) for u in sorted(nbrs)]
    edges = [(u, v) for u in sorted(up) for v in up[u]]
    simplices = [nodes, edges]
    prev = edges
    for k in range(2, max_dim + 1):
        cur = []
        for s in prev:
            # extend by a common higher neighbor of every vertex
            cand = set(up[s[-1]])
            for a in s[:-1]:
                cand &= nbrs[a]
            for w in sorted(cand):
                cur.append(s + (w,))
            if len(cur) > MAX_SIMPLICES:
                raise OracleScaleError(
                    f"more than {MAX_SIMPLICES} simplices of dimension {k}")
        simplices.append(cur)
        prev = cur
    cx = CliqueComplex(max_dim, simplices)
    cx.boundary = [[]]
    for k in range(1, max_dim + 1):
        index = {s: i for i, s in enumerate(simplices[k - 1])}
        cols = []
        for s in simplices[k]:
            col = 0
            for face in combinations(s, k):
                col |= 1 << index[face]
            cols.append(col)
        cx.boundary.append(cols)
    return cx


def gf2_rank(columns: list[int]) -> int:
    """Rank over GF(2) of a matrix given as integer bit-vector columns."""
    pivots: dict[int, int] = {}
    rank = 0
    for col in columns:
        while col:
            top = col.bit_length() - 1
            if top in pivots:
                col ^= pivots[top]
            else:
                pivots[top] = col
                rank += 1
                break
    return rank


@dataclass(frozen=True)
class BettiVector:
    beta0: int
    beta1: int
    beta2: int | None = None

    def as_tuple(self) -> tuple:
        if self.beta2 is None:
            return (self.beta0, self.beta1)
        return (self.beta0, self.beta1, self.beta2)


def betti_numbers(cx: CliqueComplex) -> BettiVector:
    ranks = [0] + [gf2_rank(cx.boundary[k]) for k in range(1, cx.max_dim + 1)]
    ranks.append(0)
    n, m = cx.count(0), cx.count(1)
    b0 = n - ranks[1]
    if cx.max_dim < 2:
        raise ValueError("beta1 needs triangles; build with max_dim >= 2")
    b1 = (m - ranks[1]) - ranks[2]
    b2 = None
    if cx.max_dim >= 3:
        b2 = (cx.count(2) - ranks[2]) - ranks[3]
    return BettiVector(b0, b1, b2)


def betti(g: WorkingGraph, max_dim: int = 2) -> BettiVector:
    return betti_numbers(build_clique_complex(g, max_dim))


def brute_force_dominated_scan(g: WorkingGraph):
    """Every dominated node and edge with all of its dominators.

    Returns ``(nodes, edges)``: ``nodes`` maps ``u`` to the sorted list of
    ``v != u`` with ``N[u] <= N[v]``; ``edges`` maps ``(x, y)``, ``x < y``,
    to the sorted ``v`` outside ``{x, y}`` with ``N[x] & N[y] <= N[v]``.
    """
    nbrs = _snapshot(g)
    closed = {u: s | {u} for u, s in nbrs.items()}
    nodes = {}
    for u in sorted(nbrs):
        doms = [v for v in sorted(nbrs) if v != u and closed[u] <= closed[v]]
        if doms:
            nodes[u] = doms
    edges = {}
    for x in sorted(nbrs):
        for y in sorted(nbrs[x]):
            if y <= x:
                continue
            nxy = closed[x] & closed[y]
            doms = [v for v in sorted(nbrs) if v not in (x, y) and nxy <= closed[v]]
            if doms:
                edges[(x, y)] = doms
    return nodes, edges


def all_pairs_distances(g: WorkingGraph) -> np.ndarray:
    """Hop distances indexed by node id; dead or unreachable pairs are inf."""
    n = g.capacity
    nbrs = _snapshot(g)
    dist = np.full((n, n), np.inf)
    for s in nbrs:
        row = dist[s]
        row[s] = 0
        q = deque([s])
        while q:
            a = q.popleft()
            da = row[a] + 1
            for b in nbrs[a]:
                if row[b] == np.inf:
                    row[b] = da
                    q.append(b)
    return dist


def component_count(g: WorkingGraph) -> int:
    """Connected components among alive nodes (union-find)."""
    parent = {u: u for u in g.nodes()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for x, y in g.edges():
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry
            count -= 1
    return count
