"""Dominance tests and the worklist-driven strong/edge collapse passes."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .graph import InvalidEdgeError, SupernodeMap, WorkingGraph

__all__ = [
    "DominanceResult",
    "Worklist",
    "NOT_DOMINATED",
    "find_node_dominator",
    "find_edge_dominator",
    "edge_dominator",
    "candidate_order",
    "strong_collapse",
    "edge_collapse",
    "incident_edges",
]

Observer = Callable[..., None]


@dataclass(frozen=True)
class DominanceResult:
    dominated: bool
    dominator: int | None = None
    removed_set_size: int = 0

    def __bool__(self) -> bool:
        return self.dominated


NOT_DOMINATED = DominanceResult(False)


class Worklist:
    """FIFO queue that never holds the same item twice."""

    def __init__(self, items: Iterable[Hashable] = ()):
        self._queue: deque = deque()
        self._members: set = set()
        self.extend(items)

    def push(self, item) -> bool:
        if item in self._members:
            return False
        self._members.add(item)
        self._queue.append(item)
        return True

    def extend(self, items: Iterable[Hashable]) -> None:
        for item in items:
            self.push(item)

    def pop(self):
        item = self._queue.popleft()
        self._members.discard(item)
        return item

    def __contains__(self, item) -> bool:
        return item in self._members

    def __len__(self) -> int:
        return len(self._queue)

    def __bool__(self) -> bool:
        return bool(self._queue)


def candidate_order(nbrs: Iterable[int], u: int,
                    labels: Sequence[int] | None) -> list[int]:
    """Neighbors sharing ``u``'s label first, then ascending id."""
    if labels is None or labels[u] < 0:
        return sorted(nbrs)
    lu = labels[u]
    return sorted(nbrs, key=lambda w: (labels[w] != lu, w))


def find_node_dominator(g: WorkingGraph, u: int, r: int = 0,
                        labels: Sequence[int] | None = None) -> DominanceResult:
    """Find a neighbor ``v`` whose closed neighborhood covers ``N[u]``.

    With ``r > 0`` up to ``r`` members of ``N[u]`` may be missing from
    ``N[v]``; the missing set is the witness and its size is reported.
    """
    g._check_node(u)
    if r < 0:
        raise ValueError("r must be non-negative")
    alive = g.alive
    adj = g.adj
    deg = g.deg
    du = deg[u]
    if du == 0:
        return NOT_DOMINATED
    nbrs = [w for w in adj[u] if alive[w]]
    for v in candidate_order(nbrs, u, labels):
        if deg[v] < du:
            continue
        adj_v = adj[v]
        missing = 0
        for w in nbrs:
            if w != v and w not in adj_v:
                missing += 1
                if missing > r:
                    break
        else:
            return DominanceResult(True, v, missing)
    return NOT_DOMINATED


def edge_dominator(g: WorkingGraph, x: int, y: int) -> int | None:
    """Dominator of the pair ``(x, y)``, whether or not the edge exists.

    Returns the lowest-id ``v`` in ``N(x) & N(y)`` adjacent to every other
    common neighbor, or ``None``.
    """
    alive = g.alive
    adj = g.adj
    ax, ay = adj[x], adj[y]
    if len(ax) > len(ay):
        ax, ay = ay, ax
    common = sorted(w for w in ax if w in ay and alive[w])
    for v in common:
        adj_v = adj[v]
        for c in common:
            if c != v and c not in adj_v:
                break
        else:
            return v
    return None


def find_edge_dominator(g: WorkingGraph, x: int, y: int) -> DominanceResult:
    if not g.has_edge(x, y):
        raise InvalidEdgeError(f"edge ({x}, {y}) is not present")
    v = edge_dominator(g, x, y)
    return NOT_DOMINATED if v is None else DominanceResult(True, v)


def _reached(g: WorkingGraph, stop_at: int) -> bool:
    return g.node_count <= stop_at


def strong_collapse(g: WorkingGraph, supernodes: SupernodeMap | None = None, *,
                    theta1: float = math.inf, r: int = 0,
                    labels: Sequence[int] | None = None,
                    seeds: Iterable[int] | None = None, stop_at: int = -1,
                    flagged: set[int] | None = None,
                    observer: Observer | None = None) -> int:
    """Repeatedly merge dominated nodes into their dominators.

    ``seeds`` defaults to every alive node.  Neighbors of each removed node
    are re-queued and also added to ``flagged`` for the next edge pass.  The
    pass stops early once ``g.node_count <= stop_at``.  Returns the number
    of nodes removed.
    """
    alive = g.alive
    deg = g.deg
    if seeds is None:
        seeds = g.nodes()
    work = Worklist(u for u in seeds if alive[u])
    removed = 0
    while work and not _reached(g, stop_at):
        u = work.pop()
        if not alive[u] or deg[u] > theta1:
            continue
        res = find_node_dominator(g, u, r, labels)
        if not res.dominated:
            continue
        nbrs = [w for w in g.adj[u] if alive[w]]
        g.delete_node(u, res.dominator, supernodes)
        removed += 1
        if observer is not None:
            observer("node", u, res.dominator)
        nbrs.sort()
        work.extend(nbrs)
        if flagged is not None:
            flagged.update(nbrs)
    return removed


def _heterophilic(labels: Sequence[int], x: int, y: int) -> bool:
    return labels[x] >= 0 and labels[y] >= 0 and labels[x] != labels[y]


def edge_collapse(g: WorkingGraph, *, theta1: float = math.inf,
                  labels: Sequence[int] | None = None,
                  seeds: Iterable[tuple[int, int]] | None = None,
                  flagged: set[int] | None = None,
                  observer: Observer | None = None) -> int:
    """Delete dominated edges until none of the queued edges is dominated.

    ``seeds`` defaults to every alive edge.  With labels, heterophilic seed
    edges are queued ahead of the rest.  Endpoints of deleted edges go into
    ``flagged``.  Returns the number of edges removed.
    """
    alive = g.alive
    adj = g.adj
    deg = g.deg
    if seeds is None:
        seeds = g.edges()
    seeds = [(x, y) if x < y else (y, x) for x, y in seeds]
    if labels is not None:
        seeds = ([e for e in seeds if _heterophilic(labels, *e)]
                 + [e for e in seeds if not _heterophilic(labels, *e)])
    work = Worklist(seeds)
    cap = 2 * theta1
    removed = 0
    while work:
        x, y = work.pop()
        if not (alive[x] and alive[y]) or y not in adj[x]:
            continue
        if deg[x] + deg[y] > cap:
            continue
        v = edge_dominator(g, x, y)
        if v is None:
            continue
        g.delete_edge(x, y)
        removed += 1
        if observer is not None:
            observer("edge", x, y, v)
        if flagged is not None:
            flagged.add(x)
            flagged.add(y)
        for a in (x, y):
            for w in sorted(w for w in adj[a] if alive[w]):
                work.push((a, w) if a < w else (w, a))
    return removed


def incident_edges(g: WorkingGraph, nodes: Iterable[int]) -> list[tuple[int, int]]:
    """Alive edges touching any of ``nodes``, deduplicated and sorted."""
    alive = g.alive
    out = set()
    for a in nodes:
        if not alive[a]:
            continue
        for w in g.adj[a]:
            if alive[w]:
                out.add((a, w) if a < w else (w, a))
    return sorted(out)
