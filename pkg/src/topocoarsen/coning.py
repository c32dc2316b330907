"""Neighborhood coning: insert dominated edges so a node becomes dominated.

For a node ``u`` and an apex ``v`` in ``N(u)``, every missing edge ``(v, w)``
with ``w`` in ``N(u)`` must be insertable as a dominated edge.  Each check
sees the graph with the earlier insertions of the same plan already applied,
so each insertion is undone by a single edge collapse.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .collapse import candidate_order, edge_dominator
from .graph import SupernodeMap, WorkingGraph

__all__ = ["ConingPlan", "ConingStats", "DegreeQueue", "plan_coning",
           "neighborhood_coning"]


@dataclass
class ConingPlan:
    target: int
    apex: int
    insert_list: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class ConingStats:
    nodes_removed: int = 0
    edges_inserted: int = 0
    edges_pruned: int = 0


def plan_coning(g: WorkingGraph, u: int,
                labels: Sequence[int] | None = None) -> ConingPlan | None:
    """First apex (same label first, then lowest id) that can cone ``u``."""
    g._check_node(u)
    alive = g.alive
    adj = g.adj
    nbrs = sorted(w for w in adj[u] if alive[w])
    for v in candidate_order(nbrs, u, labels):
        accepted: list[tuple[int, int]] = []
        ok = True
        for w in nbrs:
            if w == v or w in adj[v]:
                continue
            if edge_dominator(g, v, w) is None:
                ok = False
                break
            # applied tentatively so later checks see it; rolled back below
            g.insert_edge(v, w)
            accepted.append((v, w))
        for a, b in reversed(accepted):
            g.delete_edge(a, b)
        if ok:
            return ConingPlan(u, v, accepted)
    return None


class DegreeQueue:
    """Min-heap of nodes keyed by current degree, ties by id.

    Degree changes are handled by pushing a fresh entry; popped entries that
    no longer match the latest pushed degree are skipped.
    """

    def __init__(self, g: WorkingGraph, nodes=None):
        self._g = g
        self._latest: dict[int, int] = {}
        deg = g.deg
        nodes = g.nodes() if nodes is None else nodes
        self._heap = [(deg[u], u) for u in nodes if g.alive[u]]
        heapq.heapify(self._heap)
        for d, u in self._heap:
            self._latest[u] = d

    def __contains__(self, u: int) -> bool:
        return u in self._latest and self._g.alive[u]

    def push(self, u: int) -> None:
        """Enqueue ``u``, or refresh its key if its degree changed."""
        d = self._g.deg[u]
        if self._g.alive[u] and self._latest.get(u) != d:
            self._latest[u] = d
            heapq.heappush(self._heap, (d, u))

    def pop(self) -> int | None:
        heap, latest, alive = self._heap, self._latest, self._g.alive
        while heap:
            d, u = heapq.heappop(heap)
            if alive[u] and latest.get(u) == d:
                del latest[u]
                return u
        return None


def neighborhood_coning(g: WorkingGraph, supernodes: SupernodeMap | None = None, *,
                        theta1: float = math.inf,
                        labels: Sequence[int] | None = None,
                        stop_at: int = -1,
                        touched: set[int] | None = None,
                        observer: Callable[..., None] | None = None) -> ConingStats:
    """Cone nodes in ascending degree order until the queue runs dry.

    After a successful coning, the neighbors of the removed node are
    re-queued with their new degrees, including ones popped earlier.
    Inserted edges still dominated once the node is gone are deleted again.
    """
    alive = g.alive
    adj = g.adj
    deg = g.deg
    queue = DegreeQueue(g)
    stats = ConingStats()
    while g.node_count > stop_at:
        u = queue.pop()
        if u is None:
            break
        if deg[u] > theta1:
            continue
        plan = plan_coning(g, u, labels)
        if plan is None:
            continue
        v = plan.apex
        for a, b in plan.insert_list:
            g.insert_edge(a, b)
        nbrs = sorted(w for w in adj[u] if alive[w])
        g.delete_node(u, v, supernodes)
        stats.nodes_removed += 1
        stats.edges_inserted += len(plan.insert_list)
        if observer is not None:
            observer("cone", u, v, list(plan.insert_list))
        for a, b in plan.insert_list:
            if b in adj[a]:
                dom = edge_dominator(g, a, b)
                if dom is not None:
                    g.delete_edge(a, b)
                    stats.edges_pruned += 1
                    if observer is not None:
                        observer("prune", a, b, dom)
        if observer is not None:
            observer("cone_done", u, v)
        if touched is not None:
            touched.update(nbrs)
        for w in nbrs:
            queue.push(w)
    return stats
