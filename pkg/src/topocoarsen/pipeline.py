"""Exact and approximate coarsening phases, attribute aggregation and DropEdge."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .collapse import edge_collapse, incident_edges, strong_collapse
from .coning import neighborhood_coning
from .graph import AttributedData, SupernodeMap, WorkingGraph

__all__ = [
    "ConfigError",
    "CoarseningConfig",
    "PhaseRecord",
    "CoarseningReport",
    "CoarseningResult",
    "Relaxation",
    "target_node_count",
    "exact_coarsening",
    "relaxed_strong_collapse",
    "approximate_coarsening",
    "aggregate_attributes",
    "drop_edges",
    "coarsen",
]

Observer = Callable[..., None]


class ConfigError(ValueError):
    pass


@dataclass
class CoarseningConfig:
    """Knobs for one coarsening run.

    theta1 caps the degree of nodes (and half the degree sum of edges) that
    are checked for dominance; theta2 is the per-pass removal count below
    which the relaxation level goes up.
    """

    theta1: float = math.inf
    theta2: int = 0
    exact_iters: int = 10
    approx_iters: int = 100
    target_ratio: float = 0.5
    drop_edge_ratio: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.theta1 >= 1:
            raise ConfigError(f"theta1 must be >= 1, got {self.theta1}")
        if self.theta2 < 0:
            raise ConfigError(f"theta2 must be >= 0, got {self.theta2}")
        if self.exact_iters < 1 or self.approx_iters < 1:
            raise ConfigError("iteration caps must be >= 1")
        if not 0 < self.target_ratio <= 1:
            raise ConfigError(f"target ratio must be in (0, 1], got {self.target_ratio}")
        if not 0 <= self.drop_edge_ratio < 1:
            raise ConfigError(f"drop-edge ratio must be in [0, 1), got {self.drop_edge_ratio}")


@dataclass
class PhaseRecord:
    phase: str
    nodes_removed: int = 0
    edges_removed: int = 0
    edges_inserted: int = 0
    r_value: int = 0
    wall_time: float = 0.0


@dataclass
class CoarseningReport:
    original_nodes: int = 0
    original_edges: int = 0
    target_ratio: float = 1.0
    d_max: int = 0
    d_bar: float = 0.0
    final_nodes: int = 0
    final_edges: int = 0
    final_ratio: float = 1.0
    final_d_max: int = 0
    final_d_bar: float = 0.0
    ratio_reached: bool = False
    r_final: int = 0
    total_time: float = 0.0
    phase_log: list[PhaseRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    ingest_warnings: dict[str, int] = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        if not timing:
            d.pop("total_time")
            for rec in d["phase_log"]:
                rec.pop("wall_time")
        return d

    def log(self, phase: str, started: float, nodes: int = 0, edges: int = 0,
            inserted: int = 0, r: int = 0) -> None:
        self.phase_log.append(PhaseRecord(phase, nodes, edges, inserted, r,
                                          time.perf_counter() - started))


@dataclass
class CoarseningResult:
    graph: WorkingGraph
    supernodes: SupernodeMap
    supernode_ids: list[int]
    attributes: AttributedData | None
    report: CoarseningReport


def target_node_count(n: int, ratio: float) -> int:
    """Largest alive count that counts as having reached ``ratio``."""
    return math.floor(ratio * n + 1e-9)


def _labels(attributed: AttributedData | None):
    if attributed is None or attributed.labels is None:
        return None
    return attributed.labels.tolist()


def exact_coarsening(g: WorkingGraph, supernodes: SupernodeMap,
                     config: CoarseningConfig,
                     attributed: AttributedData | None = None,
                     report: CoarseningReport | None = None,
                     observer: Observer | None = None) -> CoarseningReport:
    """Homotopy-preserving phase.

    Strong and edge collapse alternate until neither changes the graph (or
    ``exact_iters`` rounds); then neighborhood coning runs.  If coning removed
    anything, the whole sequence repeats, up to ``exact_iters`` times.
    After the first alternation, passes only revisit what the previous pass
    touched.
    """
    report = report if report is not None else CoarseningReport()
    labels = _labels(attributed)
    stop_at = target_node_count(g.capacity, config.target_ratio)
    theta1 = config.theta1

    def reached():
        return g.node_count <= stop_at

    for _ in range(config.exact_iters):
        if reached():
            break
        node_seeds = None
        full = True
        for _ in range(config.exact_iters):
            t = time.perf_counter()
            touched: set[int] = set()
            a = strong_collapse(g, supernodes, theta1=theta1, labels=labels,
                                seeds=node_seeds, stop_at=stop_at,
                                flagged=touched, observer=observer)
            report.log("strong", t, nodes=a)
            if reached():
                return report
            t = time.perf_counter()
            flagged: set[int] = set()
            edge_seeds = None if full else incident_edges(g, touched)
            b = edge_collapse(g, theta1=theta1, labels=labels, seeds=edge_seeds,
                              flagged=flagged, observer=observer)
            report.log("edge", t, edges=b)
            full = False
            if b == 0:
                break
            node_seeds = sorted(flagged)
        if reached():
            break
        t = time.perf_counter()
        st = neighborhood_coning(g, supernodes, theta1=theta1, labels=labels,
                                 stop_at=stop_at, observer=observer)
        report.log("coning", t, nodes=st.nodes_removed, edges=st.edges_pruned,
                   inserted=st.edges_inserted)
        if st.nodes_removed == 0:
            break
    return report


@dataclass
class Relaxation:
    """Current relaxation level of the approximate phase."""

    r: int = 0


def relaxed_strong_collapse(g: WorkingGraph, supernodes: SupernodeMap,
                            config: CoarseningConfig, state: Relaxation,
                            labels=None, flagged: set[int] | None = None,
                            observer: Observer | None = None) -> int:
    """One strong-collapse pass at level ``state.r``; bumps r on low yield."""
    removed = strong_collapse(
        g, supernodes, theta1=config.theta1, r=state.r, labels=labels,
        stop_at=target_node_count(g.capacity, config.target_ratio),
        flagged=flagged, observer=observer)
    if removed < config.theta2:
        state.r += 1
    return removed


def approximate_coarsening(g: WorkingGraph, supernodes: SupernodeMap,
                           config: CoarseningConfig,
                           attributed: AttributedData | None = None,
                           report: CoarseningReport | None = None,
                           state: Relaxation | None = None,
                           observer: Observer | None = None) -> CoarseningReport:
    """Relaxed strong collapse and edge collapse until the ratio is reached.

    Topology is not preserved here.  Gives up after ``approx_iters`` rounds
    and records a warning instead of failing.
    """
    report = report if report is not None else CoarseningReport()
    state = state if state is not None else Relaxation()
    labels = _labels(attributed)
    stop_at = target_node_count(g.capacity, config.target_ratio)
    for _ in range(config.approx_iters):
        if g.node_count <= stop_at:
            break
        t = time.perf_counter()
        r = state.r
        touched: set[int] = set()
        a = relaxed_strong_collapse(g, supernodes, config, state, labels,
                                    flagged=touched, observer=observer)
        report.log("relaxed", t, nodes=a, r=r)
        if g.node_count <= stop_at:
            break
        t = time.perf_counter()
        b = edge_collapse(g, theta1=config.theta1, labels=labels,
                          seeds=incident_edges(g, touched), observer=observer)
        report.log("edge", t, edges=b, r=state.r)
    report.r_final = state.r
    if g.node_count > stop_at:
        report.warnings.append(
            f"target ratio {config.target_ratio} not reached after "
            f"{config.approx_iters} approximate iterations "
            f"({g.node_count}/{g.capacity} nodes left)")
    return report


def aggregate_attributes(supernodes: SupernodeMap,
                         attributed: AttributedData | None):
    """Mean features and modal label per supernode (ascending supernode id).

    Unlabeled members (-1) do not vote; ties go to the lowest label.
    Returns ``(supernode_ids, AttributedData | None)``.
    """
    ids = supernodes.supernodes()
    if attributed is None or (attributed.features is None and attributed.labels is None):
        return ids, None
    n = len(supernodes)
    pos = np.full(n, -1, dtype=np.int64)
    pos[ids] = np.arange(len(ids))
    owner = pos[np.asarray(supernodes.assignment(), dtype=np.int64)]
    k = len(ids)
    features = labels = None
    if attributed.features is not None:
        if len(attributed.features) != n:
            raise ValueError("feature rows do not match the node count")
        sums = np.zeros((k, attributed.features.shape[1]))
        np.add.at(sums, owner, attributed.features)
        counts = np.bincount(owner, minlength=k)
        features = sums / counts[:, None]
    if attributed.labels is not None:
        lab = attributed.labels
        if len(lab) != n:
            raise ValueError("label count does not match the node count")
        labels = np.full(k, -1, dtype=np.int64)
        has = lab >= 0
        if has.any():
            votes = np.zeros((k, int(lab.max()) + 1), dtype=np.int64)
            np.add.at(votes, (owner[has], lab[has]), 1)
            voted = votes.sum(axis=1) > 0
            labels[voted] = votes[voted].argmax(axis=1)
    return ids, AttributedData(features, labels)


def drop_edges(g: WorkingGraph, labels=None, ratio: float = 0.1,
               seed: int = 0, observer: Observer | None = None) -> int:
    """Randomly delete ``floor(ratio * m)`` edges, heterophilic ones first."""
    if not 0 <= ratio < 1:
        raise ConfigError(f"drop-edge ratio must be in [0, 1), got {ratio}")
    edges = g.edge_list()
    quota = math.floor(ratio * len(edges) + 1e-9)
    if quota == 0:
        return 0
    if labels is None:
        hetero, homo = [], edges
    else:
        hetero = [e for e in edges if labels[e[0]] >= 0 and labels[e[1]] >= 0
                  and labels[e[0]] != labels[e[1]]]
        homo = [e for e in edges if not (labels[e[0]] >= 0 and labels[e[1]] >= 0
                                         and labels[e[0]] != labels[e[1]])]
    rng = np.random.default_rng(seed)
    if len(hetero) >= quota:
        picked = [hetero[i] for i in rng.choice(len(hetero), quota, replace=False)]
    else:
        rest = quota - len(hetero)
        picked = hetero + [homo[i] for i in rng.choice(len(homo), rest, replace=False)]
    for x, y in sorted(picked):
        g.delete_edge(x, y)
        if observer is not None:
            observer("drop", x, y)
    return quota


def coarsen(g: WorkingGraph, config: CoarseningConfig,
            attributed: AttributedData | None = None,
            observer: Observer | None = None,
            ingest_warnings: dict[str, int] | None = None) -> CoarseningResult:
    """Full run: exact phase, approximate phase if needed, aggregation, DropEdge.

    ``g`` is coarsened in place and returned inside the result.
    """
    started = time.perf_counter()
    supernodes = SupernodeMap(g.capacity)
    report = CoarseningReport(
        original_nodes=g.capacity, original_edges=g.edge_count,
        target_ratio=config.target_ratio, d_max=g.max_degree(),
        d_bar=g.average_degree(), ingest_warnings=dict(ingest_warnings or {}))
    if g.node_count != g.capacity:
        raise ValueError("coarsen expects a graph with no deleted nodes")
    exact_coarsening(g, supernodes, config, attributed, report, observer)
    state = Relaxation()
    if g.node_count > target_node_count(g.capacity, config.target_ratio):
        approximate_coarsening(g, supernodes, config, attributed, report, state,
                               observer)
    ids, aggregated = aggregate_attributes(supernodes, attributed)
    if config.drop_edge_ratio > 0:
        t = time.perf_counter()
        node_labels = None
        if aggregated is not None and aggregated.labels is not None:
            node_labels = [-1] * g.capacity
            for s, lab in zip(ids, aggregated.labels.tolist()):
                node_labels[s] = lab
        k = drop_edges(g, node_labels, config.drop_edge_ratio,
                       config.rng_seed, observer)
        report.log("drop_edge", t, edges=k, r=state.r)
    report.final_nodes = g.node_count
    report.final_edges = g.edge_count
    report.final_ratio = g.node_count / g.capacity if g.capacity else 1.0
    report.final_d_max = g.max_degree()
    report.final_d_bar = g.average_degree()
    report.ratio_reached = g.node_count <= target_node_count(g.capacity,
                                                             config.target_ratio)
    report.r_final = state.r
    report.total_time = time.perf_counter() - started
    return CoarseningResult(g, supernodes, ids, aggregated, report)
