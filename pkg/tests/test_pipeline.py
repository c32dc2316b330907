import networkx as nx
import numpy as np
import pytest

from topocoarsen.graph import AttributedData, SupernodeMap
from topocoarsen.oracle import betti
from topocoarsen.pipeline import (CoarseningConfig, ConfigError, Relaxation,
                                  aggregate_attributes, approximate_coarsening,
                                  coarsen, drop_edges, exact_coarsening,
                                  relaxed_strong_collapse, target_node_count)

from graphs import complete, cycle, from_nx, gnm_edges, path, random_graph, wg


def exact(g, **kw):
    kw.setdefault("target_ratio", 1e-9)
    kw.setdefault("exact_iters", 50)
    sm = SupernodeMap(g.capacity)
    report = exact_coarsening(g, sm, CoarseningConfig(**kw))
    return sm, report


def test_tree_collapses_to_one_node():
    g = from_nx(nx.random_labeled_tree(50, seed=1))
    sm, _ = exact(g)
    assert g.node_count == 1
    assert len(sm.member_lists()) == 1


def test_square_and_triangle():
    g = wg(7, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 4)])
    sm, _ = exact(g)
    assert betti(g).as_tuple() == (2, 1)
    assert g.node_count == 5
    assert sorted(map(len, sm.member_lists().values())) == [1, 1, 1, 1, 3]


def test_square_is_left_alone():
    g = cycle(4)
    exact(g)
    assert g.edge_list() == cycle(4).edge_list()


def test_relaxation_level():
    g = cycle(4)
    sm = SupernodeMap(4)
    state = Relaxation()
    cfg = CoarseningConfig(theta2=1, target_ratio=0.25)
    assert relaxed_strong_collapse(g, sm, cfg, state) == 0
    assert state.r == 1
    assert relaxed_strong_collapse(g, sm, cfg, state) > 0
    assert g.node_count == 1
    # theta2 = 0 never raises r
    state = Relaxation()
    relaxed_strong_collapse(cycle(4), SupernodeMap(4), CoarseningConfig(target_ratio=0.25), state)
    assert state.r == 0


def test_approximate_phase_reaches_ratio():
    g = wg(500, gnm_edges(500, 6, 2))
    sm = SupernodeMap(500)
    cfg = CoarseningConfig(target_ratio=0.1, theta2=5)
    report = approximate_coarsening(g, sm, cfg)
    assert g.node_count <= 50
    assert not report.warnings
    rs = [rec.r_value for rec in report.phase_log]
    assert rs == sorted(rs)


def test_approximate_phase_noops():
    g = cycle(6)
    report = approximate_coarsening(g, SupernodeMap(6), CoarseningConfig(target_ratio=1.0))
    assert report.phase_log == [] and g.node_count == 6
    g = wg(0, [])
    report = approximate_coarsening(g, SupernodeMap(0), CoarseningConfig(target_ratio=0.5))
    assert report.phase_log == []


def test_unreachable_ratio_warns():
    g = cycle(6)
    report = approximate_coarsening(g, SupernodeMap(6),
                                    CoarseningConfig(target_ratio=0.2, approx_iters=1))
    assert report.warnings and "not reached" in report.warnings[0]


def test_identity_run():
    g = wg(30, gnm_edges(30, 4, 0))
    before = g.edge_list()
    res = coarsen(g, CoarseningConfig(target_ratio=1.0))
    assert g.edge_list() == before
    assert res.supernode_ids == list(range(30))
    assert res.report.final_ratio == 1.0 and res.report.ratio_reached


def test_exact_phase_keeps_homology_before_relaxing():
    for seed in range(10):
        g = random_graph(seed, 40, 120)
        before = betti(g).as_tuple()
        sm = SupernodeMap(g.capacity)
        exact_coarsening(g, sm, CoarseningConfig(target_ratio=0.3))
        if g.node_count > target_node_count(g.capacity, 0.3):
            assert betti(g).as_tuple() == before


def test_two_node_graph_averages_features():
    g = wg(2, [(0, 1)])
    data = AttributedData(features=[[1.0, 0.0], [0.0, 1.0]], labels=[4, 4])
    res = coarsen(g, CoarseningConfig(target_ratio=0.5), data)
    assert g.node_count == 1
    assert np.allclose(res.attributes.features, [[0.5, 0.5]])
    assert res.attributes.labels.tolist() == [4]


def test_aggregate_attributes_votes():
    sm = SupernodeMap(6)
    sm.merge(1, 0)
    sm.merge(2, 0)
    sm.merge(4, 3)
    labels = [2, 2, 5, 1, 3, -1]
    ids, agg = aggregate_attributes(sm, AttributedData(labels=labels))
    assert ids == [0, 3, 5]
    # majority, tie to lowest label, all-unlabeled stays -1
    assert agg.labels.tolist() == [2, 1, -1]
    feats = np.arange(12, dtype=float).reshape(6, 2)
    _, agg = aggregate_attributes(sm, AttributedData(features=feats))
    assert np.allclose(agg.features[0], feats[:3].mean(axis=0))
    assert agg.labels is None
    assert aggregate_attributes(sm, None) == (ids, None)


def test_drop_edges():
    g = cycle(10)
    assert drop_edges(g, ratio=0.0) == 0 and g.edge_count == 10
    assert drop_edges(g, ratio=0.1, seed=3) == 1 and g.edge_count == 9
    # path of 11 nodes: first three edges cross labels, the other seven do not
    labels = [0, 1, 0, 1] + [1] * 7
    g = path(11)
    hetero = {(0, 1), (1, 2), (2, 3)}
    assert drop_edges(g, labels, ratio=0.4, seed=0) == 4
    left = set(g.edge_list())
    assert not (hetero & left) and len(left) == 6
    with pytest.raises(ConfigError):
        drop_edges(g, ratio=1.0)


def test_report_is_consistent():
    for seed in range(6):
        g = random_graph(seed, 50, 200)
        n = g.capacity
        rep = coarsen(g, CoarseningConfig(target_ratio=0.3, theta2=2)).report
        removed = sum(rec.nodes_removed for rec in rep.phase_log)
        assert removed == n - g.node_count == n - rep.final_nodes
        rs = [rec.r_value for rec in rep.phase_log]
        assert rs == sorted(rs)
        assert rep.final_ratio == pytest.approx(rep.final_nodes / n)
        assert rep.ratio_reached == (rep.final_nodes <= target_node_count(n, 0.3))
        assert rep.final_edges == g.edge_count


def test_runs_are_deterministic():
    edges = gnm_edges(400, 5, 9)
    labels = [i % 3 for i in range(400)]
    out = []
    for _ in range(2):
        g = wg(400, edges)
        res = coarsen(g, CoarseningConfig(target_ratio=0.2, theta2=4, drop_edge_ratio=0.1,
                                          rng_seed=7),
                      AttributedData(labels=labels))
        out.append((g.edge_list(), res.supernodes.assignment(),
                    res.report.to_dict(timing=False)))
    assert out[0] == out[1]


@pytest.mark.parametrize("kw", [
    {"theta1": 0}, {"theta2": -1}, {"exact_iters": 0}, {"approx_iters": 0},
    {"target_ratio": 0}, {"target_ratio": 1.5}, {"drop_edge_ratio": 1.0},
])
def test_config_validation(kw):
    with pytest.raises(ConfigError):
        CoarseningConfig(**kw)


def test_target_node_count():
    assert target_node_count(1000, 0.3) == 300
    assert target_node_count(10, 0.25) == 2
    assert target_node_count(7, 1.0) == 7


def test_full_merge_breaks_label_tie_low():
    g = complete(6)
    labels = [0, 0, 0, 1, 1, 1]
    res = coarsen(g, CoarseningConfig(target_ratio=1 / 6), AttributedData(labels=labels))
    assert g.node_count == 1
    assert res.attributes.labels.tolist() == [0]
