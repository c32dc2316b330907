import random

from topocoarsen.collapse import edge_collapse, find_edge_dominator, strong_collapse
from topocoarsen.coning import DegreeQueue, neighborhood_coning, plan_coning
from topocoarsen.graph import SupernodeMap
from topocoarsen.oracle import betti, brute_force_dominated_scan

from graphs import complete, cycle, random_graph, wg

# triangle-free, no dominated node or edge; found by random search
ORDER_SENSITIVE = [(0, 4), (0, 5), (0, 6), (1, 2), (1, 3), (1, 4), (2, 6), (3, 5)]


def cone_in_order(g, order):
    removed = 0
    for u in order:
        if not g.is_alive(u):
            continue
        plan = plan_coning(g, u)
        if plan is None:
            continue
        for a, b in plan.insert_list:
            g.insert_edge(a, b)
        g.delete_node(u, plan.apex)
        removed += 1
    return removed


def test_plan_inserts_missing_chord():
    plan = plan_coning(cycle(5), 0)
    assert plan.apex == 1 and plan.insert_list == [(1, 4)]


def test_plan_inside_triangle_needs_no_insertion():
    plan = plan_coning(complete(3), 0)
    assert plan.apex == 1 and plan.insert_list == []


def test_no_plan_on_c4():
    g = cycle(4)
    assert all(plan_coning(g, u) is None for u in range(4))
    assert g.edge_list() == cycle(4).edge_list()


def test_coning_counts():
    assert neighborhood_coning(cycle(4)).nodes_removed == 0
    g = cycle(5)
    sm = SupernodeMap(5)
    st = neighborhood_coning(g, sm)
    assert st.nodes_removed == 1 and st.edges_inserted == 1
    assert g.node_count == 4 and betti(g).as_tuple() == (1, 1)
    assert sm.assignment()[0] == 1


def test_outcome_depends_on_order():
    g = wg(7, ORDER_SENSITIVE)
    nodes, edges = brute_force_dominated_scan(g)
    assert nodes == {} and edges == {}
    assert neighborhood_coning(g.copy()).nodes_removed == 2
    other = g.copy()
    assert cone_in_order(other, [0] + list(range(7)) * 3) == 1


def test_plan_respects_label_priority():
    g = cycle(5)
    plan = plan_coning(g, 0, labels=[1, 0, 0, 0, 1])
    assert plan.apex == 4 and plan.insert_list == [(4, 1)]


def test_each_planned_insertion_is_an_inverse_edge_collapse():
    checked = 0
    for seed in range(60):
        g = random_graph(seed, 10, 60)
        strong_collapse(g)
        edge_collapse(g)
        for u in list(g.nodes()):
            plan = plan_coning(g, u)
            if plan is None or not plan.insert_list:
                continue
            base = g.edge_list()
            for a, b in plan.insert_list:
                before = g.edge_list()
                g.insert_edge(a, b)
                assert find_edge_dominator(g, a, b).dominated
                g.delete_edge(a, b)
                assert g.edge_list() == before
                g.insert_edge(a, b)
            for a, b in reversed(plan.insert_list):
                assert find_edge_dominator(g, a, b).dominated
                g.delete_edge(a, b)
            assert g.edge_list() == base
            checked += 1
    assert checked > 50


def test_degree_queue_pops_current_minimum():
    rng = random.Random(3)
    for seed in range(20):
        g = random_graph(seed, 20, 60)
        q = DegreeQueue(g)
        while True:
            enqueued = [w for w in g.nodes() if w in q]
            u = q.pop()
            if u is None:
                assert not enqueued
                break
            assert (g.deg[u], u) == min((g.deg[w], w) for w in enqueued)
            # mutate around u, then refresh the touched nodes
            nbrs = g.neighbors(u)
            if nbrs and rng.random() < 0.5:
                g.delete_node(u, nbrs[0])
                for w in nbrs:
                    q.push(w)
            elif len(nbrs) >= 2 and not g.has_edge(nbrs[0], nbrs[1]):
                g.insert_edge(nbrs[0], nbrs[1])
                q.push(nbrs[0])
                q.push(nbrs[1])
