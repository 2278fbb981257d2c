import pytest

from parity.model import Instance, verify_happy_set, visibility_graph
from parity.oracle import OracleBudgetError, OracleLimits, brute_force, brute_force_within

from conftest import (
    SQUARE_PATH_EDGES,
    SQUARE_POINTS,
    all_even_subsets,
    enumerate_feasible_sets,
    make_instance,
)


def test_square_path_infeasible_pair():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES, [1, 2])
    res = brute_force(inst)
    assert not res.feasible and res.happy_set is None


def test_square_path_hull_edge():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES, [0, 3])
    res = brute_force(inst)
    assert res.feasible and res.happy_set == ((0, 3),)


def test_empty_unhappy_immediate():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES, [])
    res = brute_force(inst)
    assert res.feasible and res.happy_set == ()


def test_odd_unhappy_short_circuit():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES, [1])
    res = brute_force(inst)
    assert not res.feasible and res.nodes == 0


def test_soundness_and_completeness_against_enumerator():
    # prune-free enumeration is the independent cross-check
    pts = [(0, 0), (9, 1), (13, 8), (6, 13), (-2, 7)]
    inst0 = make_instance(pts, [(0, 1), (1, 2), (2, 3), (3, 4)])
    vis = visibility_graph(inst0.graph)
    feasible_odd_sets = {odd for _, odd in enumerate_feasible_sets(inst0, vis)}
    for unhappy in all_even_subsets(5):
        inst = Instance(inst0.graph, unhappy)
        res = brute_force(inst, vis=vis)
        assert res.feasible == (unhappy in feasible_odd_sets), unhappy
        if res.feasible:
            assert verify_happy_set(inst, res.happy_set).ok


def test_determinism():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES, [0, 2])
    a = brute_force(inst)
    b = brute_force(inst)
    assert a == b


def test_vertex_limit():
    pts = [(i, i * i) for i in range(11)]
    inst = make_instance(pts, [(i, i + 1) for i in range(10)], [])
    with pytest.raises(OracleBudgetError):
        brute_force(inst)


def test_vis_edge_limit():
    pts = [(0, 0), (100, 3), (77, 95), (4, 100), (55, 48)]
    inst = make_instance(pts, [], [])
    with pytest.raises(OracleBudgetError):
        brute_force(inst, OracleLimits(max_vis_edges=3))


def test_node_budget():
    pts = [(0, 0), (100, 3), (77, 95), (4, 100), (55, 48), (120, 50)]
    inst = make_instance(pts, [], [0, 1, 2, 3])
    with pytest.raises(OracleBudgetError):
        brute_force(inst, OracleLimits(node_budget=3))


def test_within_matches_plain_on_convex(square_path):
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    for unhappy in all_even_subsets(4):
        a = brute_force(Instance(inst.graph, unhappy))
        b = brute_force_within(Instance(inst.graph, unhappy), [0, 1, 2, 3])
        assert a.feasible == b.feasible


def test_within_region_restricts():
    # same configuration as the model-level restriction test: candidate (0,3)
    # falls outside the cycle 0-1-3-2, making {0,3} infeasible inside it
    pts = [(0, 0), (10, 0), (5, 2), (5, 8)]
    inst = make_instance(pts, [(0, 1), (1, 2), (2, 3)], [0, 3])
    assert brute_force(inst).feasible
    assert not brute_force_within(inst, [0, 1, 3, 2]).feasible


def test_limits_must_be_positive():
    with pytest.raises(ValueError):
        OracleLimits(max_vertices=0)
