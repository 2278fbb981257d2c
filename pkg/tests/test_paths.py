import random

import pytest
from hypothesis import given, settings, strategies as st

from parity.generate import generate
from parity.model import Instance, edge_key, odd_degree_vertices, verify_happy_set, visibility_graph
from parity.oracle import OracleLimits, brute_force
from parity.paths import (
    NotAPathError,
    NotPseudoconvexError,
    adversarial_unhappy_set,
    is_pseudoconvex,
    is_universally_happy,
    path_order,
    plane_spanning_tree,
    pockets,
    solve_path,
    tight_hull,
    tjoin_from_tree,
)

from conftest import SQUARE_PATH_EDGES, SQUARE_POINTS, all_even_subsets, make_instance

LIMITS = OracleLimits(max_vertices=10, max_vis_edges=40)

QUAD_POINTS = [(0, 0), (10, 0), (5, 2), (5, 8)]
QUAD_EDGES = [(0, 1), (1, 2), (2, 3)]


def quad_path() -> Instance:
    return make_instance(QUAD_POINTS, QUAD_EDGES)


def test_path_order():
    inst = make_instance(SQUARE_POINTS, [(2, 3), (0, 1), (1, 2)])
    assert path_order(inst.graph) == (0, 1, 2, 3)


def test_path_order_rejects_cycle():
    inst = make_instance(SQUARE_POINTS, [(0, 1), (1, 2), (2, 3), (0, 3)])
    with pytest.raises(NotAPathError):
        path_order(inst.graph)


def test_path_order_rejects_disconnected():
    pts = SQUARE_POINTS + [(20, 1), (30, 5)]
    inst = make_instance(pts, [(0, 1), (1, 2), (2, 3), (4, 5)])
    with pytest.raises(NotAPathError):
        path_order(inst.graph)


def test_pockets_convex_square_path():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    pks = pockets(inst.graph)
    assert len(pks) == 1
    (pk,) = pks
    assert pk.hull_edge in ((3, 0), (0, 3))
    assert pk.chain in ((0, 1, 2, 3), (3, 2, 1, 0))
    assert pk.reflex == ()


def test_pockets_quad_reflex():
    inst = quad_path()
    pks = pockets(inst.graph)
    by_edge = {pk.hull_edge: pk for pk in pks}
    assert len(pks) == 2
    # the pocket closed by hull edge (3, 0) walks back through the whole path
    # and vertex 2 pokes toward it
    reflex = {pk.hull_edge: pk.reflex for pk in pks}
    assert reflex[(3, 0)] == (2,)
    assert reflex[(1, 3)] == ()


def test_is_pseudoconvex_convex_path():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    assert is_pseudoconvex(inst.graph).ok


def test_is_pseudoconvex_quad_ray_witness():
    report = is_pseudoconvex(quad_path().graph)
    assert not report.ok
    kind, hull_edge, reflex_vertex, direction = report.witness
    assert kind == "ray"
    assert reflex_vertex == 2


def test_is_pseudoconvex_tiny():
    one = make_instance([(0, 0)], [])
    assert not is_pseudoconvex(one.graph).ok
    two = make_instance([(0, 0), (5, 3)], [(0, 1)])
    assert is_pseudoconvex(two.graph).ok


def test_zigzag_is_pseudoconvex_with_disconnected_vis():
    # visibility splits into the two columns, and the family is pseudoconvex
    inst = generate("zigzag", 8, 3)
    assert is_pseudoconvex(inst.graph).ok


def test_tight_hull_of_convex_path_is_hull():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    hug = tight_hull(inst.graph)
    assert sorted(hug.order) == [0, 1, 2, 3]
    assert hug.in_graph.count(False) == 1


def test_tight_hull_routes_reflex_chain():
    inst = generate("spiral", 7, 1)
    hug = tight_hull(inst.graph)
    assert sorted(hug.order) == list(range(7))
    # cycle edges that coincide with path edges carry the in-graph mark
    es = inst.graph.edge_set
    pairs = hug.edge_pairs()
    for pair, flag in zip(pairs, hug.in_graph):
        assert flag == (pair in es)
    from parity.dual import build_dual

    build_dual(inst.graph, hug)  # convexly hugging by construction


def test_tight_hull_requires_pseudoconvex():
    with pytest.raises(NotPseudoconvexError):
        tight_hull(quad_path().graph)


def test_spanning_tree_on_non_pseudoconvex_quad():
    inst = quad_path()
    tree = plane_spanning_tree(inst.graph)
    assert tree is not None and len(tree) == 3
    assert set(tree) <= visibility_graph(inst.graph)


def test_spanning_tree_none_for_convex_path():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    assert plane_spanning_tree(inst.graph) is None


def test_spanning_tree_none_for_two_vertices():
    inst = make_instance([(0, 0), (5, 3)], [(0, 1)])
    assert plane_spanning_tree(inst.graph) is None


def test_spanning_tree_exists_iff_not_pseudoconvex():
    # a tree is found iff the path is not pseudoconvex (n <= 12 exhaustive
    # fallback makes the search complete)
    for seed in range(12):
        for n in (4, 5, 6, 7, 8):
            inst = generate("xmonotone", n, seed)
            tree = plane_spanning_tree(inst.graph, seed=seed)
            pseudo = is_pseudoconvex(inst.graph).ok
            assert (tree is not None) == (not pseudo), (seed, n)
            if tree is not None:
                assert len(tree) == n - 1
                assert odd_degree_vertices(tree)  # a tree always has leaves


def test_tjoin_star():
    tree = ((0, 1), (0, 2), (0, 3))
    assert tjoin_from_tree(tree, frozenset({1, 2}), 4) == ((0, 1), (0, 2))
    assert tjoin_from_tree(tree, frozenset({0, 1}), 4) == ((0, 1),)


def test_tjoin_path_all_unhappy():
    tree = ((0, 1), (1, 2), (2, 3))
    assert tjoin_from_tree(tree, frozenset({0, 1, 2, 3}), 4) == ((0, 1), (2, 3))


def test_tjoin_rejects_odd():
    with pytest.raises(ValueError):
        tjoin_from_tree(((0, 1),), frozenset({0}), 2)


@settings(max_examples=60)
@given(st.integers(2, 9), st.randoms(use_true_random=False))
def test_tjoin_pairing_independent(n, rnd):
    # any pairing yields the same odd-degree set
    tree_edges = tuple((rnd.randrange(i), i) for i in range(1, n))
    vertices = list(range(n))
    rnd.shuffle(vertices)
    k = rnd.randrange(0, n // 2 + 1) * 2
    unhappy = frozenset(vertices[:k])
    base = tjoin_from_tree(tree_edges, unhappy, n)
    assert odd_degree_vertices(base) == unhappy

    # a second, reversed-order pairing through the same machinery
    alt_counts = {}
    pairs = sorted(unhappy, reverse=True)
    adj = {v: [] for v in range(n)}
    for u, v in tree_edges:
        adj[u].append(v)
        adj[v].append(u)

    def tree_path(a, b):
        prev = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        out = []
        x = b
        while prev[x] is not None:
            out.append(edge_key(x, prev[x]))
            x = prev[x]
        return out

    for a, b in zip(pairs[::2], pairs[1::2]):
        for e in tree_path(a, b):
            alt_counts[e] = alt_counts.get(e, 0) + 1
    alt = frozenset(e for e, c in alt_counts.items() if c % 2)
    assert odd_degree_vertices(alt) == unhappy


def test_solve_path_square_examples(square_path):
    res = solve_path(square_path.graph, frozenset({0, 3}))
    assert res.feasible and res.happy_set == ((0, 3),)
    res = solve_path(square_path.graph, frozenset({1, 2}))
    assert not res.feasible and res.route == "tight-hull-dp"


def test_solve_path_routes():
    assert solve_path(quad_path().graph, frozenset({0})).route == "handshake"
    assert solve_path(quad_path().graph, frozenset()).route == "trivial"
    assert solve_path(quad_path().graph, frozenset({0, 2})).route == "spanning-tree"
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    assert solve_path(inst.graph, frozenset({0, 3})).route == "tight-hull-dp"
    tri = make_instance([(0, 0), (10, 1), (4, 9)], [(0, 1), (1, 2)])
    assert solve_path(tri.graph, frozenset({0, 2})).route == "oracle"


def test_solve_path_decide_only():
    res = solve_path(quad_path().graph, frozenset({0, 2}), construct=False)
    assert res.feasible and res.happy_set is None


def test_universally_happy_quad_exhaustive():
    g = quad_path().graph
    assert is_universally_happy(g)
    for unhappy in all_even_subsets(4):
        res = solve_path(g, unhappy)
        assert res.feasible
        if unhappy:
            assert verify_happy_set(Instance(g, unhappy), res.happy_set).ok
        assert brute_force(Instance(g, unhappy), LIMITS).feasible


def test_not_universally_happy_convex_path():
    inst = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    assert not is_universally_happy(inst.graph)
    two = make_instance([(0, 0), (5, 3)], [(0, 1)])
    assert not is_universally_happy(two.graph)


def test_adversarial_on_convex_paths():
    inst4 = make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)
    r4 = adversarial_unhappy_set(inst4.graph)
    assert r4 == {0, 1, 2, 3}
    assert not solve_path(inst4.graph, r4).feasible
    assert not brute_force(Instance(inst4.graph, r4), LIMITS).feasible

    inst5 = generate("convex-path", 5, 0)
    r5 = adversarial_unhappy_set(inst5.graph)
    assert len(r5) == 4
    assert not solve_path(inst5.graph, r5).feasible
    assert not brute_force(Instance(inst5.graph, r5), LIMITS).feasible


def test_adversarial_on_spiral():
    inst = generate("spiral", 7, 2)
    r = adversarial_unhappy_set(inst.graph)
    assert len(r) % 2 == 0
    assert not solve_path(inst.graph, r).feasible
    assert not brute_force(Instance(inst.graph, r), LIMITS).feasible


def test_adversarial_requires_pseudoconvex():
    with pytest.raises(NotPseudoconvexError):
        adversarial_unhappy_set(quad_path().graph)


def test_solve_path_agrees_with_oracle_small_sweep():
    for seed in range(6):
        for n in (4, 5, 6):
            inst = generate("xmonotone", n, seed)
            vis = visibility_graph(inst.graph)
            for unhappy in all_even_subsets(n):
                res = solve_path(inst.graph, unhappy, seed=seed)
                orc = brute_force(Instance(inst.graph, unhappy), LIMITS, vis=vis)
                assert res.feasible == orc.feasible
                if res.feasible and res.happy_set is not None:
                    assert verify_happy_set(Instance(inst.graph, unhappy), res.happy_set).ok
