"""Shared helpers: instance builders and a second, prune-free enumerator."""

from itertools import combinations

import pytest

from parity.geom import GeneralPositionError, Point, properly_cross
from parity.model import Instance, PlaneGraph, edge_key, odd_degree_vertices, visibility_graph


def make_instance(points, edges, unhappy=()) -> Instance:
    """Trusted constructor for hand-built test fixtures (no validation)."""
    pts = tuple(Point(x, y) for x, y in points)
    es = tuple(sorted(edge_key(u, v) for u, v in edges))
    return Instance(PlaneGraph(pts, es), frozenset(unhappy))


SQUARE_POINTS = [(0, 0), (10, 0), (10, 10), (0, 10)]
SQUARE_PATH_EDGES = [(0, 1), (1, 2), (2, 3)]


@pytest.fixture
def square_path() -> Instance:
    return make_instance(SQUARE_POINTS, SQUARE_PATH_EDGES)


def crossing_free(inst: Instance, edges) -> bool:
    segs = [inst.graph.segment(e) for e in edges]
    for a, b in combinations(range(len(segs)), 2):
        try:
            if properly_cross(segs[a], segs[b]):
                return False
        except GeneralPositionError:
            return False
    return True


def enumerate_feasible_sets(inst: Instance, vis=None):
    """Prune-free enumeration of every crossing-free subset and its odd set.

    Deliberately independent of the oracle's search: used to check oracle
    completeness on instances with few visibility edges.
    """
    if vis is None:
        vis = visibility_graph(inst.graph)
    vis = sorted(vis)
    assert len(vis) <= 14, "enumerator is exponential; keep it tiny"
    out = []
    for size in range(len(vis) + 1):
        for combo in combinations(vis, size):
            if crossing_free(inst, combo):
                out.append((frozenset(combo), odd_degree_vertices(combo)))
    return out


def all_even_subsets(n: int):
    for bits in range(2 ** n):
        if bin(bits).count("1") % 2 == 0:
            yield frozenset(v for v in range(n) if bits >> v & 1)
