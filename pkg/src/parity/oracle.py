"""Ground-truth brute force over crossing-free subsets of visibility edges.

This module never consults any solver: it is the acceptance authority the
solvers are measured against.  The search is a depth-first include/exclude
walk over the visibility edges in a fixed order, pruning on crossings with
already-included edges and on vertices whose parity can no longer change.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

from .geom import GeneralPositionError, properly_cross
from .model import Edge, Instance, restrict_to_region, visibility_graph


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = 10
    max_vis_edges: int = 26
    node_budget: int = 100_000_000

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_vis_edges <= 0 or self.node_budget <= 0:
            raise ValueError("oracle limits must be positive")


class OracleBudgetError(RuntimeError):
    """The instance exceeds the configured limits; no answer was produced."""


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    happy_set: Optional[tuple[Edge, ...]]
    nodes: int


def _search(
    edges: Sequence[Edge],
    cross_mask: Sequence[int],
    n: int,
    target: int,
    budget: int,
) -> tuple[Optional[list[int]], int]:
    m = len(edges)
    last_touch = [-1] * n
    for i, (u, v) in enumerate(edges):
        last_touch[u] = i
        last_touch[v] = i
    # vertices with no candidate edge at all must already be happy
    for v in range(n):
        if last_touch[v] < 0 and (target >> v) & 1:
            return None, 0
    frozen_after: list[list[int]] = [[] for _ in range(m)]
    for v in range(n):
        if last_touch[v] >= 0:
            frozen_after[last_touch[v]].append(v)
    vert_bits = [(1 << u) | (1 << v) for u, v in edges]

    nodes = 0
    chosen: list[int] = []

    def recurse(i: int, chosen_mask: int, parity: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise OracleBudgetError(f"oracle out of budget after {nodes} nodes")
        if i == m:
            return parity == target
        wrong = parity ^ target
        if wrong.bit_count() > 2 * (m - i):
            return False

        def frozen_ok(par: int) -> bool:
            for v in frozen_after[i]:
                if ((par ^ target) >> v) & 1:
                    return False
            return True

        if frozen_ok(parity) and recurse(i + 1, chosen_mask, parity):
            return True
        if not (cross_mask[i] & chosen_mask):
            par2 = parity ^ vert_bits[i]
            if frozen_ok(par2):
                chosen.append(i)
                if recurse(i + 1, chosen_mask | (1 << i), par2):
                    return True
                chosen.pop()
        return False

    found = recurse(0, 0, 0)
    return (list(chosen) if found else None), nodes


def _run(
    inst: Instance, vis_edges: Sequence[Edge], limits: OracleLimits
) -> OracleResult:
    n = inst.graph.n
    if n > limits.max_vertices:
        raise OracleBudgetError(
            f"{n} vertices exceed the oracle limit of {limits.max_vertices}"
        )
    if len(vis_edges) > limits.max_vis_edges:
        raise OracleBudgetError(
            f"{len(vis_edges)} visibility edges exceed the oracle limit of {limits.max_vis_edges}"
        )
    if len(inst.unhappy) % 2:
        return OracleResult(False, None, 0)
    pts = inst.graph.points
    m = len(vis_edges)
    segs = [inst.graph.segment(e) for e in vis_edges]
    cross_mask = [0] * m
    for i in range(m):
        for j in range(i + 1, m):
            try:
                crossed = properly_cross(segs[i], segs[j])
            except GeneralPositionError:
                crossed = True
            if crossed:
                cross_mask[i] |= 1 << j
                cross_mask[j] |= 1 << i
    target = 0
    for v in inst.unhappy:
        target |= 1 << v
    picked, nodes = _search(vis_edges, cross_mask, n, target, limits.node_budget)
    if picked is None:
        return OracleResult(False, None, nodes)
    return OracleResult(True, tuple(sorted(vis_edges[i] for i in picked)), nodes)


def brute_force(
    inst: Instance,
    limits: OracleLimits = OracleLimits(),
    vis: Optional[frozenset[Edge]] = None,
) -> OracleResult:
    """Exhaustively decide the instance; `vis` may carry a precomputed
    visibility graph (it must equal visibility_graph(inst.graph))."""
    if vis is None:
        vis = visibility_graph(inst.graph)
    return _run(inst, sorted(vis), limits)


def brute_force_within(
    inst: Instance,
    cycle_order: Sequence[int],
    limits: OracleLimits = OracleLimits(),
    vis: Optional[frozenset[Edge]] = None,
) -> OracleResult:
    """Same search, restricted to edges inside the region bounded by a cycle."""
    if vis is None:
        vis = visibility_graph(inst.graph)
    inside = restrict_to_region(inst.graph, vis, cycle_order)
    return _run(inst, sorted(inside), limits)
