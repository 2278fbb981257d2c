"""Instances, visibility graphs, and happy-set verification.

An instance is a plane geometric graph (points in general position, pairwise
non-crossing straight-line edges) plus the set of vertices that must end up
with odd degree in the augmentation.
"""

import hashlib
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .geom import (
    COLLINEAR,
    GeneralPositionError,
    Point,
    Segment,
    check_coordinate,
    orient,
    point_in_polygon,
    point_on_segment,
    properly_cross,
)

Edge = tuple[int, int]


class StructureError(ValueError):
    """A structural precondition (simple spanning cycle, tree shape, ...) failed."""


def edge_key(u: int, v: int) -> Edge:
    """Normalize an undirected edge to (min, max)."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class PlaneGraph:
    points: tuple[Point, ...]
    edges: tuple[Edge, ...]

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def segment(self, e: Edge) -> Segment:
        return Segment(self.points[e[0]], self.points[e[1]])

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]


@dataclass(frozen=True)
class Instance:
    graph: PlaneGraph
    unhappy: frozenset[int]


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str


class InvalidInstanceError(ValueError):
    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        lines = "; ".join(f"{v.kind}{v.where}: {v.detail}" for v in self.violations[:8])
        more = "" if len(self.violations) <= 8 else f" (+{len(self.violations) - 8} more)"
        super().__init__(f"invalid instance: {lines}{more}")


def check_instance(
    raw_points: Sequence[Sequence[int]],
    raw_edges: Sequence[Sequence[int]],
    raw_unhappy: Iterable[int] = (),
    skip_gp_check: bool = False,
) -> list[Violation]:
    """Collect every invariant violation instead of stopping at the first."""
    out: list[Violation] = []
    pts: list[Point] = []
    for i, xy in enumerate(raw_points):
        try:
            x, y = xy
            pts.append(Point(check_coordinate(x), check_coordinate(y)))
        except (TypeError, ValueError) as exc:
            out.append(Violation("bad-point", (i,), str(exc)))
    if out:
        return out
    n = len(pts)
    if n == 0:
        return [Violation("empty", (), "instance needs at least one point")]
    seen_pts: dict[Point, int] = {}
    for i, p in enumerate(pts):
        if p in seen_pts:
            out.append(Violation("duplicate-point", (seen_pts[p], i), f"both at {tuple(p)}"))
        else:
            seen_pts[p] = i

    edges: list[Edge] = []
    seen_edges: set[Edge] = set()
    for k, uv in enumerate(raw_edges):
        try:
            u, v = uv
        except (TypeError, ValueError):
            out.append(Violation("bad-edge", (k,), f"not an index pair: {uv!r}"))
            continue
        if not (isinstance(u, int) and isinstance(v, int)) or not (0 <= u < n and 0 <= v < n):
            out.append(Violation("bad-index", (k,), f"edge {uv!r} out of range"))
            continue
        if u == v:
            out.append(Violation("self-loop", (k,), f"vertex {u}"))
            continue
        e = edge_key(u, v)
        if e in seen_edges:
            out.append(Violation("duplicate-edge", e, "listed twice"))
            continue
        seen_edges.add(e)
        edges.append(e)

    unhappy = list(raw_unhappy)
    for r in unhappy:
        if not isinstance(r, int) or not 0 <= r < n:
            out.append(Violation("bad-index", (r,), "unhappy vertex out of range"))
    if out or skip_gp_check:
        # the geometric checks below are quadratic/cubic; skipping them trusts
        # the producer for crossing-freeness and general position
        return out

    for e in edges:
        seg = Segment(pts[e[0]], pts[e[1]])
        for w in range(n):
            if w in e:
                continue
            if point_on_segment(pts[w], seg):
                out.append(Violation("vertex-on-edge", (w, *e), f"vertex {w} lies on edge {e}"))
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            try:
                if properly_cross(
                    Segment(pts[edges[a][0]], pts[edges[a][1]]),
                    Segment(pts[edges[b][0]], pts[edges[b][1]]),
                ):
                    out.append(Violation("crossing", (edges[a], edges[b]), "edges properly cross"))
            except GeneralPositionError as exc:
                out.append(Violation("degenerate", (edges[a], edges[b]), str(exc)))
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if orient(pts[i], pts[j], pts[k]) == COLLINEAR:
                    out.append(Violation("collinear", (i, j, k), "three points on a line"))
    return out


def validate_instance(
    raw_points: Sequence[Sequence[int]],
    raw_edges: Sequence[Sequence[int]],
    raw_unhappy: Iterable[int] = (),
    skip_gp_check: bool = False,
) -> Instance:
    violations = check_instance(raw_points, raw_edges, raw_unhappy, skip_gp_check)
    if violations:
        raise InvalidInstanceError(violations)
    pts = tuple(Point(x, y) for x, y in raw_points)
    edges = tuple(sorted(edge_key(u, v) for u, v in raw_edges))
    return Instance(PlaneGraph(pts, edges), frozenset(raw_unhappy))


def _segment_blocked(pts: Sequence[Point], e: Edge, graph_edges: Iterable[Edge]) -> bool:
    """Does a candidate segment hit a vertex or cross a graph edge?"""
    u, v = e
    seg = Segment(pts[u], pts[v])
    for w in range(len(pts)):
        if w != u and w != v and point_on_segment(pts[w], seg):
            return True
    for g in graph_edges:
        if g == e:
            return True
        try:
            if properly_cross(seg, Segment(pts[g[0]], pts[g[1]])):
                return True
        except GeneralPositionError:
            return True
    return False


def visibility_graph(graph: PlaneGraph) -> frozenset[Edge]:
    """All augmentable pairs: non-edges whose segment crosses nothing in the graph."""
    pts = graph.points
    es = graph.edge_set
    out = []
    for u in range(graph.n):
        for v in range(u + 1, graph.n):
            e = (u, v)
            if e in es:
                continue
            if not _segment_blocked(pts, e, graph.edges):
                out.append(e)
    return frozenset(out)


def odd_degree_vertices(edges: Iterable[Edge]) -> frozenset[int]:
    """Vertices of odd degree, counted with multiplicity."""
    parity: set[int] = set()
    for u, v in edges:
        parity ^= {u}
        parity ^= {v}
    return frozenset(parity)


@dataclass
class VerificationReport:
    ok: bool
    failures: list[tuple] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def verify_happy_set(inst: Instance, happy_edges: Iterable[Edge]) -> VerificationReport:
    """Check edge-by-edge that a candidate augmentation is a happy set.

    Failures are reported with witnesses rather than raised: membership in the
    visibility graph, pairwise crossing-freeness, and the odd-degree set
    matching the unhappy set.
    """
    g = inst.graph
    pts = g.points
    failures: list[tuple] = []
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for raw in happy_edges:
        u, v = raw
        if not (0 <= u < g.n and 0 <= v < g.n) or u == v:
            failures.append(("bad-edge", (u, v), "invalid vertex pair"))
            continue
        e = edge_key(u, v)
        if e in seen:
            failures.append(("duplicate", e, "edge listed twice"))
            continue
        seen.add(e)
        edges.append(e)
    for e in edges:
        if e in g.edge_set:
            failures.append(("in-graph", e, "already an edge of the instance"))
        elif _segment_blocked(pts, e, g.edges):
            failures.append(("blocked", e, "segment crosses the graph or hits a vertex"))
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            try:
                crossed = properly_cross(g.segment(edges[i]), g.segment(edges[j]))
            except GeneralPositionError:
                crossed = True
            if crossed:
                failures.append(("crossing", (edges[i], edges[j]), "happy-set edges cross"))
    odd = odd_degree_vertices(edges)
    if odd != inst.unhappy:
        failures.append(
            ("parity", tuple(sorted(odd ^ inst.unhappy)), f"odd set {sorted(odd)} != unhappy {sorted(inst.unhappy)}")
        )
    return VerificationReport(not failures, failures)


def check_cycle_order(n: int, order: Sequence[int]) -> None:
    if sorted(order) != list(range(n)):
        raise StructureError("cycle must visit every vertex exactly once")


def restrict_to_region(
    graph: PlaneGraph, vis: Iterable[Edge], cycle_order: Sequence[int]
) -> frozenset[Edge]:
    """Keep only edges inside the closed region bounded by a spanning cycle.

    The cycle is checked to be simple; membership uses an exact midpoint-in-
    polygon test (on doubled coordinates) plus crossing-freeness against the
    cycle boundary.
    """
    pts = graph.points
    n = graph.n
    check_cycle_order(n, cycle_order)
    k = len(cycle_order)
    cyc_edges = [edge_key(cycle_order[i], cycle_order[(i + 1) % k]) for i in range(k)]
    cyc_segs = [Segment(pts[e[0]], pts[e[1]]) for e in cyc_edges]
    for i in range(k):
        for j in range(i + 1, k):
            try:
                if properly_cross(cyc_segs[i], cyc_segs[j]):
                    raise StructureError(f"cycle edges {cyc_edges[i]} and {cyc_edges[j]} cross")
            except GeneralPositionError as exc:
                raise StructureError(f"degenerate cycle: {exc}") from exc
    cyc_set = set(cyc_edges)
    doubled = [Point(2 * pts[v].x, 2 * pts[v].y) for v in cycle_order]
    out = []
    for e in vis:
        if e in cyc_set:
            out.append(e)
            continue
        crossed = False
        seg = Segment(pts[e[0]], pts[e[1]])
        for cs in cyc_segs:
            if properly_cross(seg, cs):
                crossed = True
                break
        if crossed:
            continue
        mid = Point(pts[e[0]].x + pts[e[1]].x, pts[e[0]].y + pts[e[1]].y)
        side = point_in_polygon(mid, doubled)
        if side == 0:
            raise GeneralPositionError(f"midpoint of {e} lies on the cycle boundary")
        if side > 0:
            out.append(e)
    return frozenset(out)


# ---------------------------------------------------------------------------
# canonical JSON round-tripping
# ---------------------------------------------------------------------------

def instance_to_json(inst: Instance) -> str:
    payload = {
        "points": [[p.x, p.y] for p in inst.graph.points],
        "edges": [list(e) for e in sorted(inst.graph.edges)],
        "unhappy": sorted(inst.unhappy),
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def instance_from_json(text: str, skip_gp_check: bool = False) -> Instance:
    payload = json.loads(text)
    for key in ("points", "edges"):
        if key not in payload:
            raise InvalidInstanceError([Violation("missing-field", (key,), "required")])
    return validate_instance(
        payload["points"], payload["edges"], payload.get("unhappy", ()), skip_gp_check
    )


def happy_set_to_json(edges: Iterable[Edge]) -> str:
    payload = {"edges": [list(e) for e in sorted(edge_key(u, v) for u, v in edges)]}
    return json.dumps(payload, separators=(",", ":")) + "\n"


def happy_set_from_json(text: str) -> tuple[Edge, ...]:
    payload = json.loads(text)
    return tuple(sorted(edge_key(u, v) for u, v in payload["edges"]))


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(instance_to_json(inst).encode()).hexdigest()[:12]
