"""Seeded generators for the benchmark instance families.

Every generator is deterministic in (kind, n, seed), validates what it emits,
and retries with fresh jitter when a post-condition (general position, family
property) fails.  It raises rather than ever emitting a non-conforming
instance.
"""

import math
import random
from typing import Callable

from .geom import CCW, Point, orient
from .model import (
    Instance,
    InvalidInstanceError,
    edge_key,
    validate_instance,
    visibility_graph,
)
from .paths import is_pseudoconvex, pockets

KINDS = ("xmonotone", "convex-path", "convex-graph", "zigzag", "spiral")

# exhaustive collinearity checking is cubic; above this size we rely on the
# constructions themselves (convexity, wide jittered coordinate ranges)
FULL_VALIDATION_MAX_N = 64

_MAX_ATTEMPTS = 64


class GenerationError(RuntimeError):
    """The requested family property could not be established."""


class _Retry(Exception):
    pass


def _build_instance(points, edges, n: int) -> Instance:
    try:
        return validate_instance(points, edges, (), skip_gp_check=n > FULL_VALIDATION_MAX_N)
    except InvalidInstanceError as exc:
        raise _Retry(str(exc)) from exc


def _xmonotone(n: int, rng: random.Random) -> Instance:
    x_range = max(1024, 4 * n)
    y_range = max(1024, 64 * n * n * n)
    xs = rng.sample(range(x_range * 16), n)
    xs.sort()
    points = [[x, rng.randrange(y_range)] for x in xs]
    edges = [[i, i + 1] for i in range(n - 1)]
    return _build_instance(points, edges, n)


def _convex_points(n: int, rng: random.Random) -> list[list[int]]:
    radius = max(10_000_000, 40 * n * n)
    for _ in range(8):
        angles = [2 * math.pi * (i + 0.8 * rng.random()) / n for i in range(n)]
        pts = [
            [round(radius * math.cos(a)), round(radius * math.sin(a))] for a in angles
        ]
        ok = len({tuple(p) for p in pts}) == n
        if ok:
            for i in range(n):
                a = Point(*pts[i])
                b = Point(*pts[(i + 1) % n])
                c = Point(*pts[(i + 2) % n])
                if orient(a, b, c) != CCW:
                    ok = False
                    break
        if ok:
            return pts
        radius *= 4
    raise _Retry("could not place points in strictly convex position")


def _convex_path(n: int, rng: random.Random) -> Instance:
    pts = _convex_points(n, rng)
    edges = [[i, i + 1] for i in range(n - 1)]
    return _build_instance(pts, edges, n)


def _convex_graph(n: int, rng: random.Random) -> Instance:
    from .geom import GeneralPositionError, Segment, properly_cross

    pts = _convex_points(n, rng)
    points = [Point(*p) for p in pts]
    edges: list[tuple[int, int]] = []
    segs = []
    for i in range(n):
        if rng.random() < 0.5:
            e = edge_key(i, (i + 1) % n)
            edges.append(e)
            segs.append(Segment(points[e[0]], points[e[1]]))
    for _ in range(n):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        e = edge_key(u, v)
        if e in edges:
            continue
        seg = Segment(points[e[0]], points[e[1]])
        try:
            if any(properly_cross(seg, s) for s in segs):
                continue
        except GeneralPositionError:
            continue
        edges.append(e)
        segs.append(seg)
    return _build_instance(pts, [list(e) for e in edges], n)


def _zigzag(n: int, rng: random.Random) -> Instance:
    if n < 4:
        raise GenerationError("zigzag needs at least 4 vertices")
    m_left = (n + 1) // 2
    m_right = n // 2
    step = 1000 * 64
    width = 1200 * 64
    bulge = 400 * 64

    def jitter() -> int:
        return rng.randrange(-18 * 64, 18 * 64)

    def column_x(i: int, m: int) -> int:
        if m == 1:
            return bulge
        c = (m - 1) / 2
        frac = 1.0 - ((i - c) / max(c, 0.5)) ** 2
        return round(bulge * frac)

    left = [
        [column_x(i, m_left) + jitter(), 2 * i * step + jitter()] for i in range(m_left)
    ]
    right = [
        [width - column_x(i, m_right) + jitter(), (2 * i + 1) * step + jitter()]
        for i in range(m_right)
    ]
    points: list[list[int]] = []
    order: list[int] = []
    for i in range(m_left):
        points.append(left[i])
        order.append(len(points) - 1)
        if i < m_right:
            points.append(right[i])
            order.append(len(points) - 1)
    edges = [[order[i], order[i + 1]] for i in range(len(order) - 1)]
    inst = _build_instance(points, edges, n)
    if vis_component_count(inst) < 2:
        raise _Retry("zigzag visibility graph is connected")
    return inst


def _spiral(n: int, rng: random.Random) -> Instance:
    if n < 5:
        raise GenerationError("spiral needs at least 5 vertices")
    scale = 64
    width, height = 1600 * scale, 1600 * scale
    margin = 400 * scale
    y_high, y_low = 800 * scale, 200 * scale

    def jit(amount: int = 20 * scale) -> int:
        return rng.randrange(-amount, amount)

    with_top = (n - 4) % 2 == 0  # keep the inner zigzag starting and ending high
    k = n - 5 if with_top else n - 4

    a = [jit(), jit(8 * scale)]
    e = [width + jit(), jit(8 * scale)]
    f = [width + margin + jit(), height + jit(8 * scale)]
    g = [-margin + jit(), height + jit(8 * scale)]
    inner = []
    for i in range(k):  # i = 0 is nearest E; k odd keeps both ends of the zigzag high
        x = width - (i + 1) * width // (k + 1) + jit(min(10 * scale, width // (4 * (k + 1))))
        y = (y_high if i % 2 == 0 else y_low) + jit()
        inner.append([x, y])

    points = [f, e] + inner + [a, g]
    if with_top:
        t = [-margin + 60 * scale + jit(4 * scale), height + 40 * scale + jit(2 * scale)]
        points.append(t)
    edges = [[i, i + 1] for i in range(len(points) - 1)]
    inst = _build_instance(points, edges, n)

    report = is_pseudoconvex(inst.graph)
    if not report.ok:
        raise _Retry(f"spiral not pseudoconvex: {report.witness}")
    if not any(pk.reflex for pk in pockets(inst.graph)):
        raise _Retry("spiral has no reflex pocket vertex")
    return inst


def vis_component_count(inst: Instance) -> int:
    """Connected components of the visibility graph (isolated vertices count)."""
    parent = list(range(inst.graph.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in visibility_graph(inst.graph):
        parent[find(u)] = find(v)
    return len({find(v) for v in range(inst.graph.n)})


def vis_components(inst: Instance) -> list[frozenset[int]]:
    parent = list(range(inst.graph.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in visibility_graph(inst.graph):
        parent[find(u)] = find(v)
    groups: dict[int, set[int]] = {}
    for v in range(inst.graph.n):
        groups.setdefault(find(v), set()).add(v)
    return sorted((frozenset(g) for g in groups.values()), key=min)


_BUILDERS: dict[str, Callable[[int, random.Random], Instance]] = {
    "xmonotone": _xmonotone,
    "convex-path": _convex_path,
    "convex-graph": _convex_graph,
    "zigzag": _zigzag,
    "spiral": _spiral,
}


def generate(kind: str, n: int, seed: int) -> Instance:
    """Deterministic instance for (kind, n, seed); raises GenerationError when
    the family property cannot be established after bounded retries."""
    if kind not in _BUILDERS:
        raise GenerationError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    if n < 2:
        raise GenerationError("need at least 2 vertices")
    last = ""
    for attempt in range(_MAX_ATTEMPTS):
        rng = random.Random(f"{kind}:{n}:{seed}:{attempt}")
        try:
            return _BUILDERS[kind](n, rng)
        except _Retry as exc:
            last = str(exc)
    raise GenerationError(f"gave up on {kind} n={n} seed={seed} after "
                          f"{_MAX_ATTEMPTS} attempts: {last}")
