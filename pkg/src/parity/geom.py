"""Exact geometric primitives on integer coordinates.

Every predicate here is evaluated with arbitrary-precision integer (or exact
rational) arithmetic; nothing in this module touches a float, so results are
reproducible bit for bit across platforms.
"""

from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence

# Coordinates are capped so that a 2x2 orientation determinant stays inside
# a 128-bit signed range even before Python's bignums would kick in.
COORD_LIMIT = 2**62

CCW = 1
CW = -1
COLLINEAR = 0


class GeneralPositionError(ValueError):
    """A degeneracy (collinear triple, vertex on a ray, ...) broke a contract."""


class Point(NamedTuple):
    x: int
    y: int


class Segment(NamedTuple):
    a: Point
    b: Point


def check_coordinate(value: int) -> int:
    """Validate one coordinate at ingestion time."""
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"coordinate must be an int, got {value!r}")
    if not -COORD_LIMIT <= value <= COORD_LIMIT:
        raise ValueError(f"coordinate {value} exceeds the 2^62 cap")
    return value


def orient(p: Point, q: Point, r: Point) -> int:
    """Sign of the cross product (q - p) x (r - p): CCW, CW or COLLINEAR."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    if d > 0:
        return CCW
    if d < 0:
        return CW
    return COLLINEAR


def _strictly_inside(a: Point, b: Point, c: Point) -> bool:
    # assumes a, b, c collinear; lexicographic order equals order along the line
    lo, hi = (a, b) if a <= b else (b, a)
    return lo < c < hi


def point_on_segment(p: Point, seg: Segment) -> bool:
    """True iff p lies on the closed segment."""
    a, b = seg
    if orient(a, b, p) != COLLINEAR:
        return False
    lo, hi = (a, b) if a <= b else (b, a)
    return lo <= p <= hi


def properly_cross(s1: Segment, s2: Segment) -> bool:
    """True iff the segments meet in a point interior to both.

    Segments sharing an endpoint never properly cross.  An endpoint lying in
    the interior of the other segment violates general position and raises
    GeneralPositionError.
    """
    a, b = s1
    c, d = s2
    if a == c or a == d or b == c or b == d:
        return False
    d1 = orient(a, b, c)
    d2 = orient(a, b, d)
    d3 = orient(c, d, a)
    d4 = orient(c, d, b)
    if d1 == COLLINEAR and _strictly_inside(a, b, c):
        raise GeneralPositionError(f"endpoint {c} lies inside segment {s1}")
    if d2 == COLLINEAR and _strictly_inside(a, b, d):
        raise GeneralPositionError(f"endpoint {d} lies inside segment {s1}")
    if d3 == COLLINEAR and _strictly_inside(c, d, a):
        raise GeneralPositionError(f"endpoint {a} lies inside segment {s2}")
    if d4 == COLLINEAR and _strictly_inside(c, d, b):
        raise GeneralPositionError(f"endpoint {b} lies inside segment {s2}")
    return d1 * d2 < 0 and d3 * d4 < 0


def convex_hull(points: Sequence[Point]) -> list[int]:
    """Indices of the hull vertices in CCW order, monotone-chain style.

    The walk starts at the lexicographically smallest point.  Points strictly
    inside the hull (or collinear on an edge) are dropped.
    """
    if len(points) < 3:
        raise ValueError("convex hull needs at least 3 points")
    order = sorted(range(len(points)), key=points.__getitem__)

    def build(idx: Iterable[int]) -> list[int]:
        out: list[int] = []
        for i in idx:
            px, py = points[i]
            while len(out) >= 2:
                ax, ay = points[out[-2]]
                bx, by = points[out[-1]]
                if (bx - ax) * (py - ay) - (by - ay) * (px - ax) > 0:
                    break
                out.pop()
            out.append(i)
        return out

    lower = build(order)
    upper = build(reversed(order))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise GeneralPositionError("all points are collinear")
    return hull


def point_in_polygon(pt: Point, polygon: Sequence[Point]) -> int:
    """Locate pt relative to a simple polygon: 1 inside, 0 on boundary, -1 outside."""
    n = len(polygon)
    for i in range(n):
        if point_on_segment(pt, Segment(polygon[i], polygon[(i + 1) % n])):
            return 0
    inside = False
    px, py = pt
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        if (a.y > py) == (b.y > py):
            continue
        # edge straddles the horizontal through pt; half-open rule at vertices
        side = orient(a, b, pt)
        if b.y > a.y:
            if side == CCW:
                inside = not inside
        else:
            if side == CW:
                inside = not inside
    return 1 if inside else -1


class RayHit(NamedTuple):
    index: int
    t: Fraction

    def point(self, origin: Point, direction: tuple[int, int]) -> tuple[Fraction, Fraction]:
        return (origin.x + self.t * direction[0], origin.y + self.t * direction[1])


def _endpoint_ray_param_positive(origin: Point, direction: tuple[int, int], p: Point) -> bool:
    # p is known to be on the ray's supporting line; is its parameter > 0?
    dx, dy = direction
    if dx != 0:
        return (p.x - origin.x > 0) == (dx > 0) and p.x != origin.x
    return (p.y - origin.y > 0) == (dy > 0) and p.y != origin.y


def ray_first_hit(
    origin: Point,
    direction: tuple[int, int],
    boundary: Sequence[Segment],
    skip: Iterable[int] = (),
) -> Optional[RayHit]:
    """First boundary segment met by the open ray origin + t*direction, t > 0.

    Parameters are compared as exact rationals.  A ray passing through a
    boundary vertex is a general-position violation and raises.
    """
    dx, dy = direction
    if dx == 0 and dy == 0:
        raise ValueError("ray direction must be nonzero")
    skipped = frozenset(skip)
    best: Optional[RayHit] = None
    for idx, seg in enumerate(boundary):
        if idx in skipped:
            continue
        a, b = seg
        sx, sy = b.x - a.x, b.y - a.y
        denom = dx * sy - dy * sx
        aox, aoy = a.x - origin.x, a.y - origin.y
        if denom == 0:
            if aox * dy - aoy * dx == 0:
                # segment collinear with the ray line
                if _endpoint_ray_param_positive(origin, direction, a) or _endpoint_ray_param_positive(
                    origin, direction, b
                ):
                    raise GeneralPositionError(
                        f"ray from {origin} runs through boundary segment {seg}"
                    )
            continue
        t_num = aox * sy - aoy * sx
        u_num = aox * dy - aoy * dx
        if denom < 0:
            denom, t_num, u_num = -denom, -t_num, -u_num
        if t_num <= 0:
            continue
        if u_num < 0 or u_num > denom:
            continue
        if u_num == 0 or u_num == denom:
            raise GeneralPositionError(
                f"ray from {origin} passes exactly through a vertex of segment {seg}"
            )
        t = Fraction(t_num, denom)
        if best is None or t < best.t:
            best = RayHit(idx, t)
    return best


def polygon_signed_area_doubled(polygon: Sequence[Point]) -> int:
    """Twice the signed area; positive for CCW orientation."""
    total = 0
    n = len(polygon)
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total
