"""Happy sets inside a convexly hugging cycle via a weak-dual-tree DP.

The union of the graph with a spanning cycle that encloses it is a
biconnected outerplanar subdivision, so its weak dual is a tree.  Each
bounded face is solved with the closed-form convex-face constructions under
the at most four parity overrides of its connector endpoints; a bottom-up
pass propagates which endpoint parities each subtree can realize, and a
top-down pass reassembles a witness happy set.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Optional, Sequence

from .faces import FaceInstance, face_construct
from .geom import (
    GeneralPositionError,
    Point,
    Segment,
    convex_hull,
    point_in_polygon,
    properly_cross,
)
from .model import Edge, PlaneGraph, StructureError, check_cycle_order, edge_key


class NotConvexlyHuggingError(StructureError):
    """The supplied cycle does not make every bounded face convex."""


class NotConvexPositionError(ValueError):
    """Raised when a convex-position-only entry point gets other input."""


@dataclass(frozen=True)
class HuggingCycle:
    order: tuple[int, ...]
    in_graph: tuple[bool, ...]  # cycle edge i joins order[i] and order[i+1 mod n]

    @classmethod
    def build(cls, graph: PlaneGraph, order: Sequence[int]) -> "HuggingCycle":
        check_cycle_order(graph.n, order)
        if graph.n < 3:
            raise StructureError("a hugging cycle needs at least 3 vertices")
        es = graph.edge_set
        k = len(order)
        flags = []
        for i in range(k):
            a = order[i]
            b = order[i + 1] if i + 1 < k else order[0]
            flags.append(((a, b) if a < b else (b, a)) in es)
        return cls(tuple(order), tuple(flags))

    def edge_pairs(self) -> list[Edge]:
        o = self.order
        k = len(o)
        out = []
        for i in range(k):
            a = o[i]
            b = o[i + 1] if i + 1 < k else o[0]
            out.append((a, b) if a < b else (b, a))
        return out

    def validate_geometry(self, graph: PlaneGraph) -> None:
        """Full checks for untrusted cycles: simplicity, no crossings with the
        graph, and every graph edge inside the closed region (quadratic)."""
        pts = graph.points
        pairs = self.edge_pairs()
        segs = [Segment(pts[a], pts[b]) for a, b in pairs]
        for i in range(len(segs)):
            for j in range(i + 1, len(segs)):
                try:
                    if properly_cross(segs[i], segs[j]):
                        raise StructureError(
                            f"cycle edges {pairs[i]} and {pairs[j]} cross"
                        )
                except GeneralPositionError as exc:
                    raise StructureError(f"degenerate cycle: {exc}") from exc
        pair_set = set(pairs)
        doubled = [Point(2 * pts[v].x, 2 * pts[v].y) for v in self.order]
        for e in graph.edges:
            if e in pair_set:
                continue
            seg = graph.segment(e)
            for cs, cp in zip(segs, pairs):
                try:
                    if properly_cross(seg, cs):
                        raise StructureError(f"graph edge {e} crosses cycle edge {cp}")
                except GeneralPositionError as exc:
                    raise StructureError(f"degeneracy between {e} and {cp}: {exc}") from exc
            mid = Point(pts[e[0]].x + pts[e[1]].x, pts[e[0]].y + pts[e[1]].y)
            if point_in_polygon(mid, doubled) < 0:
                raise StructureError(f"graph edge {e} lies outside the cycle")


@dataclass
class DualFace:
    ring: tuple[int, ...]          # CCW around the bounded face
    in_graph: tuple[bool, ...]     # ring edge i in the graph's edge set
    parent: Optional[int]
    connector: Edge                # shared edge with parent; a cycle edge at the root
    children: tuple[int, ...]


@dataclass
class WeakDualTree:
    faces: list[DualFace]
    root: int
    postorder: tuple[int, ...]     # children always precede their parent


def _rotation(points: Sequence[Point], center: int, neighbours: list[int]) -> list[int]:
    """Neighbours sorted CCW around the center, by exact comparisons only.

    Vertex degrees in a path-plus-cycle union are tiny, so an insertion sort
    with an inlined half-plane/cross-product comparison beats a comparator
    object; degrees can be larger for general graphs, which is still fine.
    """
    if len(neighbours) <= 2:
        # with at most two neighbours any order is a valid rotation
        return neighbours
    cx, cy = points[center]
    keyed: list[tuple[int, int, int, int]] = []
    for u in neighbours:
        dx = points[u][0] - cx
        dy = points[u][1] - cy
        half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
        keyed.append((half, dx, dy, u))
    out: list[tuple[int, int, int, int]] = []
    for item in keyed:
        h, dx, dy, _u = item
        i = len(out)
        while i > 0:
            h2, dx2, dy2, u2 = out[i - 1]
            if h < h2:
                i -= 1
                continue
            if h == h2:
                cr = dx * dy2 - dy * dx2
                if cr == 0:
                    raise GeneralPositionError(
                        f"neighbours {_u} and {u2} are collinear with vertex {center}"
                    )
                if cr > 0:
                    i -= 1
                    continue
            break
        out.insert(i, item)
    return [u for _, _, _, u in out]


def _ring_is_ccw(pts: Sequence[Point], ring: list[int]) -> bool:
    # orientation from the turn at the lexicographically smallest ring vertex
    best = 0
    bp = pts[ring[0]]
    for i in range(1, len(ring)):
        p = pts[ring[i]]
        if p < bp:
            bp, best = p, i
    ax, ay = pts[ring[best - 1]]
    cx, cy = pts[ring[(best + 1) % len(ring)]]
    return (bp[0] - ax) * (cy - ay) - (bp[1] - ay) * (cx - ax) > 0


def build_dual(graph: PlaneGraph, cycle: HuggingCycle) -> WeakDualTree:
    """Extract the bounded faces of graph-union-cycle and root their dual tree.

    Faces are traced from per-vertex CCW rotation orders; each bounded face is
    verified convex.  Raises NotConvexlyHuggingError or StructureError when
    the cycle is not a convexly hugging cycle for the graph.
    """
    pts = graph.points
    n = graph.n
    cycle_pairs = set(cycle.edge_pairs())
    union_edges = sorted(set(graph.edges) | cycle_pairs)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in union_edges:
        adj[u].append(v)
        adj[v].append(u)

    # next dart of u->v continues, at v, to the rotation predecessor of u;
    # this traces bounded faces counterclockwise and the outer face clockwise
    # (darts are encoded as u * n + v to keep the dict on small ints)
    next_dart: dict[int, int] = {}
    for v in range(n):
        ring = _rotation(pts, v, adj[v])
        vb = v * n
        for i, u in enumerate(ring):
            next_dart[u * n + v] = vb + ring[i - 1]

    visited: set[int] = set()
    rings: list[list[int]] = []
    for start in next_dart:
        if start in visited:
            continue
        ring = []
        cur = start
        while True:
            visited.add(cur)
            ring.append(cur // n)
            cur = next_dart[cur]
            if cur == start:
                break
        rings.append(ring)

    bounded: list[list[int]] = []
    outer_count = 0
    for ring in rings:
        if _ring_is_ccw(pts, ring):
            bounded.append(ring)
        else:
            outer_count += 1
    if outer_count != 1:
        raise StructureError(f"expected one outer face, found {outer_count}")

    es = graph.edge_set
    faces_ring: list[tuple[int, ...]] = []
    faces_flags: list[tuple[bool, ...]] = []
    edge_to_faces: dict[Edge, list[int]] = {}
    for fid, ring in enumerate(bounded):
        L = len(ring)
        if L < 3 or len(set(ring)) != L:
            raise StructureError(f"bounded face {ring} is not a simple cycle")
        ring_pts = [pts[i] for i in ring]
        ring_pts.append(ring_pts[0])
        ring_pts.append(ring_pts[1])
        i = 0
        for (ax, ay), (bx, by), (cx, cy) in zip(ring_pts, ring_pts[1:], ring_pts[2:]):
            if (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) <= 0:
                raise NotConvexlyHuggingError(
                    f"face {ring} is not convex at vertex {ring[(i + 1) % L]}"
                )
            i += 1
        faces_ring.append(tuple(ring))
        flags = []
        for i in range(L):
            a = ring[i]
            b = ring[i + 1] if i + 1 < L else ring[0]
            e = (a, b) if a < b else (b, a)
            flags.append(e in es)
            edge_to_faces.setdefault(e, []).append(fid)
        faces_flags.append(tuple(flags))

    dual_adj: list[set[int]] = [set() for _ in range(len(bounded))]
    interior_edges: dict[Edge, tuple[int, int]] = {}
    for e, fs in edge_to_faces.items():
        if len(fs) == 2:
            if e not in es:
                raise StructureError(f"non-graph edge {e} separates two bounded faces")
            dual_adj[fs[0]].add(fs[1])
            dual_adj[fs[1]].add(fs[0])
            interior_edges[e] = (fs[0], fs[1])
        elif len(fs) == 1:
            if e not in cycle_pairs and e not in es:
                raise StructureError(f"unexpected boundary edge {e}")
        else:
            raise StructureError(f"edge {e} borders {len(fs)} bounded faces")

    nf = len(bounded)
    if len(interior_edges) != nf - 1:
        raise StructureError("weak dual is not a tree (edge count mismatch)")

    leaves = [f for f in range(nf) if len(dual_adj[f]) <= 1]
    root = min(leaves, key=lambda f: (min(faces_ring[f]), f))
    root_cycle_edges = [
        edge_key(faces_ring[root][i], faces_ring[root][(i + 1) % len(faces_ring[root])])
        for i in range(len(faces_ring[root]))
    ]
    root_cycle_edges = [e for e in root_cycle_edges if e in cycle_pairs]
    if not root_cycle_edges:
        raise StructureError("root face has no cycle edge to anchor the DP")
    root_connector = min(root_cycle_edges)

    parent: list[Optional[int]] = [None] * nf
    connector: list[Optional[Edge]] = [None] * nf
    connector[root] = root_connector
    children: list[list[int]] = [[] for _ in range(nf)]
    seen = {root}
    stack = [root]
    order = []
    conn_of = {frozenset(fs): e for e, fs in interior_edges.items()}
    while stack:
        f = stack.pop()
        order.append(f)
        for g in sorted(dual_adj[f]):
            if g in seen:
                continue
            seen.add(g)
            parent[g] = f
            connector[g] = conn_of[frozenset((f, g))]
            children[f].append(g)
            stack.append(g)
    if len(seen) != nf:
        raise StructureError("weak dual is not connected")

    faces = [
        DualFace(
            ring=faces_ring[f],
            in_graph=faces_flags[f],
            parent=parent[f],
            connector=connector[f],
            children=tuple(children[f]),
        )
        for f in range(nf)
    ]
    return WeakDualTree(faces=faces, root=root, postorder=tuple(reversed(order)))


@dataclass(frozen=True)
class HugResult:
    feasible: bool
    happy_set: Optional[tuple[Edge, ...]]


Pair = tuple[int, int]
_PAIRS = ((0, 0), (0, 1), (1, 0), (1, 1))


def _solve_one(
    face: DualFace,
    targets: list[bool],
    pos: dict[int, int],
    child_ids: Sequence[int],
    child_pairs: Sequence[tuple[Edge, Pair]],
) -> Optional[tuple[tuple[Edge, ...], dict[int, Pair]]]:
    t = list(targets)
    for (w, x), (pw, px) in child_pairs:
        if pw:
            t[pos[w]] = not t[pos[w]]
        if px:
            t[pos[x]] = not t[pos[x]]
    sol = face_construct(FaceInstance(face.ring, tuple(t), face.in_graph))
    if sol is None:
        return None
    return sol, {cid: pr for cid, (_, pr) in zip(child_ids, child_pairs)}


def _face_feasible_pairs(
    face: DualFace,
    unhappy: frozenset[int],
    child_results: dict[int, dict[Pair, object]],
    child_connectors: dict[int, Edge],
    queries: Sequence[Pair],
) -> dict[Pair, tuple[tuple[Edge, ...], dict[int, Pair]]]:
    ring = face.ring
    pos = {vid: i for i, vid in enumerate(ring)}
    u, v = face.connector
    base = [vid in unhappy for vid in ring]

    inflexible: list[tuple[int, Edge, Pair]] = []
    flexible: list[tuple[int, Edge, tuple[Pair, Pair]]] = []
    for cid in face.children:
        feats = sorted(child_results[cid].keys())
        conn = child_connectors[cid]
        if len(feats) == 1:
            inflexible.append((cid, conn, feats[0]))
        else:
            flexible.append((cid, conn, (feats[0], feats[1])))

    out: dict[Pair, tuple[tuple[Edge, ...], dict[int, Pair]]] = {}
    for q in queries:
        targets = list(base)
        targets[pos[u]] = bool(q[0])
        targets[pos[v]] = bool(q[1])
        fixed_pairs = [
            (conn, pr) for cid, conn, pr in inflexible
        ]
        fixed_ids = [cid for cid, _, _ in inflexible]
        if len(flexible) <= 2:
            options = [
                [(conn, pr) for pr in prs] for cid, conn, prs in flexible
            ]
            flex_ids = [cid for cid, _, _ in flexible]
            found = None
            for combo in product(*options):
                res = _solve_one(
                    face,
                    targets,
                    pos,
                    fixed_ids + flex_ids,
                    fixed_pairs + list(combo),
                )
                if res is not None:
                    found = res
                    break
            if found is not None:
                out[q] = found
        else:
            # three or more flexible children: feasibility is guaranteed for
            # parity-consistent queries; search for a witness by flipping at
            # most three children away from their first feasible pairs
            flex_ids = [cid for cid, _, _ in flexible]
            found = None
            for size in range(0, 4):
                for flip in combinations(range(len(flexible)), size):
                    combo = [
                        (conn, prs[1] if k in flip else prs[0])
                        for k, (cid, conn, prs) in enumerate(flexible)
                    ]
                    res = _solve_one(
                        face,
                        targets,
                        pos,
                        fixed_ids + flex_ids,
                        fixed_pairs + combo,
                    )
                    if res is not None:
                        found = res
                        break
                if found is not None:
                    break
            if found is None:
                raise StructureError(
                    "internal error: face with three flexible children did not solve"
                )
            out[q] = found
    return out


def _dp_tables(
    dual: WeakDualTree, unhappy: frozenset[int], root_queries_only: bool = True
) -> Optional[dict[int, dict[Pair, tuple[tuple[Edge, ...], dict[int, Pair]]]]]:
    """Bottom-up pass: per face the feasible parity pairs with reconstruction
    data, or None as soon as some face admits no pair."""
    faces = dual.faces
    sub_parity: dict[int, int] = {}
    results: dict[int, dict[Pair, tuple[tuple[Edge, ...], dict[int, Pair]]]] = {}
    for fid in dual.postorder:
        face = faces[fid]
        u, v = face.connector
        p = 0
        for vid in face.ring:
            if vid in unhappy and vid != u and vid != v:
                p ^= 1
        for cid in face.children:
            p ^= sub_parity[cid]
        sub_parity[fid] = p

        if fid == dual.root and root_queries_only:
            queries: list[Pair] = [(int(u in unhappy), int(v in unhappy))]
        else:
            queries = [q for q in _PAIRS if (q[0] ^ q[1]) == p]
        child_results = {cid: results[cid] for cid in face.children}
        child_connectors = {cid: faces[cid].connector for cid in face.children}
        res = _face_feasible_pairs(face, unhappy, child_results, child_connectors, queries)
        if not res:
            return None
        results[fid] = res
    return results


def solve_hugged(
    graph: PlaneGraph,
    cycle: HuggingCycle,
    unhappy: frozenset[int],
    construct: bool = True,
    dual: Optional[WeakDualTree] = None,
) -> HugResult:
    """Decide (and construct) a happy set within a convexly hugging cycle."""
    if graph.n < 3:
        raise ValueError("solve_hugged needs at least 3 vertices")
    if len(unhappy) % 2:
        return HugResult(False, None)
    if dual is None:
        dual = build_dual(graph, cycle)
    results = _dp_tables(dual, unhappy)
    if results is None:
        return HugResult(False, None)

    root_face = dual.faces[dual.root]
    u0, v0 = root_face.connector
    q0 = (int(u0 in unhappy), int(v0 in unhappy))
    if q0 not in results[dual.root]:
        return HugResult(False, None)
    if not construct:
        return HugResult(True, None)

    happy: list[Edge] = []
    stack: list[tuple[int, Pair]] = [(dual.root, q0)]
    while stack:
        fid, q = stack.pop()
        sol, choices = results[fid][q]
        happy.extend(sol)
        for cid, pr in choices.items():
            stack.append((cid, pr))
    return HugResult(True, tuple(sorted(happy)))


def hull_cycle(graph: PlaneGraph) -> HuggingCycle:
    """The convex hull as a hugging cycle; requires all vertices on the hull."""
    if graph.n < 3:
        raise NotConvexPositionError("need at least 3 vertices for a hull cycle")
    hull = convex_hull(graph.points)
    if len(hull) != graph.n:
        inside = sorted(set(range(graph.n)) - set(hull))
        raise NotConvexPositionError(
            f"vertices {inside[:5]} are not in convex position; use the path solver "
            "or supply a hugging cycle"
        )
    return HuggingCycle.build(graph, hull)


def convex_graph_solve(
    graph: PlaneGraph, unhappy: frozenset[int], construct: bool = True
) -> HugResult:
    """Decide a convex-position instance by hugging it with its hull."""
    if graph.n <= 2:
        if len(unhappy) % 2:
            return HugResult(False, None)
        if not unhappy:
            return HugResult(True, () if construct else None)
        # n == 2 with both vertices unhappy: the only candidate edge is 01
        e = edge_key(0, 1)
        if e in graph.edge_set:
            return HugResult(False, None)
        return HugResult(True, (e,) if construct else None)
    return solve_hugged(graph, hull_cycle(graph), unhappy, construct=construct)
