"""The plane-path pipeline.

A plane path either has a crossing-free spanning tree inside its visibility
graph (then every even unhappy set can be satisfied by symmetric differences
of tree paths), or it is pseudoconvex, in which case its tight hull is a
convexly hugging cycle and the dual-tree DP finishes the job.
"""

import logging
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .dual import HuggingCycle, build_dual, solve_hugged
from .geom import (
    GeneralPositionError,
    Point,
    Segment,
    convex_hull,
    point_in_polygon,
    polygon_signed_area_doubled,
    properly_cross,
    ray_first_hit,
)
from .model import (
    Edge,
    Instance,
    PlaneGraph,
    StructureError,
    edge_key,
    visibility_graph,
)
from . import oracle as oracle_mod

log = logging.getLogger(__name__)


class NotAPathError(ValueError):
    """The graph is not a plane path."""


class NotPseudoconvexError(ValueError):
    """An operation that needs a pseudoconvex path got something else."""


def path_order(graph: PlaneGraph) -> tuple[int, ...]:
    """Vertices in path order (lowest-id endpoint first); raises otherwise."""
    n = graph.n
    if n == 1:
        if graph.edges:
            raise NotAPathError("single vertex with edges")
        return (0,)
    if len(graph.edges) != n - 1:
        raise NotAPathError("a path on n vertices has exactly n-1 edges")
    # flat two-slot neighbour table; kept cheap because the handshake
    # shortcut in solve_path runs this on every call
    first = [-1] * n
    second = [-1] * n
    for u, v in graph.edges:
        if first[u] < 0:
            first[u] = v
        elif second[u] < 0:
            second[u] = v
        else:
            raise NotAPathError(f"vertex {u} has degree > 2")
        if first[v] < 0:
            first[v] = u
        elif second[v] < 0:
            second[v] = u
        else:
            raise NotAPathError(f"vertex {v} has degree > 2")
    ends = [v for v in range(n) if first[v] >= 0 and second[v] < 0]
    if len(ends) != 2 or any(first[v] < 0 for v in range(n)):
        raise NotAPathError("degree sequence is not that of a path")
    cur = min(ends)
    prev = -1
    order = [cur]
    for _ in range(n - 1):
        nxt = first[cur] if first[cur] != prev else second[cur]
        if nxt < 0:
            raise NotAPathError("graph is disconnected")
        prev, cur = cur, nxt
        order.append(cur)
    return tuple(order)


@dataclass(frozen=True)
class Pocket:
    hull_edge: Edge                 # (q_i, q_j) with q_j following q_i on the CCW hull
    chain: tuple[int, ...]          # path vertices from q_i to q_j, inclusive
    reflex: tuple[int, ...]         # reflex chain vertices, ordered from q_i to q_j


def _pocket_for(graph: PlaneGraph, pos: dict[int, int], order: Sequence[int],
                qa: int, qb: int) -> Pocket:
    pa, pb = pos[qa], pos[qb]
    if pa <= pb:
        chain = tuple(order[pa:pb + 1])
    else:
        chain = tuple(reversed(order[pb:pa + 1]))
    pts = graph.points
    poly = [pts[v] for v in chain]
    sigma = 1 if polygon_signed_area_doubled(poly) > 0 else -1
    reflex = []
    for j, ((ax, ay), (bx, by), (cx, cy)) in enumerate(zip(poly, poly[1:], poly[2:])):
        turn = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        if turn == 0:
            raise GeneralPositionError(f"collinear chain at vertex {chain[j + 1]}")
        if (turn > 0) != (sigma > 0):
            reflex.append(chain[j + 1])
    return Pocket(hull_edge=(qa, qb), chain=chain, reflex=tuple(reflex))


def pockets(
    graph: PlaneGraph,
    order: Optional[Sequence[int]] = None,
    hull: Optional[list[int]] = None,
) -> list[Pocket]:
    """One pocket per convex-hull edge missing from the path."""
    if order is None:
        order = path_order(graph)
    if graph.n < 3:
        return []
    pos = {v: i for i, v in enumerate(order)}
    if hull is None:
        hull = convex_hull(graph.points)
    es = graph.edge_set
    out = []
    for i in range(len(hull)):
        qa, qb = hull[i], hull[(i + 1) % len(hull)]
        if edge_key(qa, qb) not in es:
            out.append(_pocket_for(graph, pos, order, qa, qb))
    return out


@dataclass(frozen=True)
class PseudoconvexityReport:
    ok: bool
    witness: Optional[tuple] = None


def is_pseudoconvex(graph: PlaneGraph, order: Optional[Sequence[int]] = None,
                    pkts: Optional[list[Pocket]] = None,
                    hull: Optional[list[int]] = None) -> PseudoconvexityReport:
    """Check the pocket conditions of a plane path.

    Degenerate sizes: a 2-vertex path counts as pseudoconvex (its visibility
    graph is empty), a single vertex does not (nothing to satisfy).
    """
    if order is None:
        order = path_order(graph)
    n = graph.n
    if n == 1:
        return PseudoconvexityReport(False, ("degenerate", 0))
    if n == 2:
        return PseudoconvexityReport(True)
    pts = graph.points
    if hull is None:
        hull = convex_hull(graph.points)
    hull_set = set(hull)
    endpoints = (order[0], order[-1])
    for e in endpoints:
        if e not in hull_set:
            return PseudoconvexityReport(False, ("endpoint-off-hull", e))
    if pkts is None:
        pkts = pockets(graph, order, hull)
    for pk in pkts:
        poly = [pts[v] for v in pk.chain]
        chain_set = set(pk.chain)
        for e in endpoints:
            if e in chain_set:
                continue
            if point_in_polygon(pts[e], poly) >= 0:
                return PseudoconvexityReport(False, ("endpoint-in-pocket", e, pk.hull_edge))
        if not pk.reflex:
            continue
        chain = pk.chain
        segs = [Segment(pts[chain[i]], pts[chain[i + 1]]) for i in range(len(chain) - 1)]
        hull_idx = len(segs)
        segs.append(Segment(pts[pk.hull_edge[1]], pts[pk.hull_edge[0]]))
        cpos = {v: i for i, v in enumerate(chain)}
        for r in pk.reflex:
            i = cpos[r]
            prev_pt, cur_pt, next_pt = pts[chain[i - 1]], pts[r], pts[chain[i + 1]]
            skip = {i - 1, i}
            for src in (prev_pt, next_pt):
                direction = (cur_pt.x - src.x, cur_pt.y - src.y)
                hit = ray_first_hit(cur_pt, direction, segs, skip)
                if hit is None or hit.index != hull_idx:
                    return PseudoconvexityReport(
                        False, ("ray", pk.hull_edge, r, direction)
                    )
    return PseudoconvexityReport(True)


def tight_hull(
    graph: PlaneGraph,
    order: Optional[Sequence[int]] = None,
    pkts: Optional[list[Pocket]] = None,
    hull: Optional[list[int]] = None,
    checked: bool = False,
) -> HuggingCycle:
    """Hugging cycle routing each missing hull edge through its reflex chain.

    `checked=True` skips re-verifying pseudoconvexity (caller already did).
    """
    if order is None:
        order = path_order(graph)
    if hull is None:
        hull = convex_hull(graph.points)
    if pkts is None:
        pkts = pockets(graph, order, hull)
    if not checked:
        report = is_pseudoconvex(graph, order, pkts, hull)
        if not report.ok:
            raise NotPseudoconvexError(f"tight hull undefined: witness {report.witness}")
    es = graph.edge_set
    by_edge = {pk.hull_edge: pk for pk in pkts}
    cyc: list[int] = []
    for i in range(len(hull)):
        qa, qb = hull[i], hull[(i + 1) % len(hull)]
        cyc.append(qa)
        if edge_key(qa, qb) not in es:
            cyc.extend(by_edge[(qa, qb)].reflex)
    try:
        return HuggingCycle.build(graph, cyc)
    except StructureError as exc:
        raise StructureError(
            f"tight hull does not visit every vertex ({exc}); "
            "this contradicts pseudoconvexity"
        ) from exc


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def _sq_len(pts: Sequence[Point], e: Edge) -> int:
    dx = pts[e[0]].x - pts[e[1]].x
    dy = pts[e[0]].y - pts[e[1]].y
    return dx * dx + dy * dy


def _greedy_tree(graph: PlaneGraph, edges: list[Edge]) -> Optional[list[Edge]]:
    uf = _UnionFind(graph.n)
    chosen: list[Edge] = []
    segs: list[Segment] = []
    for e in edges:
        if uf.find(e[0]) == uf.find(e[1]):
            continue
        seg = graph.segment(e)
        if any(properly_cross(seg, s) for s in segs):
            continue
        uf.union(e[0], e[1])
        chosen.append(e)
        segs.append(seg)
        if len(chosen) == graph.n - 1:
            return chosen
    return None


def _exhaustive_tree(graph: PlaneGraph, edges: list[Edge]) -> Optional[list[Edge]]:
    n = graph.n
    segs = [graph.segment(e) for e in edges]
    m = len(edges)
    cross = [[False] * m for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            cross[i][j] = cross[j][i] = properly_cross(segs[i], segs[j])

    chosen: list[int] = []

    def recurse(start: int, comps: int, uf_parent: list[int]) -> bool:
        if comps == 1:
            return True
        if m - start < comps - 1:
            return False
        for i in range(start, m):
            u, v = edges[i]
            # find with a scratch union-find snapshot
            ru, rv = u, v
            while uf_parent[ru] != ru:
                ru = uf_parent[ru]
            while uf_parent[rv] != rv:
                rv = uf_parent[rv]
            if ru == rv:
                continue
            if any(cross[i][j] for j in chosen):
                continue
            nxt = list(uf_parent)
            nxt[rv] = ru
            chosen.append(i)
            if recurse(i + 1, comps - 1, nxt):
                return True
            chosen.pop()
        return False

    if recurse(0, n, list(range(n))):
        return [edges[i] for i in chosen]
    return None


def plane_spanning_tree(
    graph: PlaneGraph, seed: int = 0, vis: Optional[frozenset[Edge]] = None
) -> Optional[tuple[Edge, ...]]:
    """A crossing-free spanning tree inside the visibility graph, or None.

    Returns None for pseudoconvex paths (none exists).  For the rest, a
    shortest-first greedy is tried, then seeded reshuffles, then (for up to 12
    vertices) exhaustive backtracking.  A None for a larger non-pseudoconvex
    path therefore means "not found", never "does not exist".
    """
    if is_pseudoconvex(graph).ok:
        return None
    return _spanning_tree_search(graph, seed, vis)


def _spanning_tree_search(
    graph: PlaneGraph, seed: int = 0, vis: Optional[frozenset[Edge]] = None
) -> Optional[tuple[Edge, ...]]:
    if vis is None:
        vis = visibility_graph(graph)
    pts = graph.points
    ordered = sorted(vis, key=lambda e: (_sq_len(pts, e), e))
    tree = _greedy_tree(graph, ordered)
    if tree is None:
        rng = random.Random(seed)
        for _ in range(32):
            shuffled = list(ordered)
            rng.shuffle(shuffled)
            tree = _greedy_tree(graph, shuffled)
            if tree is not None:
                break
    if tree is None and graph.n <= 12:
        tree = _exhaustive_tree(graph, ordered)
    if tree is None:
        log.warning("no plane spanning tree found for n=%d (greedy + restarts)", graph.n)
        return None
    return tuple(sorted(tree))


def tjoin_from_tree(
    tree_edges: Sequence[Edge], unhappy: frozenset[int], n: int
) -> tuple[Edge, ...]:
    """Pair the unhappy vertices and xor the connecting tree paths together.

    The edges of odd multiplicity in the union of the pairwise tree paths have
    odd-degree set exactly `unhappy`, whatever the pairing; we pair sorted
    vertices consecutively for determinism.
    """
    if len(unhappy) % 2:
        raise ValueError("unhappy set must have even size")
    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in tree_edges:
        adj[u].append(v)
        adj[v].append(u)
    if len(tree_edges) != n - 1:
        raise StructureError("tree must span all vertices")
    parent = [-1] * n
    seen = [False] * n
    order = [0]
    seen[0] = True
    for x in order:
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                order.append(y)
    if not all(seen):
        raise StructureError("tree is disconnected")
    depth = [0] * n
    for x in order[1:]:
        depth[x] = depth[parent[x]] + 1

    counts: dict[Edge, int] = {}
    pairs = sorted(unhappy)
    for a, b in zip(pairs[::2], pairs[1::2]):
        x, y = a, b
        while x != y:
            if depth[x] < depth[y]:
                x, y = y, x
            counts[edge_key(x, parent[x])] = counts.get(edge_key(x, parent[x]), 0) + 1
            x = parent[x]
    return tuple(sorted(e for e, c in counts.items() if c % 2))


@dataclass(frozen=True)
class PathResult:
    feasible: bool
    happy_set: Optional[tuple[Edge, ...]]
    route: str                    # handshake | trivial | oracle | spanning-tree | tight-hull-dp
    note: Optional[str] = None


def solve_path(
    graph: PlaneGraph,
    unhappy: frozenset[int],
    construct: bool = True,
    seed: int = 0,
) -> PathResult:
    """Decide (and construct) a happy set for a plane path."""
    order = path_order(graph)
    if len(unhappy) % 2:
        return PathResult(False, None, "handshake")
    if not unhappy:
        return PathResult(True, () if construct else None, "trivial")
    if graph.n <= 3:
        res = oracle_mod.brute_force(Instance(graph, unhappy))
        return PathResult(res.feasible, res.happy_set if construct else None, "oracle")
    hull = convex_hull(graph.points)
    pkts = pockets(graph, order, hull)
    report = is_pseudoconvex(graph, order, pkts, hull)
    if not report.ok:
        if not construct:
            return PathResult(True, None, "spanning-tree")
        tree = _spanning_tree_search(graph, seed)
        if tree is None:
            return PathResult(
                True, None, "spanning-tree",
                note="feasible for every even unhappy set, but no spanning tree "
                "was found within the search budget; rerun with another seed",
            )
        return PathResult(
            True, tjoin_from_tree(tree, unhappy, graph.n), "spanning-tree"
        )
    hug = tight_hull(graph, order, pkts, hull, checked=True)
    res = solve_hugged(graph, hug, unhappy, construct=construct)
    return PathResult(res.feasible, res.happy_set, "tight-hull-dp")


def is_universally_happy(graph: PlaneGraph) -> bool:
    """Can every even unhappy set be satisfied on this path?"""
    return not is_pseudoconvex(graph).ok


def adversarial_unhappy_set(graph: PlaneGraph) -> frozenset[int]:
    """An even unhappy set a pseudoconvex path can never satisfy.

    Sweeps the dual path of faces from the far leaf toward the root, marking
    per face either all new vertices or all but the connector endpoint that
    touches the face's cycle-only edge, so that every face ends up forced and
    the last face has no happy internal vertex.
    """
    order = path_order(graph)
    report = is_pseudoconvex(graph, order)
    if not report.ok:
        raise NotPseudoconvexError(f"witness: {report.witness}")
    if graph.n <= 2:
        return frozenset(range(graph.n))
    hug = tight_hull(graph, order)
    dual = build_dual(graph, hug)
    faces = dual.faces
    nf = len(faces)
    degree = [len(f.children) + (0 if f.parent is None else 1) for f in faces]
    if any(d > 2 for d in degree):
        raise StructureError("dual of a pseudoconvex path must be a path of faces")

    def ring_edges(fid: int) -> list[Edge]:
        ring = faces[fid].ring
        return [edge_key(ring[i], ring[(i + 1) % len(ring)]) for i in range(len(ring))]

    endpoints = {order[0], order[-1]}
    leaves = [f for f in range(nf) if degree[f] <= 1]
    anchored = [f for f in leaves if endpoints & set(faces[f].ring)]
    if not anchored:
        raise StructureError("no leaf face contains a path endpoint")
    f0 = min(anchored, key=lambda f: (min(endpoints & set(faces[f].ring)), f))

    neighbours: list[set[int]] = [set() for _ in range(nf)]
    for f in range(nf):
        if faces[f].parent is not None:
            neighbours[f].add(faces[f].parent)
            neighbours[faces[f].parent].add(f)
    chain = [f0]
    while len(chain) < nf:
        nxt = neighbours[chain[-1]] - set(chain[-2:])
        chain.append(nxt.pop())

    unhappy: set[int] = set()
    used: set[int] = set()
    for i in reversed(range(nf)):
        fid = chain[i]
        face = faces[fid]
        ring_set = set(face.ring)
        if i == 0:
            u = min(endpoints & ring_set)
        else:
            conly = [e for e, in_g in zip(ring_edges(fid), face.in_graph) if not in_g]
            if len(conly) != 1:
                raise StructureError(
                    f"face {face.ring} has {len(conly)} cycle-only edges, expected 1"
                )
            shared = set(ring_edges(fid)) & set(ring_edges(chain[i - 1]))
            if len(shared) != 1:
                raise StructureError("adjacent faces must share exactly one edge")
            connector = shared.pop()
            candidates = [w for w in connector if w in conly[0]]
            if not candidates:
                raise StructureError(
                    f"no connector endpoint of face {face.ring} touches its cycle edge"
                )
            u = candidates[0]
        if len(face.ring) % 2 == 0:
            unhappy |= ring_set - used
        else:
            unhappy |= ring_set - used - {u}
        used |= ring_set
    if len(unhappy) % 2:
        raise StructureError("adversarial construction produced an odd set")
    return frozenset(unhappy)
