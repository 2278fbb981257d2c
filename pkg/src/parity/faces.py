"""Closed-form happy-set construction on a single convex face.

A face is a ring of vertices in convex position together with flags saying
which boundary edges already belong to the graph.  Chords and absent boundary
edges are usable; present boundary edges are not.  Because the ring is convex,
two chords cross exactly when their endpoints interleave, so everything here
is purely combinatorial.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .model import Edge, edge_key


@dataclass(frozen=True)
class FaceInstance:
    ring: tuple[int, ...]          # vertex ids in convex cyclic order
    unhappy: tuple[bool, ...]      # parity target per ring position
    edge_in_g: tuple[bool, ...]    # edge i joins ring[i] and ring[(i+1) % len]

    def __post_init__(self):
        L = len(self.ring)
        if L < 3:
            raise ValueError("a face needs at least 3 vertices")
        if len(self.unhappy) != L or len(self.edge_in_g) != L:
            raise ValueError("ring, unhappy and edge_in_g must have equal length")


def _ring_adjacent(L: int, i: int, j: int) -> bool:
    d = (i - j) % L
    return d == 1 or d == L - 1


def _tiny_face(f: FaceInstance) -> Optional[tuple[Edge, ...]]:
    # triangle: no chords exist, only absent boundary edges are usable
    usable = [i for i in range(3) if not f.edge_in_g[i]]
    want = frozenset(i for i in range(3) if f.unhappy[i])
    for size in range(len(usable) + 1):
        for combo in combinations(usable, size):
            odd: set[int] = set()
            for k in combo:
                odd ^= {k, (k + 1) % 3}
            if odd == want:
                return tuple(sorted(edge_key(f.ring[k], f.ring[(k + 1) % 3]) for k in combo))
    return None


def _cycle_construct(ring: Sequence[int], unhappy: Sequence[bool]) -> Optional[tuple[Edge, ...]]:
    """Happy set of chords for a fully present convex cycle, or None.

    Feasible iff the unhappy count is even and either it is zero or at least
    two non-adjacent vertices are happy.  The construction is a star at a
    vertex whose both neighbours are happy when one exists, and a double star
    otherwise.
    """
    L = len(ring)
    r_pos = [i for i in range(L) if unhappy[i]]
    if len(r_pos) % 2:
        return None
    if not r_pos:
        return ()
    if L <= 3:
        return None
    happy_pos = [i for i in range(L) if not unhappy[i]]
    if len(happy_pos) < 2:
        return None
    if len(happy_pos) == 2 and _ring_adjacent(L, happy_pos[0], happy_pos[1]):
        return None

    # star: lowest-id vertex whose both ring neighbours are happy
    centers = [
        i
        for i in happy_pos
        if not unhappy[(i - 1) % L] and not unhappy[(i + 1) % L]
    ]
    if centers:
        c = min(centers, key=lambda i: ring[i])
        return tuple(sorted(edge_key(ring[c], ring[i]) for i in r_pos))

    # double star at two unhappy vertices whose ring successors are happy
    anchors = sorted(
        (i for i in r_pos if not unhappy[(i + 1) % L]),
        key=lambda i: ring[i],
    )
    u, w = anchors[0], anchors[1]
    r_u: list[int] = []
    r_w: list[int] = []
    i = (u + 1) % L
    while i != w:
        if unhappy[i]:
            r_u.append(i)
        i = (i + 1) % L
    i = (w + 1) % L
    while i != u:
        if unhappy[i]:
            r_w.append(i)
        i = (i + 1) % L
    edges = [edge_key(ring[u], ring[i]) for i in r_u]
    edges += [edge_key(ring[w], ring[i]) for i in r_w]
    if len(r_u) % 2 == 0:
        # the split leaves u (and w) at even degree; the chord uw fixes both
        edges.append(edge_key(ring[u], ring[w]))
    return tuple(sorted(edges))


def _path_construct(f: FaceInstance) -> Optional[tuple[Edge, ...]]:
    # exactly one absent boundary edge st: decide its membership, then solve
    # the closed cycle with the endpoint parities toggled accordingly
    k = f.edge_in_g.index(False)
    L = len(f.ring)
    s, t = k, (k + 1) % L
    plain = _cycle_construct(f.ring, f.unhappy)
    if plain is not None:
        return plain
    toggled = list(f.unhappy)
    toggled[s] = not toggled[s]
    toggled[t] = not toggled[t]
    sol = _cycle_construct(f.ring, toggled)
    if sol is None:
        return None
    return tuple(sorted(sol + (edge_key(f.ring[s], f.ring[t]),)))


def _collection_construct(f: FaceInstance) -> Optional[tuple[Edge, ...]]:
    # two or more absent boundary edges: always feasible for even unhappy
    # counts; absorb the unhappiness of one endpoint of each of two absent
    # edges, then fall back to the closed-cycle construction
    L = len(f.ring)
    absent = [i for i in range(L) if not f.edge_in_g[i]]
    k1, k2 = absent[0], absent[1]
    e1 = (k1, (k1 + 1) % L)
    e2 = (k2, (k2 + 1) % L)
    shared = set(e1) & set(e2)
    if shared:
        p = shared.pop()
        v1 = e1[0] if e1[1] == p else e1[1]
        v2 = e2[0] if e2[1] == p else e2[1]
    else:
        v1 = v2 = -1
        for a in e1:
            for b in e2:
                if not _ring_adjacent(L, a, b):
                    v1, v2 = a, b
                    break
            if v1 >= 0:
                break
    assert v1 >= 0 and not _ring_adjacent(L, v1, v2)

    targets = list(f.unhappy)
    extras: list[Edge] = []
    for (ka, kb), vpos in (((e1), v1), ((e2), v2)):
        if targets[vpos]:
            targets[ka] = not targets[ka]
            targets[kb] = not targets[kb]
            extras.append(edge_key(f.ring[ka], f.ring[kb]))
    sol = _cycle_construct(f.ring, targets)
    assert sol is not None, "convex cycle with two non-adjacent happy vertices must solve"
    return tuple(sorted(sol + tuple(extras)))


def face_construct(f: FaceInstance) -> Optional[tuple[Edge, ...]]:
    """A happy set for the face, or None when none exists."""
    if sum(f.unhappy) % 2:
        return None
    if len(f.ring) == 3:
        return _tiny_face(f)
    m = f.edge_in_g.count(False)
    if m == 0:
        return _cycle_construct(f.ring, f.unhappy)
    if m == 1:
        return _path_construct(f)
    return _collection_construct(f)


def face_feasible(f: FaceInstance) -> bool:
    return face_construct(f) is not None
