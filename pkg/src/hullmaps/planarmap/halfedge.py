"""Half-edge (rotation system) representation of rooted planar maps.

A map is stored as flat integer arrays over half-edge ids: ``opp`` (the
fixed-point-free involution pairing the two sides of each edge), ``nxt`` /
``prv`` (rotation: next/previous half-edge counterclockwise around the origin
vertex) and ``origin``.  Faces are orbits of ``h -> nxt[opp[h]]``; the Euler
relation pins planarity.

Maps here are always sphere maps; "outer" faces are not distinguished.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple


@dataclass
class HalfEdgeMap:
    opp: List[int]
    nxt: List[int]
    prv: List[int]
    origin: List[int]
    vertex_he: List[int]  # one incident half-edge per vertex (-1: isolated)
    distances: Optional[List[int]] = None  # per-vertex labels from a marked origin
    v0: Optional[int] = None
    root_he: Optional[int] = None

    @staticmethod
    def from_rotations(rotations: Sequence[Sequence[int]], opp: Sequence[int]) -> "HalfEdgeMap":
        """Build from per-vertex CCW half-edge lists plus the involution."""
        n_he = len(opp)
        nxt = [-1] * n_he
        prv = [-1] * n_he
        origin = [-1] * n_he
        vertex_he = []
        for v, cycle in enumerate(rotations):
            vertex_he.append(cycle[0] if cycle else -1)
            for i, h in enumerate(cycle):
                nh = cycle[(i + 1) % len(cycle)]
                nxt[h] = nh
                prv[nh] = h
                origin[h] = v
        return HalfEdgeMap(list(opp), nxt, prv, origin, vertex_he)

    # -- elementary queries ---------------------------------------------------

    @property
    def n_half_edges(self) -> int:
        return len(self.opp)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_he)

    @property
    def n_edges(self) -> int:
        return len(self.opp) // 2

    def target(self, h: int) -> int:
        return self.origin[self.opp[h]]

    def degree(self, v: int) -> int:
        start = self.vertex_he[v]
        if start < 0:
            return 0
        d = 1
        h = self.nxt[start]
        while h != start:
            d += 1
            h = self.nxt[h]
        return d

    def vertex_half_edges(self, v: int) -> List[int]:
        start = self.vertex_he[v]
        if start < 0:
            return []
        out = [start]
        h = self.nxt[start]
        while h != start:
            out.append(h)
            h = self.nxt[h]
        return out

    def face_of(self, h: int) -> List[int]:
        """Half-edges of the face reached by h -> nxt[opp[h]] until closure."""
        out = [h]
        cur = self.nxt[self.opp[h]]
        while cur != h:
            out.append(cur)
            cur = self.nxt[self.opp[cur]]
        return out

    def faces(self) -> List[List[int]]:
        seen = [False] * self.n_half_edges
        out = []
        for h in range(self.n_half_edges):
            if seen[h]:
                continue
            face = self.face_of(h)
            for x in face:
                seen[x] = True
            out.append(face)
        return out

    def n_faces(self) -> int:
        return len(self.faces())


@dataclass(frozen=True)
class MapDiagnostics:
    ok: bool
    first_violation: Optional[str] = None

    def __bool__(self):
        return self.ok


def validate_map(
    m: HalfEdgeMap,
    face_degree: Optional[int] = None,
    v0: Optional[int] = None,
    root_he: Optional[int] = None,
) -> MapDiagnostics:
    """Structural diagnostics: involution, rotation consistency, planarity,
    face-degree uniformity, and the root-edge distance condition."""
    n = m.n_half_edges
    if n == 0 or n % 2:
        return MapDiagnostics(False, "half-edge count must be positive and even")
    for h in range(n):
        if not (0 <= m.opp[h] < n) or m.opp[m.opp[h]] != h:
            return MapDiagnostics(False, f"opp is not an involution at {h}")
        if m.opp[h] == h:
            return MapDiagnostics(False, f"half-edge {h} is its own opposite")
    for h in range(n):
        if m.prv[m.nxt[h]] != h:
            return MapDiagnostics(False, f"nxt/prv inconsistent at {h}")
        if m.origin[m.nxt[h]] != m.origin[h]:
            return MapDiagnostics(False, f"rotation leaves its vertex at {h}")
    # every half-edge reachable from its vertex representative
    seen = [False] * n
    for v in range(m.n_vertices):
        for h in m.vertex_half_edges(v):
            if m.origin[h] != v:
                return MapDiagnostics(False, f"origin mismatch at vertex {v}")
            if seen[h]:
                return MapDiagnostics(False, f"half-edge {h} in two rotations")
            seen[h] = True
    if not all(seen):
        return MapDiagnostics(False, "half-edge missing from all rotations")
    # connectivity
    visited = [False] * m.n_vertices
    stack = [m.origin[0]]
    visited[m.origin[0]] = True
    count = 1
    while stack:
        v = stack.pop()
        for h in m.vertex_half_edges(v):
            w = m.target(h)
            if not visited[w]:
                visited[w] = True
                count += 1
                stack.append(w)
    if count != m.n_vertices:
        return MapDiagnostics(False, "map is disconnected")
    # planarity via Euler
    V, E, F = m.n_vertices, m.n_edges, m.n_faces()
    if V - E + F != 2:
        return MapDiagnostics(False, f"Euler relation fails: V-E+F = {V - E + F}")
    if face_degree is not None:
        for face in m.faces():
            if len(face) != face_degree:
                return MapDiagnostics(False, f"face of degree {len(face)} != {face_degree}")
    if v0 is not None and root_he is not None:
        dist = bfs_distances(m, v0)
        du = dist[m.origin[root_he]]
        dv = dist[m.target(root_he)]
        if du != dv + 1:
            return MapDiagnostics(False, "root half-edge is not distance-decreasing")
    return MapDiagnostics(True)


def bfs_distances(m: HalfEdgeMap, v0: int) -> List[int]:
    """Exact graph distances from v0 (raises on disconnected input)."""
    dist = [-1] * m.n_vertices
    dist[v0] = 0
    queue = deque([v0])
    while queue:
        v = queue.popleft()
        dv = dist[v]
        h = m.vertex_he[v]
        if h < 0:
            continue
        start = h
        while True:
            w = m.target(h)
            if dist[w] < 0:
                dist[w] = dv + 1
                queue.append(w)
            h = m.nxt[h]
            if h == start:
                break
    if any(d < 0 for d in dist):
        raise ValueError("disconnected map")
    return dist


def canonical_key(m: HalfEdgeMap, root_he: int, v0: Optional[int] = None) -> Tuple:
    """Canonical form of a rooted map (optionally pointed), for hashing.

    Breadth-first relabeling of half-edges starting from the root: rooted
    maps have no automorphisms, so two rooted maps are isomorphic iff their
    canonical forms coincide.
    """
    n = m.n_half_edges
    he_label = [-1] * n
    order: List[int] = []

    def visit(h: int):
        if he_label[h] < 0:
            he_label[h] = len(order)
            order.append(h)

    visit(root_he)
    i = 0
    while i < len(order):
        h = order[i]
        i += 1
        visit(m.opp[h])
        visit(m.nxt[h])
    sig_opp = tuple(he_label[m.opp[h]] for h in order)
    sig_nxt = tuple(he_label[m.nxt[h]] for h in order)
    if v0 is None:
        return (sig_opp, sig_nxt)
    # identify v0 by the smallest relabeled half-edge rooted at it
    best = min(he_label[h] for h in m.vertex_half_edges(v0))
    return (sig_opp, sig_nxt, best)
