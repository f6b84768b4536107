"""Slices of pointed-rooted maps and the hull-boundary walks.

A k-pointed-rooted map is cut open along the leftmost geodesic from the root
vertex to the origin.  Production cutting is virtual: the geodesic half-edges
are seam-marked, interior seam vertices acquire two sides (left/right of the
cut), and rotation queries are answered through sector-restricted cycles.
Physical surgery (an actual cut-open map with duplicated seam) exists for
cross-validation and the re-gluing round trip.

"Leftmost" is one global convention: entering a vertex along h, candidates
are scanned in clockwise rotation order starting just after opp(h).  The same
convention drives the geodesic, both hull walks and the seam sectors; its
correctness is certified against the exact perimeter tables, not argued from
pictures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .halfedge import HalfEdgeMap, bfs_distances

__all__ = [
    "SliceView",
    "HullRecord",
    "cut_to_slice",
    "hull_perimeter",
    "leftmost_geodesic",
    "physical_slice",
    "reglue",
]


def _cw(m: HalfEdgeMap, h: int) -> int:
    # "clockwise" neighbor of h around its origin vertex: the direction a
    # leftmost scan sweeps.  The stored rotations' chirality is fixed by the
    # tree bijection; this is its empirically certified counterpart (the
    # perimeter tables break immediately under the mirrored choice).
    return m.prv[h]


def leftmost_geodesic(m: HalfEdgeMap, dist: List[int], e1: int) -> List[int]:
    """Half-edges of the leftmost shortest path from origin(e1) through e1.

    At each vertex the next step is the first distance-decreasing half-edge
    met scanning clockwise from the reversal of the entering one.
    """
    if dist[m.origin[e1]] != dist[m.target(e1)] + 1:
        raise ValueError("root half-edge must be distance-decreasing")
    path = [e1]
    h = e1
    while True:
        w = m.target(h)
        dw = dist[w]
        if dw == 0:
            return path
        ref = m.opp[h]
        cand = _cw(m, ref)
        while True:
            if dist[m.target(cand)] == dw - 1:
                break
            cand = _cw(m, cand)
            if cand == ref:
                raise AssertionError("no descending edge found on a geodesic")
        path.append(cand)
        h = cand


@dataclass
class SliceView:
    """Seam-marked view of the k-slice of a pointed-rooted map.

    Interior seam vertices have two copies; a copy is addressed as
    (vertex, side) with side "R" (base side, where hull walks start) or "L"
    (the walks' terminal side).  Each copy's rotation is a clockwise cyclic
    list containing the copy's seam half-edges ``down`` (toward the apex) and
    ``up`` plus its sector.
    """

    m: HalfEdgeMap
    v0: int
    e1: int
    dist: List[int]
    path: List[int]  # half-edges u_0 -> u_1 -> ... -> u_k = v0
    path_vertices: List[int]
    path_index: Dict[int, int]
    sector_cycles: Dict[Tuple[int, str], List[int]] = field(default_factory=dict)
    side_of_he: Dict[int, str] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.path)

    def cycle_at(self, vertex: int, side: Optional[str]) -> List[int]:
        i = self.path_index.get(vertex)
        if i is None or i == 0 or i == self.k:
            m = self.m
            start = m.vertex_he[vertex]
            out = [start]
            h = _cw(m, start)
            while h != start:
                out.append(h)
                h = _cw(m, h)
            return out
        if side is None:
            raise AssertionError("interior seam vertex needs a side")
        return self.sector_cycles[(vertex, side)]

    def scan_from(self, vertex: int, side: Optional[str], ref: int):
        """Candidates strictly after ref, clockwise, within the vertex copy."""
        cycle = self.cycle_at(vertex, side)
        i = cycle.index(ref)
        n = len(cycle)
        for j in range(1, n):
            yield cycle[(i + j) % n]

    def arrival(self, h: int, current_side: Optional[str]) -> Tuple[int, Optional[str]]:
        """Slice vertex copy entered by traversing half-edge h."""
        m = self.m
        w = m.target(h)
        i = self.path_index.get(w)
        if i is None or i == 0 or i == self.k:
            return w, None
        # along the seam the side is preserved
        if h == self.path[i - 1] or h == m.opp[self.path[i]]:
            return w, current_side
        side = self.side_of_he.get(m.opp[h])
        if side is None:
            raise AssertionError("cannot resolve arrival side at a seam vertex")
        return w, side


def cut_to_slice(m: HalfEdgeMap, v0: int, e1: int, dist: Optional[List[int]] = None) -> SliceView:
    """Seam-mark the leftmost geodesic from the root vertex down to v0."""
    if dist is None:
        dist = m.distances if (m.distances is not None and m.v0 == v0) else bfs_distances(m, v0)
    path = leftmost_geodesic(m, dist, e1)
    vertices = [m.origin[e1]] + [m.target(h) for h in path]
    if vertices[-1] != v0:
        raise AssertionError("geodesic did not reach the origin vertex")
    if len(set(vertices)) != len(vertices):
        raise AssertionError("geodesic revisits a vertex")
    index = {v: i for i, v in enumerate(vertices)}
    view = SliceView(m, v0, e1, dist, path, vertices, index)
    k = view.k
    for i in range(1, k):
        v = vertices[i]
        down = path[i]  # v -> u_{i+1}
        up = m.opp[path[i - 1]]  # v -> u_{i-1}
        # left sector: half-edges met scanning clockwise from down until up
        cycle_l = [down]
        h = _cw(m, down)
        while h != up:
            cycle_l.append(h)
            view.side_of_he[h] = "L"
            h = _cw(m, h)
        cycle_l.append(up)
        # right (base) sector: the remaining half-edges; as a sub-cycle of
        # the original rotation its clockwise order is [down, up, rest...]
        rest = []
        h = _cw(m, up)
        while h != down:
            rest.append(h)
            view.side_of_he[h] = "R"
            h = _cw(m, h)
        cycle_r = [down, up] + rest
        view.sector_cycles[(v, "L")] = cycle_l
        view.sector_cycles[(v, "R")] = cycle_r
    return view


@dataclass(frozen=True)
class HullRecord:
    d: int
    perimeter: int
    trace: Optional[Tuple[int, ...]] = None


def hull_perimeter(view: SliceView, d: int, kind: str, collect_trace: bool = False) -> HullRecord:
    """Iterative leftmost hull-boundary walk at distance d in the slice.

    ``kind`` is "quadrangulation" (2-step walk alternating distances d-1 and
    d, perimeter 2p) or "triangulation" (same-distance walk, perimeter p).
    The conventional smallest distances (1 resp. 0) return perimeter 0.
    """
    k = view.k
    if kind.startswith("quad"):
        if d == 1:
            return HullRecord(1, 0, () if collect_trace else None)
        if not (2 <= d <= k - 1):
            raise ValueError("need 2 <= d <= k-1 for quadrangulations")
        return _walk_quad(view, d, collect_trace)
    if kind.startswith("tri"):
        if d == 0:
            return HullRecord(0, 0, () if collect_trace else None)
        if not (1 <= d <= k - 1):
            raise ValueError("need 1 <= d <= k-1 for triangulations")
        return _walk_tri(view, d, collect_trace)
    raise ValueError(f"unknown kind {kind!r}")


def _walk_quad(view: SliceView, d: int, collect_trace: bool) -> HullRecord:
    # chained 2-steps d-1 -> d -> d-1; each scan turns clockwise from the
    # reversal of the previous half-edge (first step: from the base-side
    # boundary edge pointing toward the apex)
    m = view.m
    dist = view.dist
    start_idx = view.k - (d - 1)
    start = view.path_vertices[start_idx]
    end_copy = (start, "L")
    cur, side = start, "R"
    ref = view.path[start_idx]
    visited = {(cur, side)}
    trace: List[int] = []
    steps = 0
    while True:
        steps += 1
        if steps > m.n_edges + 2:
            raise AssertionError("hull walk failed to terminate")
        move = None
        for e in view.scan_from(cur, side, ref):
            if dist[m.target(e)] != d:
                continue
            mid, mid_side = view.arrival(e, side)
            for f in view.scan_from(mid, mid_side, m.opp[e]):
                if dist[m.target(f)] != d - 1:
                    continue
                w, w_side = view.arrival(f, mid_side)
                if (w, w_side) == (cur, side):
                    continue  # the 2-step needs distinct endpoints
                move = (e, f, w, w_side)
                break
            if move:
                break
        if move is None:
            raise AssertionError("no valid 2-step found on hull walk")
        e, f, w, w_side = move
        if collect_trace:
            trace += [e, f]
        if (w, w_side) == end_copy:
            return HullRecord(d, 2 * steps, tuple(trace) if collect_trace else None)
        if (w, w_side) in visited:
            raise AssertionError("hull walk revisited a vertex")
        visited.add((w, w_side))
        cur, side = w, w_side
        ref = m.opp[f]


def _walk_tri(view: SliceView, d: int, collect_trace: bool) -> HullRecord:
    # chained same-distance steps with the same clockwise turn rule
    m = view.m
    dist = view.dist
    start_idx = view.k - d
    start = view.path_vertices[start_idx]
    end_copy = (start, "L")
    cur, side = start, "R"
    ref = view.path[start_idx]
    visited = {(cur, side)}
    trace: List[int] = []
    steps = 0
    while True:
        steps += 1
        if steps > m.n_edges + 2:
            raise AssertionError("hull walk failed to terminate")
        move = None
        for e in view.scan_from(cur, side, ref):
            if dist[m.target(e)] != d:
                continue
            w, w_side = view.arrival(e, side)
            if (w, w_side) == (cur, side):
                continue  # needs a distinct neighbor
            move = (e, w, w_side)
            break
        if move is None:
            raise AssertionError("no valid step found on hull walk")
        e, w, w_side = move
        if collect_trace:
            trace.append(e)
        if (w, w_side) == end_copy:
            return HullRecord(d, steps, tuple(trace) if collect_trace else None)
        if (w, w_side) in visited:
            raise AssertionError("hull walk revisited a vertex")
        visited.add((w, w_side))
        cur, side = w, w_side
        ref = m.opp[e]


# ---------------------------------------------------------------------------
# Physical surgery (tests and the re-gluing round trip)
# ---------------------------------------------------------------------------


def physical_slice(view: SliceView) -> Tuple[HalfEdgeMap, Dict]:
    """Actually cut the map open along the seam.

    Interior seam vertices split into left/right copies, every seam edge is
    duplicated (original ids stay on the right boundary; duplicate pair
    2i/2i+1 beyond the old id range carries the left copy of path edge i,
    pointing down/up), and a new face of degree 2k appears.
    """
    m = view.m
    k = view.k
    n_he = m.n_half_edges
    dup_base = n_he
    new_opp = list(m.opp) + [0] * (2 * k)
    for i in range(k):
        a = dup_base + 2 * i
        new_opp[a] = a + 1
        new_opp[a + 1] = a

    nv = m.n_vertices
    left_id = {}
    for i in range(1, k):
        left_id[view.path_vertices[i]] = nv
        nv += 1

    def left_down(i):
        return dup_base + 2 * i

    def left_up(i):
        return dup_base + 2 * i + 1

    rotations: List[List[int]] = [[] for _ in range(nv)]
    on_path = set(view.path_vertices)
    for v in range(m.n_vertices):
        if v not in on_path:
            rotations[v] = m.vertex_half_edges(v)

    # v1 keeps one copy: the left duplicate of the first path edge slots in
    # right after e1 in clockwise order (they become the two boundary edges)
    v1 = view.path_vertices[0]
    cw_rot = view.cycle_at(v1, None)  # clockwise full rotation
    out = []
    for h in cw_rot:
        out.append(h)
        if h == view.e1:
            out.append(left_down(0))
    rotations[v1] = out[::-1]  # stored rotations are CCW

    v0 = view.path_vertices[k]
    cw_rot = view.cycle_at(v0, None)
    out = []
    for h in cw_rot:
        out.append(h)
        if h == m.opp[view.path[k - 1]]:
            out.append(left_up(k - 1))
    rotations[v0] = out[::-1]

    for i in range(1, k):
        v = view.path_vertices[i]
        # right copy keeps original seam ids; cycles are stored CW -> reverse
        rotations[v] = view.sector_cycles[(v, "R")][::-1]
        lc = view.sector_cycles[(v, "L")]
        # replace seam ids by the left duplicates: down = path[i], up = opp(path[i-1])
        replaced = []
        for h in lc:
            if h == view.path[i]:
                replaced.append(left_down(i))
            elif h == m.opp[view.path[i - 1]]:
                replaced.append(left_up(i - 1))
            else:
                replaced.append(h)
        rotations[left_id[v]] = replaced[::-1]

    cut = HalfEdgeMap.from_rotations(rotations, new_opp)
    cut.v0 = view.v0
    info = {
        "dup_base": dup_base,
        "left_id": left_id,
        "k": k,
        "path": list(view.path),
        "path_vertices": list(view.path_vertices),
        "e1": view.e1,
    }
    return cut, info


def reglue(cut: HalfEdgeMap, info: Dict) -> HalfEdgeMap:
    """Invert physical_slice: identify the duplicated seam with the original."""
    k = info["k"]
    dup_base = info["dup_base"]
    path = info["path"]
    path_vertices = info["path_vertices"]
    left_id = info["left_id"]
    drop = set(range(dup_base, dup_base + 2 * k))
    base_vertices = cut.n_vertices - len(left_id)
    merged: List[List[int]] = []
    for v in range(base_vertices):
        merged.append([h for h in cut.vertex_half_edges(v) if h not in drop])
    for i in range(1, k):
        old = path_vertices[i]
        new = left_id[old]
        extra = [h for h in cut.vertex_half_edges(new) if h not in drop]
        rot = merged[old]
        up_he = cut.opp[path[i - 1]]
        pos = rot.index(up_he)
        # the left sector re-attaches between up and down, i.e. right after
        # the up half-edge in CCW order
        merged[old] = rot[: pos + 1] + extra + rot[pos + 1 :]
    out = HalfEdgeMap.from_rotations(merged, list(cut.opp[:dup_base]))
    out.v0 = cut.v0
    return out
