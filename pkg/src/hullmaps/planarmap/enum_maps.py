"""Exhaustive enumeration of small pointed-rooted maps.

Quadrangulations stream from the labeled-tree bijection (every labeled plane
tree with N edges gives exactly one N-face map with a distance-decreasing
root edge).  Triangulations are built by isomorphism-free rooted generation:
triangles are glued side by side, always resolving the smallest unglued side,
either to side 0 of a fresh triangle or to an existing unglued side; sphere
maps are kept and every rooted triangulation arises exactly once.  Pointing
then runs over all vertices for which the root is distance-decreasing.
"""

from __future__ import annotations

from itertools import product
from typing import Iterator, List, Tuple

from .build import build_quadrangulation, contour_from_dyck, labels_from_increments
from .halfedge import HalfEdgeMap, bfs_distances

__all__ = ["dyck_words", "enumerate_pointed_rooted", "rooted_triangulations", "ENUMERATION_CAP"]

ENUMERATION_CAP = {"quadrangulation": 6, "triangulation": 8}


def dyck_words(n: int) -> Iterator[Tuple[int, ...]]:
    """All balanced +-1 sequences of length 2n (plane trees with n edges)."""
    seq: List[int] = []

    def rec(ups: int, downs: int):
        if ups == 0 and downs == 0:
            yield tuple(seq)
            return
        if ups > 0:
            seq.append(1)
            yield from rec(ups - 1, downs + 1)
            seq.pop()
        if downs > 0:
            seq.append(-1)
            yield from rec(ups, downs - 1)
            seq.pop()

    yield from rec(n, 0)


def _pointed_quadrangulations(n_faces: int) -> Iterator[Tuple[HalfEdgeMap, int]]:
    for word in dyck_words(n_faces):
        pos_vertex, _, nv = contour_from_dyck(word)
        for inc in product((-1, 0, 1), repeat=n_faces):
            labels = labels_from_increments(word, pos_vertex, nv, inc)
            m = build_quadrangulation(pos_vertex, labels, nv)
            k = m.distances[m.origin[m.root_he]]
            yield m, k


def rooted_triangulations(n_faces: int) -> Iterator[List[int]]:
    """Gluings (side -> side involution) of all rooted sphere triangulations.

    Sides of triangle f are 3f, 3f+1, 3f+2, directed along the face boundary;
    the root is side 0 of triangle 0.
    """
    if n_faces % 2:
        return
    total = 3 * n_faces
    glue = [-1] * total

    def first_unglued(used: int):
        for a in range(3 * used):
            if glue[a] < 0:
                return a
        return None

    def genus_zero() -> bool:
        # vertices are orbits of sigma = alpha . phi^{-1}
        seen = [False] * total
        v = 0
        for h in range(total):
            if seen[h]:
                continue
            v += 1
            cur = h
            while not seen[cur]:
                seen[cur] = True
                f, s = divmod(cur, 3)
                prev_side = 3 * f + (s - 1) % 3
                cur = glue[prev_side]
        return v - total // 2 + n_faces == 2

    def rec(used: int):
        a = first_unglued(used)
        if a is None:
            if used == n_faces and genus_zero():
                yield list(glue)
            return
        if used < n_faces:
            b = 3 * used
            glue[a], glue[b] = b, a
            yield from rec(used + 1)
            glue[a], glue[b] = -1, -1
        for b in range(a + 1, 3 * used):
            if glue[b] < 0:
                glue[a], glue[b] = b, a
                yield from rec(used)
                glue[a], glue[b] = -1, -1

    yield from rec(1)


def _map_from_gluing(glue: List[int]) -> HalfEdgeMap:
    total = len(glue)
    # sigma(h) = alpha(phi^{-1}(h)): next half-edge around the origin vertex
    sigma = [0] * total
    for h in range(total):
        f, s = divmod(h, 3)
        sigma[h] = glue[3 * f + (s - 1) % 3]
    # build CCW rotations from sigma orbits
    seen = [False] * total
    rotations: List[List[int]] = []
    for h in range(total):
        if seen[h]:
            continue
        cyc = []
        cur = h
        while not seen[cur]:
            seen[cur] = True
            cyc.append(cur)
            cur = sigma[cur]
        rotations.append(cyc)
    return HalfEdgeMap.from_rotations(rotations, glue)


def _pointed_triangulations(n_faces: int) -> Iterator[Tuple[HalfEdgeMap, int]]:
    for glue in rooted_triangulations(n_faces):
        base = _map_from_gluing(glue)
        for v0 in range(base.n_vertices):
            dist = bfs_distances(base, v0)
            if dist[base.origin[0]] != dist[base.target(0)] + 1:
                continue
            m = HalfEdgeMap(
                list(base.opp), list(base.nxt), list(base.prv),
                list(base.origin), list(base.vertex_he),
            )
            m.distances = dist
            m.v0 = v0
            m.root_he = 0
            yield m, dist[base.origin[0]]


def enumerate_pointed_rooted(family_kind: str, n_faces: int) -> Iterator[Tuple[HalfEdgeMap, int]]:
    """Every k-pointed-rooted map with ``n_faces`` faces, exactly once.

    ``family_kind`` is "quadrangulation" or "triangulation"; each map comes
    with ``v0``, ``root_he`` and ``distances`` filled in.
    """
    if family_kind.startswith("quad"):
        cap = ENUMERATION_CAP["quadrangulation"]
        if n_faces > cap:
            raise ValueError(f"enumeration cap is {cap} quadrangular faces")
        yield from _pointed_quadrangulations(n_faces)
    elif family_kind.startswith("tri"):
        cap = ENUMERATION_CAP["triangulation"]
        if n_faces > cap:
            raise ValueError(f"enumeration cap is {cap} triangular faces")
        yield from _pointed_triangulations(n_faces)
    else:
        raise ValueError(f"unknown family {family_kind!r}")
