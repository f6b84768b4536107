"""Pointed quadrangulations from labeled plane trees.

A labeled plane tree with N edges (root label 0, increments in {-1, 0, +1}
along edges) maps bijectively to a pointed quadrangulation with N faces
carrying a distance-decreasing oriented root edge: each contour corner emits
an arc to the next corner of label one less (cyclically), corners of minimal
label emit to an added origin vertex, and tree edges are discarded.  Graph
distances from the origin come for free as label - min + 1.

The construction works from the contour function f(p) (vertex visited at
time p) and per-vertex labels, so the exhaustive enumerator and the random
sampler share it.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from .halfedge import HalfEdgeMap

__all__ = ["build_quadrangulation", "build_quadrangulation_fast", "contour_from_dyck"]


def contour_from_dyck(steps: Sequence[int]) -> Tuple[List[int], List[int], int]:
    """Contour function and parent/edge structure of a plane tree.

    ``steps`` is a Dyck word (+1 open edge, -1 close).  Returns
    (pos_vertex, edge_of_open_position, n_vertices): ``pos_vertex[p]`` is the
    vertex visited at time p; opening positions are assigned edge ids in
    opening order (edge i connects vertex i+1 to its parent).
    """
    two_n = len(steps)
    pos_vertex = [0] * two_n
    edge_at = [-1] * two_n
    stack = [0]
    n_vertices = 1
    cur = 0
    edges = 0
    for p, s in enumerate(steps):
        pos_vertex[p] = cur
        if s == 1:
            stack.append(cur)
            cur = n_vertices
            edge_at[p] = edges
            edges += 1
            n_vertices += 1
        else:
            cur = stack.pop()
    return pos_vertex, edge_at, n_vertices


def labels_from_increments(
    steps: Sequence[int], pos_vertex: Sequence[int], n_vertices: int, increments: Sequence[int]
) -> List[int]:
    """Vertex labels from per-edge increments (edge ids in opening order)."""
    labels = [0] * n_vertices
    edges = 0
    for p, s in enumerate(steps):
        if s == 1:
            parent = pos_vertex[p]
            child = edges + 1
            labels[child] = labels[parent] + increments[edges]
            edges += 1
    return labels


def build_quadrangulation(
    pos_vertex: Sequence[int],
    labels: Sequence[int],
    n_vertices: int,
) -> HalfEdgeMap:
    """Assemble the pointed quadrangulation of a labeled plane tree.

    Arc p (one per contour position) becomes half-edges 2p (at the corner)
    and 2p+1 (at its successor corner or at the origin vertex).  The returned
    map carries ``distances`` (from the added origin vertex, id n_vertices),
    ``v0`` and ``root_he`` (the arc of the root corner, distance-decreasing).
    """
    two_n = len(pos_vertex)
    pos_label = [labels[pos_vertex[p]] for p in range(two_n)]
    min_label = min(labels)

    # successor corner: next position (cyclic) with label one less; labels of
    # consecutive corners differ by at most 1, so the next strictly-smaller
    # element has exactly label-1
    succ = [-1] * two_n
    stack: List[int] = []
    for p in list(range(two_n)) * 2:
        lp = pos_label[p]
        while stack and pos_label[stack[-1]] > lp:
            q = stack.pop()
            if succ[q] < 0:
                succ[q] = p
        stack.append(p)

    v0 = n_vertices
    # arc-end bookkeeping: ends[q] collects (sort key, half-edge) at corner q,
    # keyed by the cyclic backward distance to the arc's source corner
    in_ends: List[List[Tuple[int, int]]] = [[] for _ in range(two_n)]
    for p in range(two_n):
        if pos_label[p] == min_label:
            continue
        q = succ[p]
        in_ends[q].append(((q - p) % two_n, 2 * p + 1))

    # Within a corner the rotation sweeps from the incoming contour side to
    # the outgoing one: incoming arc ends appear by increasing backward
    # distance of their source, and the corner's own outgoing arc comes last.
    # Around the origin vertex the spokes appear in reverse contour order
    # (the arcs live in the disk complementary to the tree contour).
    rotations: List[List[int]] = [[] for _ in range(n_vertices + 1)]
    for p in range(two_n):
        ends = sorted(in_ends[p])
        ends.append((two_n, 2 * p))
        rotations[pos_vertex[p]].extend(h for _, h in ends)
    for p in range(two_n - 1, -1, -1):
        if pos_label[p] == min_label:
            rotations[v0].append(2 * p + 1)

    opp = [0] * (2 * two_n)
    for p in range(two_n):
        opp[2 * p] = 2 * p + 1
        opp[2 * p + 1] = 2 * p

    m = HalfEdgeMap.from_rotations(rotations, opp)
    m.distances = [labels[v] - min_label + 1 for v in range(n_vertices)] + [0]
    m.v0 = v0
    m.root_he = 0
    return m


def build_quadrangulation_fast(pos_vertex: np.ndarray, labels: np.ndarray, n_vertices: int) -> HalfEdgeMap:
    """Vectorized twin of :func:`build_quadrangulation` for large trees.

    Identical output (asserted in tests); the successor search, the arc-end
    ordering and the rotation assembly all run as array operations.
    """
    two_n = len(pos_vertex)
    pos_vertex = np.asarray(pos_vertex, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    lab_pos = labels[pos_vertex]
    min_label = int(labels.min())
    v0 = n_vertices

    # successor corners, grouped by label value
    succ = np.full(two_n, -1, dtype=np.int64)
    order = np.argsort(lab_pos, kind="stable")
    sorted_labs = lab_pos[order]
    distinct = np.unique(sorted_labs)
    groups = {}
    for lab in distinct:
        lo = np.searchsorted(sorted_labs, lab, side="left")
        hi = np.searchsorted(sorted_labs, lab, side="right")
        groups[int(lab)] = order[lo:hi]  # positions in increasing order
    for lab in distinct:
        lab = int(lab)
        if lab == min_label:
            continue
        P = groups[lab]
        A = groups[lab - 1]
        idx = np.searchsorted(A, P, side="left")
        idx[idx == len(A)] = 0
        succ[P] = A[idx]

    non_min = succ >= 0
    srcs = np.nonzero(non_min)[0]
    targets = succ[srcs]
    back_key = (targets - srcs) % two_n  # cyclic backward distance

    # global ordering of arc ends: by (vertex, corner, within-corner key);
    # out-ends carry the maximal key 2N
    n_in = len(srcs)
    end_he = np.empty(n_in + two_n, dtype=np.int64)
    end_vertex = np.empty(n_in + two_n, dtype=np.int64)
    end_corner = np.empty(n_in + two_n, dtype=np.int64)
    end_key = np.empty(n_in + two_n, dtype=np.int64)
    end_he[:n_in] = 2 * srcs + 1
    end_corner[:n_in] = targets
    end_key[:n_in] = back_key
    end_he[n_in:] = 2 * np.arange(two_n)
    end_corner[n_in:] = np.arange(two_n)
    end_key[n_in:] = two_n
    end_vertex[:] = pos_vertex[end_corner]

    composite = (end_vertex * two_n + end_corner) * (two_n + 1) + end_key
    seq = end_he[np.argsort(composite, kind="stable")]

    # append the origin star: spokes from minimal-label corners, reversed
    min_pos = groups[min_label]
    star = (2 * min_pos + 1)[::-1]
    seq = np.concatenate([seq, star])

    # group boundaries per vertex (tree vertices by id, then the origin)
    deg = np.zeros(n_vertices + 1, dtype=np.int64)
    np.add.at(deg, end_vertex, 1)
    deg[v0] = len(star)
    offsets = np.concatenate([[0], np.cumsum(deg)])

    n_he = 2 * two_n
    nxt = np.empty(n_he, dtype=np.int64)
    prv = np.empty(n_he, dtype=np.int64)
    origin = np.empty(n_he, dtype=np.int64)
    shifted = np.empty(len(seq), dtype=np.int64)
    shifted[:-1] = seq[1:]
    shifted[offsets[1:] - 1] = seq[offsets[:-1]]
    nxt[seq] = shifted
    prv[shifted] = seq
    origin[seq] = np.repeat(np.arange(n_vertices + 1), deg)

    opp = np.empty(n_he, dtype=np.int64)
    opp[0::2] = np.arange(1, n_he, 2)
    opp[1::2] = np.arange(0, n_he, 2)

    vertex_he = seq[offsets[:-1]]
    m = HalfEdgeMap(
        opp.tolist(), nxt.tolist(), prv.tolist(), origin.tolist(), vertex_he.tolist()
    )
    m.distances = (labels - min_label + 1).tolist() + [0]
    m.v0 = v0
    m.root_he = 0
    return m
