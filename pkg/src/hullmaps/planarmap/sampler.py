"""Uniform sampling of large pointed quadrangulations and hull measurement.

A uniform labeled plane tree (uniform Dyck word by the cycle lemma, iid
increments in {-1, 0, +1}) maps through the tree bijection to a uniform
pointed quadrangulation with a distance-decreasing root edge.  Distances from
the origin come with the construction (validated against BFS in the tests).

``measure_hulls`` drives the Monte Carlo study: per sample it re-points the
map at a far uniformly-random vertex (distance at least ``conditioning_factor
* max(d)``), picks the leftmost distance-decreasing root edge there, cuts,
and records hull perimeters for all requested distances on the same map.
Worker RNG streams derive from (seed, sample index) through numpy's
SeedSequence, so batches are reproducible bit for bit at any thread count.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .build import build_quadrangulation_fast
from .halfedge import HalfEdgeMap
from .slices import cut_to_slice, hull_perimeter

__all__ = ["sample_quadrangulation", "measure_hulls", "MeasureConfig", "SampleBatch"]


def _uniform_dyck(rng: np.random.Generator, n: int) -> np.ndarray:
    steps = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    rng.shuffle(steps)
    walk = np.cumsum(steps)
    pivot = int(np.argmin(walk)) + 1  # cycle lemma: rotate past the minimum
    return np.concatenate([steps[pivot:], steps[:pivot]])


def _tree_arrays(steps: np.ndarray, increments: np.ndarray):
    """Contour vertex sequence and vertex labels for a labeled plane tree."""
    two_n = len(steps)
    pos_vertex = np.empty(two_n, dtype=np.int64)
    labels = np.empty(two_n // 2 + 1, dtype=np.int64)
    labels[0] = 0
    stack = [0]
    cur = 0
    edges = 0
    steps_list = steps.tolist()
    inc_list = increments.tolist()
    for p, s in enumerate(steps_list):
        pos_vertex[p] = cur
        if s == 1:
            stack.append(cur)
            child = edges + 1
            labels[child] = labels[cur] + inc_list[edges]
            cur = child
            edges += 1
        else:
            cur = stack.pop()
    return pos_vertex, labels


def sample_quadrangulation(n_faces: int, seed) -> HalfEdgeMap:
    """Uniform pointed quadrangulation with ``n_faces`` faces.

    ``seed`` may be an int or any numpy SeedSequence-compatible entropy.
    Deterministic: a fixed seed yields an identical map.  The returned map
    carries ``v0``, ``distances`` and the bijection's root edge.
    """
    if n_faces < 1:
        raise ValueError("need at least one face")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    steps = _uniform_dyck(rng, n_faces)
    increments = rng.integers(-1, 2, size=n_faces)
    pos_vertex, labels = _tree_arrays(steps, increments)
    return build_quadrangulation_fast(pos_vertex, labels, n_faces + 1)


def leftmost_decreasing_root(m: HalfEdgeMap, v1: int) -> int:
    """First distance-decreasing half-edge at v1, clockwise from its anchor."""
    dist = m.distances
    want = dist[v1] - 1
    start = m.vertex_he[v1]
    h = start
    while True:
        if dist[m.target(h)] == want:
            return h
        h = m.prv[h]
        if h == start:
            raise ValueError("vertex has no distance-decreasing edge")


@dataclass(frozen=True)
class MeasureConfig:
    n_faces: int
    d_list: Tuple[int, ...]
    samples: int
    seed: int = 20160614
    conditioning_factor: int = 5
    threads: int = 1
    family: str = "quadrangulation"

    def min_target_distance(self) -> int:
        return self.conditioning_factor * max(self.d_list)


@dataclass
class SampleBatch:
    config: MeasureConfig
    records: List[Tuple[int, Tuple[Tuple[int, int], ...]]] = field(default_factory=list)

    def perimeters(self, d: int) -> List[int]:
        out = []
        for _, hulls in self.records:
            for dd, L in hulls:
                if dd == d:
                    out.append(L)
        return out

    def rescaled(self, d: int) -> List[float]:
        return [L / (d * d) for L in self.perimeters(d)]

    def to_jsonl(self) -> str:
        header = {
            "family": self.config.family,
            "n_faces": self.config.n_faces,
            "d_list": list(self.config.d_list),
            "samples": self.config.samples,
            "seed": self.config.seed,
            "conditioning_factor": self.config.conditioning_factor,
        }
        lines = [json.dumps({"config": header}, sort_keys=True)]
        for k, hulls in self.records:
            lines.append(
                json.dumps({"k": k, "hulls": [{"d": d, "L": L} for d, L in hulls]}, sort_keys=True)
            )
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text: str) -> "SampleBatch":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = json.loads(lines[0])["config"]
        config = MeasureConfig(
            n_faces=head["n_faces"],
            d_list=tuple(head["d_list"]),
            samples=head["samples"],
            seed=head["seed"],
            conditioning_factor=head["conditioning_factor"],
            family=head["family"],
        )
        batch = SampleBatch(config)
        for ln in lines[1:]:
            row = json.loads(ln)
            batch.records.append((row["k"], tuple((h["d"], h["L"]) for h in row["hulls"])))
        return batch


def _one_sample(config: MeasureConfig, index: int) -> Tuple[Tuple[int, Tuple[Tuple[int, int], ...]], int]:
    """Measure one conditioned sample; returns (record, attempts used)."""
    threshold = config.min_target_distance()
    attempts = 0
    while True:
        attempts += 1
        if attempts > 200:
            raise RuntimeError("conditioning failed 200 times in a row: n_faces too small")
        m = sample_quadrangulation(config.n_faces, (config.seed, index, attempts))
        rng = np.random.default_rng(np.random.SeedSequence((config.seed, index, attempts, 1)))
        dist = np.asarray(m.distances)
        candidates = np.nonzero(dist >= threshold)[0]
        if len(candidates) == 0:
            continue
        v1 = int(candidates[rng.integers(0, len(candidates))])
        e1 = leftmost_decreasing_root(m, v1)
        view = cut_to_slice(m, m.v0, e1)
        hulls = tuple((d, hull_perimeter(view, d, "quadrangulation").perimeter) for d in config.d_list)
        return (int(dist[v1]), hulls), attempts


def _worker(args):
    config, indices = args
    out = []
    attempts = 0
    for i in indices:
        record, a = _one_sample(config, i)
        attempts += a
        out.append((i, record))
    return out, attempts


def measure_hulls(config: MeasureConfig, progress=None) -> SampleBatch:
    """Run the conditioned hull-measurement study described by ``config``.

    Deterministic given (seed, config) regardless of thread count; raises if
    the conditioning success rate drops below 1%.
    """
    if config.family != "quadrangulation":
        raise ValueError("sampling is implemented for quadrangulations only")
    if not config.d_list or min(config.d_list) < 1:
        raise ValueError("d_list must contain positive distances")
    indices = list(range(config.samples))
    results: Dict[int, Tuple[int, Tuple[Tuple[int, int], ...]]] = {}
    total_attempts = 0
    threads = max(1, config.threads)
    if threads == 1:
        for i in indices:
            record, a = _one_sample(config, i)
            total_attempts += a
            results[i] = record
            if progress and (i + 1) % 50 == 0:
                progress(i + 1)
    else:
        import multiprocessing as mp

        chunks = [(config, indices[j::threads]) for j in range(threads)]
        with mp.Pool(threads) as pool:
            for out, attempts in pool.map(_worker, chunks):
                total_attempts += attempts
                for i, record in out:
                    results[i] = record
    if total_attempts > 0 and config.samples / total_attempts < 0.01:
        raise RuntimeError("conditioning success rate below 1%: n_faces too small for d_list")
    batch = SampleBatch(config)
    batch.records = [results[i] for i in indices]
    return batch
