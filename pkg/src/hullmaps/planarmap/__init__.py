"""Combinatorial planar map engine: half-edge maps, slices, hull walks,
exhaustive enumeration and uniform sampling."""

from .halfedge import HalfEdgeMap, MapDiagnostics, bfs_distances, canonical_key, validate_map
from .slices import HullRecord, SliceView, cut_to_slice, hull_perimeter, leftmost_geodesic, physical_slice, reglue
from .build import build_quadrangulation, contour_from_dyck, labels_from_increments
from .enum_maps import ENUMERATION_CAP, dyck_words, enumerate_pointed_rooted, rooted_triangulations
from .sampler import MeasureConfig, SampleBatch, measure_hulls, sample_quadrangulation

__all__ = [
    "HalfEdgeMap",
    "MapDiagnostics",
    "bfs_distances",
    "canonical_key",
    "validate_map",
    "HullRecord",
    "SliceView",
    "cut_to_slice",
    "hull_perimeter",
    "leftmost_geodesic",
    "physical_slice",
    "reglue",
    "build_quadrangulation",
    "contour_from_dyck",
    "labels_from_increments",
    "ENUMERATION_CAP",
    "dyck_words",
    "enumerate_pointed_rooted",
    "rooted_triangulations",
    "MeasureConfig",
    "SampleBatch",
    "measure_hulls",
    "sample_quadrangulation",
]
