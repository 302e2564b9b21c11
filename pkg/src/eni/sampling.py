"""Uniform free-space sampling via area-constrained conforming Delaunay meshes.

The free space is meshed by a conforming constrained Delaunay triangulation:
boundary and obstacle edges are split until every piece appears as a Delaunay
edge, then oversized interior triangles are refined by inserting circumcenters
(falling back to centroids near constraints) until every interior triangle
respects the max-area bound. Sample points are the mesh vertices strictly
interior to the free space; vertices on boundary or obstacle edges are
excluded so every sample has a well-defined visibility fan.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay, cKDTree

from .errors import EmptyFreeSpace, InvalidGeometry, InvalidInput, SamplingFailed
from .geometry import (
    Environment,
    VisibilityPolygon,
    compute_visibility_polygon,
    points_in_free_space,
    _min_dist_points_segments,
    _points_in_polygon,
)

#: samples must keep at least this clearance from any edge
INTERIOR_CLEARANCE = 1e-6

_MAX_REFINE_ROUNDS = 400


@dataclass
class SampleSet:
    """Uniformly sampled free-space points with their visibility polygons."""

    points: np.ndarray  # (n, 2)
    vis_polygons: list[VisibilityPolygon] = field(repr=False)
    max_area_used: float = 0.0

    def __post_init__(self):
        if self.points.shape[0] != len(self.vis_polygons):
            raise InvalidInput("points and vis_polygons must have equal length")

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass
class _Mesh:
    points: np.ndarray          # (N, 2) all mesh vertices
    triangles: np.ndarray       # (T, 3) vertex indices of interior triangles
    on_constraint: np.ndarray   # (N,) True for vertices on boundary/obstacle edges


def triangulate_free_space(env: Environment, max_area: float) -> np.ndarray:
    """Triangles covering the free space, each with area <= max_area.

    Returns an (T, 3, 2) array of triangle vertex coordinates. The union of
    the triangles equals the free space up to float tolerance because every
    boundary/obstacle edge is represented in the mesh.
    """
    if max_area <= 0.0:
        raise InvalidInput("max_area must be positive")
    if env.free_area <= 0.0:
        raise EmptyFreeSpace("environment has no free space to triangulate")
    mesh = _refined_mesh(env, max_area)
    return mesh.points[mesh.triangles]


def sample_points(env: Environment, target_count: int) -> SampleSet:
    """Interior mesh vertices at a density auto-tuned to ``target_count``.

    The max-area bound is bisected (in log space, within
    [free_area / 1e5, free_area]) until the interior vertex count lands in
    [0.9 * target, 1.1 * target]. Deterministic: equal inputs give equal
    sample sets.
    """
    if target_count < 10:
        raise InvalidInput("target_count must be at least 10")
    lo = env.free_area / 1e5
    hi = env.free_area
    low_count = target_count * 0.9
    high_count = target_count * 1.1

    # empirically count ~= free_area / max_area; start near the expected answer
    guess = min(max(env.free_area / max(target_count, 1), lo), hi)
    chosen = None
    best_area = guess
    achieved = -1
    for step in range(30):
        trial = guess if step == 0 else float(np.sqrt(lo * hi))
        mesh = _refined_mesh(env, trial)
        pts = _interior_samples(env, mesh)
        achieved = pts.shape[0]
        if low_count <= achieved <= high_count:
            chosen = pts
            best_area = trial
            break
        if achieved > high_count:
            lo = trial  # too dense: grow the area bound
        else:
            hi = trial
    if chosen is None:
        raise SamplingFailed(
            f"could not reach {target_count} samples in 30 bisection steps "
            f"(achieved {achieved})",
            achieved_count=achieved,
        )

    vis = [compute_visibility_polygon(env, p) for p in chosen]
    chosen.setflags(write=False)
    return SampleSet(points=chosen, vis_polygons=vis, max_area_used=best_area)


def _interior_samples(env: Environment, mesh: _Mesh) -> np.ndarray:
    """Mesh vertices strictly inside free space, in canonical (x, y) order."""
    pts = mesh.points[~mesh.on_constraint]
    if pts.shape[0]:
        pts = pts[points_in_free_space(env, pts, clearance=INTERIOR_CLEARANCE)]
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    return np.ascontiguousarray(pts[order])


# ---------------------------------------------------------------------------
# Mesh construction
# ---------------------------------------------------------------------------


def _pslg(env: Environment):
    """Initial points and constraint segments from the environment outline."""
    points: list[np.ndarray] = []
    segments: list[tuple[int, int]] = []
    for poly in [env.boundary, *env.obstacles]:
        base = len(points)
        n = len(poly)
        points.extend(poly.vertices)
        segments.extend(((base + i, base + (i + 1) % n) for i in range(n)))
    return np.asarray(points, dtype=float), segments


def _refined_mesh(env: Environment, max_area: float) -> _Mesh:
    points, segments = _pslg(env)
    on_constraint = [True] * len(points)
    r_min = 0.45 * float(np.sqrt(max_area))

    for _ in range(_MAX_REFINE_ROUNDS):
        tri = Delaunay(points)
        edge_set = _edge_set(tri.simplices)

        missing = [s for s in segments if (min(s), max(s)) not in edge_set]
        if missing:
            points, segments, on_constraint = _split_segments(
                points, segments, on_constraint, missing
            )
            continue

        centroids = points[tri.simplices].mean(axis=1)
        interior = _centroids_in_free_space(env, centroids)
        tris = tri.simplices[interior]
        areas = _tri_areas(points, tris)
        big = areas > max_area
        if not np.any(big):
            return _Mesh(
                points=points,
                triangles=tris,
                on_constraint=np.asarray(on_constraint, dtype=bool),
            )

        new_pts = _refinement_points(env, points, tris[big], areas[big], r_min)
        if new_pts.shape[0] == 0:
            # force progress: split the single largest offender at its centroid
            worst = tris[big][np.argmax(areas[big])]
            new_pts = points[worst].mean(axis=0, keepdims=True)
        points = np.concatenate([points, new_pts], axis=0)
        on_constraint.extend([False] * new_pts.shape[0])

    raise InvalidGeometry("mesh refinement failed to converge")


def _edge_set(simplices: np.ndarray) -> set[tuple[int, int]]:
    e = np.concatenate([simplices[:, [0, 1]], simplices[:, [1, 2]], simplices[:, [2, 0]]])
    e.sort(axis=1)
    return set(map(tuple, e.tolist()))


def _split_segments(points, segments, on_constraint, missing):
    pts = list(points)
    missing_set = set(missing)
    out_segments = []
    for seg in segments:
        if seg in missing_set:
            a, b = seg
            mid = 0.5 * (points[a] + points[b])
            pts.append(mid)
            on_constraint.append(True)
            k = len(pts) - 1
            out_segments.extend([(a, k), (k, b)])
        else:
            out_segments.append(seg)
    return np.asarray(pts, dtype=float), out_segments, on_constraint


def _centroids_in_free_space(env: Environment, centroids: np.ndarray) -> np.ndarray:
    """Containment-only classification (no clearance shell): triangles touch edges."""
    inside = _points_in_polygon(centroids, env.boundary.vertices)
    for ob in env.obstacles:
        inside &= ~_points_in_polygon(centroids, ob.vertices)
    return inside


def _tri_areas(points: np.ndarray, tris: np.ndarray) -> np.ndarray:
    a = points[tris[:, 0]]
    b = points[tris[:, 1]]
    c = points[tris[:, 2]]
    return 0.5 * np.abs(
        (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1])
        - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0])
    )


def _circumcenters(points: np.ndarray, tris: np.ndarray) -> np.ndarray:
    a = points[tris[:, 0]]
    b = points[tris[:, 1]]
    c = points[tris[:, 2]]
    ab = b - a
    ac = c - a
    d = 2.0 * (ab[:, 0] * ac[:, 1] - ab[:, 1] * ac[:, 0])
    d = np.where(np.abs(d) < 1e-300, 1e-300, d)
    ab2 = np.einsum("ij,ij->i", ab, ab)
    ac2 = np.einsum("ij,ij->i", ac, ac)
    ux = (ac[:, 1] * ab2 - ab[:, 1] * ac2) / d
    uy = (ab[:, 0] * ac2 - ac[:, 0] * ab2) / d
    return a + np.stack([ux, uy], axis=1)


def _refinement_points(env, points, big_tris, big_areas, r_min) -> np.ndarray:
    """Steiner candidates for oversized triangles, thinned to spacing r_min.

    Circumcenters give well-spaced uniform meshes; where a circumcenter falls
    outside free space or hugs a constraint, the triangle's centroid (always
    interior) substitutes. Candidates are processed largest-triangle-first so
    the outcome does not depend on mesh traversal order.
    """
    order = np.argsort(-big_areas, kind="stable")
    big_tris = big_tris[order]
    cand = _circumcenters(points, big_tris)
    cand_ok = points_in_free_space(env, cand, clearance=0.25 * r_min)
    centroids = points[big_tris].mean(axis=1)
    cand = np.where(cand_ok[:, None], cand, centroids)

    tree = cKDTree(points)
    too_close_existing = tree.query(cand, k=1)[0] < r_min
    clear_enough = _min_dist_points_segments(cand, env.edges_p0, env.edges_p1) >= max(
        0.05 * r_min, INTERIOR_CLEARANCE
    )
    accepted = np.empty((cand.shape[0], 2))
    n_acc = 0
    r2 = r_min * r_min
    for p, skip, clear in zip(cand, too_close_existing, clear_enough):
        if skip or not clear:
            continue
        if n_acc:
            d = accepted[:n_acc] - p
            if np.min(np.einsum("ij,ij->i", d, d)) < r2:
                continue
        accepted[n_acc] = p
        n_acc += 1
    return accepted[:n_acc].copy()
