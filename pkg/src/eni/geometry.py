"""2D polygon kernel: environments, visibility polygons, rotation, boolean areas.

Environments are closed simple polygons with simple-polygon holes. All
polygons are normalized to counterclockwise winding at construction and all
coordinates are meters. The visibility polygon of a point is computed with an
exact angular sweep over the environment's edge endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import shapely

from .errors import EmptyFreeSpace, InvalidGeometry, PointNotInFreeSpace

#: Coincidence / on-boundary tolerance in meters.
EPS = 1e-9

_TWO_PI = 2.0 * np.pi


def as_xy(p) -> np.ndarray:
    """Coerce a point-like value (Point2, tuple, list, ndarray) to shape (2,)."""
    if isinstance(p, Point2):
        return np.array([p.x, p.y], dtype=float)
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise InvalidGeometry(f"expected a 2D point, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class Point2:
    """A location in an environment, in meters."""

    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise InvalidGeometry(f"non-finite point ({self.x}, {self.y})")

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y], dtype=float)


class SimplePolygon:
    """A non-self-intersecting polygon stored with counterclockwise winding.

    Consecutive coincident vertices (within ``EPS``) are rejected; clockwise
    input is reversed at construction so downstream code can rely on positive
    shoelace area.
    """

    __slots__ = ("_vertices", "__dict__")

    def __init__(self, vertices, validate: bool = True):
        arr = np.asarray(vertices, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
            raise InvalidGeometry("polygon needs at least 3 (x, y) vertices")
        if not np.all(np.isfinite(arr)):
            raise InvalidGeometry("polygon has non-finite coordinates")
        closing = np.linalg.norm(arr[0] - arr[-1])
        if closing <= EPS:
            arr = arr[:-1]
        if arr.shape[0] < 3:
            raise InvalidGeometry("polygon needs at least 3 distinct vertices")
        gaps = np.linalg.norm(np.diff(arr, axis=0, append=arr[:1]), axis=1)
        if np.any(gaps <= EPS):
            raise InvalidGeometry("consecutive coincident vertices")
        if _signed_area(arr) < 0.0:
            arr = arr[::-1].copy()
        if validate and _has_self_intersection(arr):
            raise InvalidGeometry("polygon is self-intersecting")
        arr.setflags(write=False)
        self._vertices = arr

    @property
    def vertices(self) -> np.ndarray:
        """Vertex array of shape (n, 2), read-only, CCW order."""
        return self._vertices

    def __len__(self) -> int:
        return self._vertices.shape[0]

    @cached_property
    def area(self) -> float:
        return float(_signed_area(self._vertices))

    @cached_property
    def centroid(self) -> np.ndarray:
        v = self._vertices
        w = np.roll(v, -1, axis=0)
        cross = v[:, 0] * w[:, 1] - v[:, 1] * w[:, 0]
        c = ((v + w) * cross[:, None]).sum(axis=0) / (6.0 * self.area)
        c.setflags(write=False)
        return c

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Edge start and end arrays, both of shape (n, 2)."""
        return self._vertices, np.roll(self._vertices, -1, axis=0)

    def contains(self, points) -> np.ndarray:
        """Even-odd containment for an (k, 2) array; boundary is unspecified."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return _points_in_polygon(pts, self._vertices)

    def translated(self, offset) -> "SimplePolygon":
        return SimplePolygon(self._vertices + as_xy(offset), validate=False)

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplePolygon) and np.array_equal(
            self._vertices, other._vertices
        )

    def __hash__(self):
        return hash(self._vertices.tobytes())

    def __repr__(self):
        return f"SimplePolygon({len(self)} vertices, area={self.area:.3f})"


class Environment:
    """A boundary polygon with hole polygons defining walkable free space.

    Obstacles must lie strictly inside the boundary and be pairwise disjoint,
    and the remaining free space must be non-empty.
    """

    def __init__(self, boundary: SimplePolygon, obstacles: Sequence[SimplePolygon] = (),
                 name: str = "", validate: bool = True):
        self.boundary = boundary
        self.obstacles = list(obstacles)
        self.name = name
        if validate:
            self._validate()
        p0 = [boundary.vertices]
        p1 = [np.roll(boundary.vertices, -1, axis=0)]
        for ob in self.obstacles:
            p0.append(ob.vertices)
            p1.append(np.roll(ob.vertices, -1, axis=0))
        self.edges_p0 = np.concatenate(p0, axis=0)
        self.edges_p1 = np.concatenate(p1, axis=0)
        self.edges_p0.setflags(write=False)
        self.edges_p1.setflags(write=False)
        self.free_area = boundary.area - sum(ob.area for ob in self.obstacles)

    def _validate(self):
        bverts, _ = self.boundary.edges()
        for i, ob in enumerate(self.obstacles):
            if not np.all(_points_in_polygon(ob.vertices, bverts)):
                raise InvalidGeometry(f"obstacle {i} not strictly inside boundary")
            if _polygons_edges_cross(ob.vertices, bverts):
                raise InvalidGeometry(f"obstacle {i} crosses the boundary")
            d = _min_dist_points_segments(ob.vertices, *self.boundary.edges())
            if np.min(d) <= EPS:
                raise InvalidGeometry(f"obstacle {i} touches the boundary")
        for i in range(len(self.obstacles)):
            for j in range(i + 1, len(self.obstacles)):
                a, b = self.obstacles[i], self.obstacles[j]
                if (
                    np.any(_points_in_polygon(a.vertices, b.vertices))
                    or np.any(_points_in_polygon(b.vertices, a.vertices))
                    or _polygons_edges_cross(a.vertices, b.vertices)
                ):
                    raise InvalidGeometry(f"obstacles {i} and {j} overlap")
        if self.boundary.area - sum(ob.area for ob in self.obstacles) <= EPS:
            raise EmptyFreeSpace("environment has no free space")

    @cached_property
    def bbox(self) -> tuple[float, float, float, float]:
        v = self.boundary.vertices
        return float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max())

    def translated(self, offset) -> "Environment":
        off = as_xy(offset)
        return Environment(
            self.boundary.translated(off),
            [ob.translated(off) for ob in self.obstacles],
            name=self.name,
            validate=False,
        )

    def rotated(self, theta: float, about=(0.0, 0.0)) -> "Environment":
        c = as_xy(about)
        rot = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])

        def rot_poly(p: SimplePolygon) -> SimplePolygon:
            return SimplePolygon((p.vertices - c) @ rot.T + c, validate=False)

        return Environment(
            rot_poly(self.boundary),
            [rot_poly(ob) for ob in self.obstacles],
            name=self.name,
            validate=False,
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Environment)
            and self.boundary == other.boundary
            and self.obstacles == other.obstacles
        )

    def __hash__(self):
        return hash((self.boundary, tuple(self.obstacles)))

    def __repr__(self):
        return (
            f"Environment({self.name!r}, free_area={self.free_area:.2f}, "
            f"obstacles={len(self.obstacles)})"
        )


@dataclass(frozen=True)
class VisibilityPolygon:
    """A star-shaped polygon of everything visible from its kernel point."""

    kernel: Point2
    polygon: SimplePolygon

    def __post_init__(self):
        rel = self.polygon.vertices - self.kernel.to_array()
        cross = rel[:, 0] * np.roll(rel[:, 1], -1) - rel[:, 1] * np.roll(rel[:, 0], -1)
        scale = np.maximum(np.einsum("ij,ij->i", rel, rel), 1.0)
        if np.any(cross < -1e-7 * scale):
            raise InvalidGeometry("polygon is not star-shaped about its kernel")

    @property
    def area(self) -> float:
        return self.polygon.area

    def kernel_xy(self) -> np.ndarray:
        return self.kernel.to_array()

    def relative_vertices(self) -> np.ndarray:
        """Vertices translated so the kernel sits at the origin."""
        return self.polygon.vertices - self.kernel.to_array()


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def polygon_area(poly: SimplePolygon) -> float:
    """Shoelace area of a polygon, always positive for a valid CCW polygon."""
    return poly.area


def point_in_free_space(env: Environment, p) -> bool:
    """True iff ``p`` is strictly inside the boundary and outside every obstacle.

    Points within ``EPS`` of any edge (boundary or obstacle) count as outside
    free space, so the result doubles as a minimum-clearance test.
    """
    q = as_xy(p)
    if free_clearance(env, q) < EPS:
        return False
    if not _points_in_polygon(q[None, :], env.boundary.vertices)[0]:
        return False
    for ob in env.obstacles:
        if _points_in_polygon(q[None, :], ob.vertices)[0]:
            return False
    return True


def points_in_free_space(env: Environment, points: np.ndarray, clearance: float = EPS) -> np.ndarray:
    """Vectorized :func:`point_in_free_space` for an (k, 2) array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    ok = _min_dist_points_segments(pts, env.edges_p0, env.edges_p1) >= clearance
    ok &= _points_in_polygon(pts, env.boundary.vertices)
    for ob in env.obstacles:
        ok &= ~_points_in_polygon(pts, ob.vertices)
    return ok


def free_clearance(env: Environment, p) -> float:
    """Distance from ``p`` to the nearest environment edge."""
    q = as_xy(p)
    return float(np.min(_dist_point_segments(q, env.edges_p0, env.edges_p1)))


def compute_visibility_polygon(env: Environment, p) -> VisibilityPolygon:
    """Exact region of free space visible from ``p``.

    Angular sweep over the sorted edge-endpoint events: within each angular
    interval between consecutive events the nearest edge along the rotating
    ray is constant, so one ray probe per interval identifies it and the
    interval's polygon chord is recovered exactly by intersecting the interval
    boundary rays with that edge's supporting line.
    """
    q = as_xy(p)
    if not point_in_free_space(env, q):
        raise PointNotInFreeSpace(f"point ({q[0]}, {q[1]}) is not in free space")

    a = env.edges_p0 - q  # (E, 2) edge starts, viewer at origin
    b = env.edges_p1 - q
    d = b - a
    cross_ad = a[:, 0] * d[:, 1] - a[:, 1] * d[:, 0]  # per-edge constant

    ang = np.arctan2(
        np.concatenate([a[:, 1], b[:, 1]]), np.concatenate([a[:, 0], b[:, 0]])
    )
    ang = np.mod(ang, _TWO_PI)
    events = np.unique(ang)
    # merge event angles equal up to tolerance (shared vertices already collapse
    # exactly; this guards near-collinear float noise)
    keep = np.empty(events.shape, dtype=bool)
    keep[0] = True
    keep[1:] = np.diff(events) > 1e-12
    events = events[keep]
    if events.size >= 2 and (events[0] + _TWO_PI) - events[-1] <= 1e-12:
        events = events[:-1]
    if events.size < 2:
        raise InvalidGeometry("degenerate edge-event configuration")

    spans = np.diff(events, append=events[0] + _TWO_PI)
    mids = events + 0.5 * spans  # midpoint of interval k = (events[k], events[k+1])
    u = np.stack([np.cos(mids), np.sin(mids)], axis=1)  # (K, 2)

    denom = u[:, 0, None] * d[None, :, 1] - u[:, 1, None] * d[None, :, 0]  # (K, E)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (a[None, :, 0] * u[:, 1, None] - a[None, :, 1] * u[:, 0, None]) / denom
        r = cross_ad[None, :] / denom
    valid = (np.abs(denom) > 1e-15) & (s >= -1e-12) & (s <= 1 + 1e-12) & (r > 1e-12)
    r = np.where(valid, r, np.inf)
    visible = np.argmin(r, axis=1)  # nearest edge per interval
    if not np.all(np.isfinite(r[np.arange(r.shape[0]), visible])):
        raise InvalidGeometry("a sweep ray escaped the environment")

    # circular runs of intervals seeing the same edge
    k = visible.size
    change = np.nonzero(visible != np.roll(visible, 1))[0]
    if change.size == 0:
        raise InvalidGeometry("sweep found a single visible edge for all angles")

    verts: list[np.ndarray] = []
    for run_idx in range(change.size):
        start = change[run_idx]
        end = change[(run_idx + 1) % change.size]  # first interval of next run
        edge = visible[start]
        t_entry = events[start]
        t_exit = events[end]
        verts.append(_ray_line_point(t_entry, a[edge], d[edge]))
        verts.append(_ray_line_point(t_exit, a[edge], d[edge]))

    out = np.asarray(verts)
    gaps = np.linalg.norm(np.diff(out, axis=0, append=out[:1]), axis=1)
    out = out[gaps > EPS]
    if out.shape[0] < 3:
        raise InvalidGeometry("visibility polygon collapsed")
    poly = SimplePolygon(out + q, validate=False)
    return VisibilityPolygon(Point2(float(q[0]), float(q[1])), poly)


def _ray_line_point(theta: float, a: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Intersection of the origin ray at angle theta with the edge a..a+d."""
    ux, uy = np.cos(theta), np.sin(theta)
    denom = ux * d[1] - uy * d[0]
    if abs(denom) < 1e-30:
        # edge seen edge-on: nearest endpoint along the ray
        ra = a[0] * ux + a[1] * uy
        rb = (a[0] + d[0]) * ux + (a[1] + d[1]) * uy
        s = 0.0 if ra <= rb else 1.0
    else:
        s = (a[0] * uy - a[1] * ux) / denom
        s = min(max(s, 0.0), 1.0)
    return a + s * d


def ray_clearance(env: Environment, p, theta: float) -> float:
    """Distance from ``p`` to the first environment edge along direction theta."""
    q = as_xy(p)
    a = env.edges_p0 - q
    d = env.edges_p1 - env.edges_p0
    ux, uy = np.cos(theta), np.sin(theta)
    denom = ux * d[:, 1] - uy * d[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (a[:, 0] * uy - a[:, 1] * ux) / denom
        r = (a[:, 0] * d[:, 1] - a[:, 1] * d[:, 0]) / denom
    valid = (np.abs(denom) > 1e-15) & (s >= -1e-12) & (s <= 1 + 1e-12) & (r > 1e-12)
    if not np.any(valid):
        raise PointNotInFreeSpace("ray cast from outside the environment")
    return float(np.min(r[valid]))


def rotate_about_kernel(vp: VisibilityPolygon, theta: float) -> VisibilityPolygon:
    """Rotate a visibility polygon counterclockwise by theta about its kernel."""
    theta = float(theta) % _TWO_PI
    if theta == 0.0:
        return vp
    c, s = np.cos(theta), np.sin(theta)
    k = vp.kernel.to_array()
    rel = vp.polygon.vertices - k
    rot = np.empty_like(rel)
    rot[:, 0] = c * rel[:, 0] - s * rel[:, 1]
    rot[:, 1] = s * rel[:, 0] + c * rel[:, 1]
    return VisibilityPolygon(vp.kernel, SimplePolygon(rot + k, validate=False))


def difference_area(a: SimplePolygon, b: SimplePolygon) -> float:
    """Total area of ``a \\ b`` (all disjoint pieces), always >= 0."""
    pa = shapely.Polygon(a.vertices)
    pb = shapely.Polygon(b.vertices)
    return float(max(pa.difference(pb).area, 0.0))


def intersection_area(a: SimplePolygon, b: SimplePolygon) -> float:
    """Area of ``a ∩ b``."""
    return float(shapely.Polygon(a.vertices).intersection(shapely.Polygon(b.vertices)).area)


def segments_cross(p, q, env: Environment) -> bool:
    """True if the open segment p--q properly crosses any environment edge."""
    p = as_xy(p)
    q = as_xy(q)
    return bool(np.any(_segment_intersects(p, q, env.edges_p0, env.edges_p1)))


def segment_clearance(env: Environment, p, q) -> float:
    """Minimum distance from segment p--q to any environment edge."""
    p = as_xy(p)
    q = as_xy(q)
    hit = _segment_intersects(p, q, env.edges_p0, env.edges_p1)
    if np.any(hit):
        return 0.0
    d1 = _min_dist_points_segments(np.stack([p, q]), env.edges_p0, env.edges_p1)
    d2 = _dist_point_segments_batch(env.edges_p0, p, q)
    d3 = _dist_point_segments_batch(env.edges_p1, p, q)
    return float(min(d1.min(), d2.min(), d3.min()))


# ---------------------------------------------------------------------------
# Vectorized primitives
# ---------------------------------------------------------------------------


def _signed_area(verts: np.ndarray) -> float:
    x, y = verts[:, 0], verts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def _points_in_polygon(points: np.ndarray, verts: np.ndarray) -> np.ndarray:
    """Even-odd rule containment for (k, 2) points against an (n, 2) polygon."""
    x = points[:, 0][:, None]
    y = points[:, 1][:, None]
    x1, y1 = verts[:, 0][None, :], verts[:, 1][None, :]
    v2 = np.roll(verts, -1, axis=0)
    x2, y2 = v2[:, 0][None, :], v2[:, 1][None, :]
    straddle = (y1 > y) != (y2 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = (x2 - x1) * (y - y1) / (y2 - y1) + x1
    hits = straddle & (x < x_cross)
    return np.sum(hits, axis=1) % 2 == 1


def _dist_point_segments(p: np.ndarray, p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    d = p1 - p0
    dd = np.einsum("ij,ij->i", d, d)
    t = np.clip(np.einsum("ij,ij->i", p[None, :] - p0, d) / np.maximum(dd, 1e-300), 0.0, 1.0)
    proj = p0 + t[:, None] * d
    return np.linalg.norm(p[None, :] - proj, axis=1)


def _min_dist_points_segments(points: np.ndarray, p0: np.ndarray, p1: np.ndarray) -> np.ndarray:
    """Min distance from each of (k, 2) points to any of (e, 2) segments."""
    d = (p1 - p0)[None, :, :]  # (1, e, 2)
    rel = points[:, None, :] - p0[None, :, :]  # (k, e, 2)
    dd = np.maximum(np.einsum("kej,kej->ke", d, d), 1e-300)
    t = np.clip(np.einsum("kej,kej->ke", rel, d) / dd, 0.0, 1.0)
    proj = rel - t[:, :, None] * d
    return np.sqrt(np.einsum("kej,kej->ke", proj, proj)).min(axis=1)


def _dist_point_segments_batch(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distance from each of (k, 2) points to the single segment a--b."""
    d = b - a
    dd = max(float(np.dot(d, d)), 1e-300)
    t = np.clip((points - a) @ d / dd, 0.0, 1.0)
    proj = a[None, :] + t[:, None] * d[None, :]
    return np.linalg.norm(points - proj, axis=1)


def _segment_intersects(p: np.ndarray, q: np.ndarray, e0: np.ndarray, e1: np.ndarray) -> np.ndarray:
    """Proper-intersection test of segment p--q against (e, 2) segments."""

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (
            b[..., 1] - a[..., 1]
        ) * (c[..., 0] - a[..., 0])

    d1 = orient(e0, e1, p[None, :])
    d2 = orient(e0, e1, q[None, :])
    d3 = orient(p[None, :], q[None, :], e0)
    d4 = orient(p[None, :], q[None, :], e1)
    return ((d1 > 0) != (d2 > 0)) & ((d3 > 0) != (d4 > 0))


def _polygons_edges_cross(a_verts: np.ndarray, b_verts: np.ndarray) -> bool:
    """True if any edge of polygon A properly intersects any edge of polygon B."""
    a2 = np.roll(a_verts, -1, axis=0)
    b2 = np.roll(b_verts, -1, axis=0)
    for i in range(a_verts.shape[0]):
        if np.any(_segment_intersects(a_verts[i], a2[i], b_verts, b2)):
            return True
    return False


def _has_self_intersection(verts: np.ndarray) -> bool:
    n = verts.shape[0]
    v2 = np.roll(verts, -1, axis=0)
    for i in range(n):
        # skip the edge itself and the two adjacent edges (they share endpoints)
        js = np.arange(n)
        mask = (js != i) & (js != (i - 1) % n) & (js != (i + 1) % n)
        if np.any(_segment_intersects(verts[i], v2[i], verts[mask], v2[mask])):
            return True
    return False


def make_environment(boundary, obstacles: Iterable = (), name: str = "") -> Environment:
    """Build an Environment from raw vertex sequences, validating invariants."""
    return Environment(
        SimplePolygon(boundary),
        [SimplePolygon(o) for o in obstacles],
        name=name,
    )
