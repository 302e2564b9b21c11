"""Independent oracles used to cross-check geometric results.

Everything here is deliberately implemented from scratch (no imports from the
package's geometry internals): ray-fan visibility areas, Monte-Carlo and
grid-rasterization boolean areas, and a crossing-number containment test.
"""

from __future__ import annotations

import numpy as np


def contains(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Crossing-number containment of (k, 2) points in an (n, 2) polygon."""
    x = points[:, 0][:, None]
    y = points[:, 1][:, None]
    x1 = poly[:, 0][None, :]
    y1 = poly[:, 1][None, :]
    x2 = np.roll(poly[:, 0], -1)[None, :]
    y2 = np.roll(poly[:, 1], -1)[None, :]
    straddles = (y1 <= y) != (y2 <= y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xing = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    crossings = np.sum(straddles & (xing > x), axis=1)
    return crossings % 2 == 1


def fan_visibility_area(env, p, step_deg: float = 0.1) -> float:
    """Visible area from ``p`` via a dense ray fan over the environment edges.

    Casts a ray every ``step_deg`` degrees, takes the nearest hit, and sums
    the triangle fan. Works directly on the environment's edge arrays but
    performs its own intersection math.
    """
    p = np.asarray(p, dtype=float)
    a = env.edges_p0 - p  # (E, 2)
    b = env.edges_p1 - p
    d = b - a
    cross_ad = a[:, 0] * d[:, 1] - a[:, 1] * d[:, 0]

    angles = np.deg2rad(np.arange(0.0, 360.0, step_deg))
    ux = np.cos(angles)[:, None]
    uy = np.sin(angles)[:, None]
    denom = ux * d[None, :, 1] - uy * d[None, :, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (a[None, :, 0] * uy - a[None, :, 1] * ux) / denom
        r = cross_ad[None, :] / denom
    ok = (np.abs(denom) > 1e-15) & (s >= -1e-12) & (s <= 1 + 1e-12) & (r > 1e-12)
    r = np.where(ok, r, np.inf)
    nearest = r.min(axis=1)
    assert np.all(np.isfinite(nearest)), "fan ray escaped the environment"
    r_next = np.roll(nearest, -1)
    step = np.deg2rad(step_deg)
    return float(np.sum(0.5 * nearest * r_next * np.sin(step)))


def mc_difference_area(
    a_verts: np.ndarray, b_verts: np.ndarray, samples: int, rng: np.random.Generator
) -> float:
    """Monte-Carlo area of a \\ b, conditioned on hits inside a's bounding box.

    Scales the conditional hit fraction by the exact shoelace area of ``a``,
    which removes the bounding-box variance term.
    """
    area_a = shoelace(a_verts)
    lo = a_verts.min(axis=0)
    hi = a_verts.max(axis=0)
    pts = rng.uniform(lo, hi, size=(samples, 2))
    in_a = contains(pts, a_verts)
    n_a = int(np.count_nonzero(in_a))
    if n_a == 0:
        return 0.0
    in_b = contains(pts[in_a], b_verts)
    return area_a * float(np.count_nonzero(~in_b)) / n_a


def grid_difference_area(
    a_verts: np.ndarray, b_verts: np.ndarray, resolution: int = 700
) -> float:
    """Rasterized area of a \\ b on a regular grid over a's bounding box."""
    lo = a_verts.min(axis=0)
    hi = a_verts.max(axis=0)
    xs = np.linspace(lo[0], hi[0], resolution, endpoint=False) + (hi[0] - lo[0]) / (
        2 * resolution
    )
    ys = np.linspace(lo[1], hi[1], resolution, endpoint=False) + (hi[1] - lo[1]) / (
        2 * resolution
    )
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    cell = (hi[0] - lo[0]) * (hi[1] - lo[1]) / (resolution * resolution)
    in_a = contains(pts, a_verts)
    hits = in_a & ~contains(pts, b_verts)
    return float(np.count_nonzero(hits)) * cell


def shoelace(verts: np.ndarray) -> float:
    x = verts[:, 0]
    y = verts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def random_star_polygon(
    rng: np.random.Generator, n: int, lo: float = 0.4, hi: float = 3.5
) -> np.ndarray:
    """Star polygon about the origin with jittered-regular vertex angles."""
    ang = 2 * np.pi * (np.arange(n) + rng.uniform(0.1, 0.9, n)) / n
    r = rng.uniform(lo, hi, n)
    return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=1)


def random_convex_polygon(
    rng: np.random.Generator, n: int, scale: float, center=(0.0, 0.0)
) -> np.ndarray:
    """Convex polygon from the hull of random points (own hull, no libraries)."""
    pts = rng.normal(size=(max(n, 8), 2)) * scale + np.asarray(center)
    return convex_hull(pts)


def convex_hull(pts: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns CCW hull vertices."""
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def half(seq):
        out: list[np.ndarray] = []
        for p in seq:
            while len(out) >= 2:
                u = out[-1] - out[-2]
                v = p - out[-2]
                if u[0] * v[1] - u[1] * v[0] > 0:
                    break
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(pts[::-1])
    return np.asarray(lower[:-1] + upper[:-1])


def brute_force_matches(virt_samples, phys_samples, theta_angles):
    """Exhaustive argmin re-scan through shapely, independent of the kernel.

    Returns (scores, phys_idx, theta_idx) arrays; strictly smaller scores win
    so exact ties keep the earliest (lowest-index) candidate.
    """
    import shapely

    phys_rel = [vp.relative_vertices() for vp in phys_samples.vis_polygons]
    out_score = np.empty(len(virt_samples.vis_polygons))
    out_j = np.empty(len(virt_samples.vis_polygons), dtype=int)
    out_t = np.empty(len(virt_samples.vis_polygons), dtype=int)
    for i, vp in enumerate(virt_samples.vis_polygons):
        pa = shapely.Polygon(vp.relative_vertices())
        best = np.inf
        bj = bt = -1
        for j, rel in enumerate(phys_rel):
            for t, theta in enumerate(theta_angles):
                c, s = np.cos(theta), np.sin(theta)
                rot = rel @ np.array([[c, s], [-s, c]])
                v = pa.difference(shapely.Polygon(rot)).area
                if v < best:
                    best = v
                    bj, bt = j, t
        out_score[i] = best
        out_j[i] = bj
        out_t[i] = bt
    return out_score, out_j, out_t
