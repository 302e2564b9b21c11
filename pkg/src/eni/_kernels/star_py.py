"""Pure-Python radial-sweep kernel for star-polygon difference areas.

Both polygons are star-shaped about the origin (visibility polygons
translated so their kernels coincide), so each is fully described by its
radial distance function r(t). The boolean difference ``A \\ B`` then
decomposes into angular intervals bounded by vertex events of either polygon
plus the (at most one) crossing of the two chord lines active in an interval;
on every piece the difference area is the area between two origin triangles:

    0.5 * sin(t2 - t1) * (rA(t1) * rA(t2) - rB(t1) * rB(t2))   where rA > rB.

This file is the reference implementation; ``_star_cy.pyx`` is a line-for-line
port to C-level loops. Both must return identical results to ~1e-12.
"""

from __future__ import annotations

import math

import numpy as np

TWO_PI = 2.0 * math.pi

#: sentinel returned when a polygon is not star-representable about the origin
NOT_STAR = -1.0


def _prepare(pts: np.ndarray):
    """Vertex angles and sweep start index, or None if not star about origin.

    A polygon is radially representable when every edge keeps the origin on
    its left (cross >= 0 up to noise) and no edge is antipodal-collinear with
    the origin. The start index is the vertex where the CCW angle sequence
    wraps past 2*pi.
    """
    n = pts.shape[0]
    xs = pts[:, 0]
    ys = pts[:, 1]
    ang = np.mod(np.arctan2(ys, xs), TWO_PI)
    for i in range(n):
        j = (i + 1) % n
        xi, yi, xj, yj = xs[i], ys[i], xs[j], ys[j]
        r2i = xi * xi + yi * yi
        r2j = xj * xj + yj * yj
        if r2i < 1e-18 or r2j < 1e-18:
            return None
        cross = xi * yj - yi * xj
        dot = xi * xj + yi * yj
        scale = math.sqrt(r2i * r2j)
        if cross < -1e-9 * scale:
            return None
        if abs(cross) <= 1e-9 * scale and dot < 0.0:
            return None
    start = 0
    best_drop = -math.inf
    for i in range(n):
        drop = ang[i - 1] - ang[i]
        if drop > best_drop:
            best_drop = drop
            start = i
    return xs, ys, ang, start


def _unwrapped(ang: np.ndarray, start: int) -> np.ndarray:
    """Monotone angle sequence of length n+1 beginning at the wrap vertex."""
    n = ang.shape[0]
    out = np.empty(n + 1)
    out[0] = ang[start]
    for k in range(1, n):
        a = ang[(start + k) % n]
        if a < out[k - 1]:
            a = out[k - 1]  # clamp float dips on radial vertex pairs
        out[k] = a
    out[n] = out[0] + TWO_PI
    return out


def _radial(p0x, p0y, p1x, p1y, ux, uy):
    """Distance along ray (ux, uy) to the line through (p0, p1)."""
    denom = ux * (p1y - p0y) - uy * (p1x - p0x)
    if abs(denom) < 1e-30:
        return 1e30
    return (p0x * p1y - p0y * p1x) / denom


def _piece_area(t1, t2, a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y):
    """Difference contribution of one crossing-free angular piece."""
    tm = 0.5 * (t1 + t2)
    um_x, um_y = math.cos(tm), math.sin(tm)
    ra_m = _radial(a0x, a0y, a1x, a1y, um_x, um_y)
    rb_m = _radial(b0x, b0y, b1x, b1y, um_x, um_y)
    if ra_m <= rb_m:
        return 0.0
    u1x, u1y = math.cos(t1), math.sin(t1)
    u2x, u2y = math.cos(t2), math.sin(t2)
    ra1 = _radial(a0x, a0y, a1x, a1y, u1x, u1y)
    ra2 = _radial(a0x, a0y, a1x, a1y, u2x, u2y)
    rb1 = _radial(b0x, b0y, b1x, b1y, u1x, u1y)
    rb2 = _radial(b0x, b0y, b1x, b1y, u2x, u2y)
    c = 0.5 * math.sin(t2 - t1) * (ra1 * ra2 - rb1 * rb2)
    return c if c > 0.0 else 0.0


def _sweep(ax, ay, sa, a_start, na, bx, by, sb, b_start, nb) -> float:
    """Merge both arc sequences over one revolution and accumulate A \\ B."""
    t0 = sa[0]
    t_end = t0 + TWO_PI

    # locate B's active arc at angle t0
    if sb[0] <= t0:
        offset = 0.0
        ib = 0
        while ib + 1 < nb and sb[ib + 1] <= t0:
            ib += 1
    else:
        offset = -TWO_PI
        ib = nb - 1
        while ib > 0 and sb[ib] - TWO_PI > t0:
            ib -= 1

    acc = 0.0
    ia = 0
    t = t0
    guard = 0
    max_iter = 2 * (na + nb) + 8
    while t < t_end - 1e-15 and ia < na:
        guard += 1
        if guard > max_iter:
            break
        a_end = sa[ia + 1]
        b_end = sb[ib + 1] + offset
        tn = min(a_end, b_end, t_end)
        if tn > t + 1e-14:
            i0 = (a_start + ia) % na
            i1 = (a_start + ia + 1) % na
            j0 = (b_start + ib) % nb
            j1 = (b_start + ib + 1) % nb
            a0x, a0y, a1x, a1y = ax[i0], ay[i0], ax[i1], ay[i1]
            b0x, b0y, b1x, b1y = bx[j0], by[j0], bx[j1], by[j1]
            # split at the chord-line crossing if it falls inside the interval
            ts = -1.0
            dax, day = a1x - a0x, a1y - a0y
            dbx, dby = b1x - b0x, b1y - b0y
            denom = dax * dby - day * dbx
            if abs(denom) > 1e-30:
                s = ((b0x - a0x) * dby - (b0y - a0y) * dbx) / denom
                qx = a0x + s * dax
                qy = a0y + s * day
                if qx * qx + qy * qy > 1e-24:
                    tq = math.atan2(qy, qx) % TWO_PI
                    while tq < t + 1e-12:
                        tq += TWO_PI
                    if tq < tn - 1e-12:
                        ts = tq
            if ts > 0.0:
                acc += _piece_area(t, ts, a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y)
                acc += _piece_area(ts, tn, a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y)
            else:
                acc += _piece_area(t, tn, a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y)
        if a_end <= tn + 1e-15:
            ia += 1
        if b_end <= tn + 1e-15:
            ib += 1
            if ib == nb:
                ib = 0
                offset += TWO_PI
        t = tn
    return acc


def star_difference_area(a_pts: np.ndarray, b_pts: np.ndarray, theta: float = 0.0) -> float:
    """Area of ``a \\ rot(b, theta)``, both star-shaped about the origin.

    Returns ``NOT_STAR`` (-1.0) when either polygon has no radial
    representation, in which case the caller falls back to a general clipper.
    """
    a_pts = np.ascontiguousarray(a_pts, dtype=float)
    b_pts = np.ascontiguousarray(b_pts, dtype=float)
    prep_a = _prepare(a_pts)
    if prep_a is None:
        return NOT_STAR
    if theta != 0.0:
        c, s = math.cos(theta), math.sin(theta)
        rot = np.empty_like(b_pts)
        rot[:, 0] = c * b_pts[:, 0] - s * b_pts[:, 1]
        rot[:, 1] = s * b_pts[:, 0] + c * b_pts[:, 1]
        b_pts = rot
    prep_b = _prepare(b_pts)
    if prep_b is None:
        return NOT_STAR
    ax, ay, ang_a, start_a = prep_a
    bx, by, ang_b, start_b = prep_b
    sa = _unwrapped(ang_a, start_a)
    sb = _unwrapped(ang_b, start_b)
    return _sweep(ax, ay, sa, start_a, len(ax), bx, by, sb, start_b, len(bx))


def best_rotation(a_pts: np.ndarray, b_pts: np.ndarray, thetas: np.ndarray):
    """Min difference area over the rotation set; ties go to the lowest index."""
    best = math.inf
    best_idx = 0
    for t, theta in enumerate(np.asarray(thetas, dtype=float)):
        v = star_difference_area(a_pts, b_pts, float(theta))
        if v < 0.0:
            return NOT_STAR, -1
        if v < best:
            best = v
            best_idx = t
        if best == 0.0:
            break
    return best, best_idx


def best_match(a_pts, a_area, px, py, pang, offsets, areas, thetas):
    """Exhaustive argmin over packed physical polygons and the rotation set.

    Signature mirrors the compiled kernel: ``px``/``py``/``pang`` hold all
    physical polygons' kernel-relative vertices and vertex angles concatenated,
    with polygon j in the slice [offsets[j], offsets[j+1]). Polygons then
    angles are scanned in ascending order with strict-less updates, so ties
    resolve to the lowest indices; a polygon is skipped when the exact lower
    bound area(A) - area(B) cannot strictly beat the incumbent (1e-9 safety
    margin keeps the skip sound against float noise).
    """
    del pang  # the reference path recomputes angles after rotation
    thetas = np.asarray(thetas, dtype=float)
    offsets = np.asarray(offsets)
    best = math.inf
    best_j = -1
    best_t = -1
    for j in range(offsets.shape[0] - 1):
        lb = a_area - areas[j]
        if lb < 0.0:
            lb = 0.0
        if lb >= best + 1e-9:
            continue
        b_pts = np.stack(
            [px[offsets[j]:offsets[j + 1]], py[offsets[j]:offsets[j + 1]]], axis=1
        )
        score, t_idx = best_rotation(a_pts, b_pts, thetas)
        if score < 0.0:
            raise ValueError(f"physical polygon {j} is not star-shaped about its kernel")
        if score < best:
            best = score
            best_j = j
            best_t = t_idx
        if best == 0.0:
            break
    return best, best_j, best_t
