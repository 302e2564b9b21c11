# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled radial-sweep kernel; see star_py.py for the reference algorithm.

The hot entry point is best_match(), which runs the full
polygons-by-rotations argmin for one virtual polygon without touching Python
objects; the GIL is released so callers can fan virtual samples out across
threads.
"""

from libc.math cimport M_PI, atan2, cos, fabs, fmod, sin, sqrt
from libc.stdlib cimport free, malloc

import numpy as np

cdef double TWO_PI = 2.0 * M_PI
cdef double HUGE_R = 1e30


cdef inline double _wrap_angle(double a) nogil:
    a = fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return a


cdef int _star_ok(const double* xs, const double* ys, int n) nogil:
    """0 when the polygon is star-shaped about the origin, -1 otherwise."""
    cdef int i, j
    cdef double xi, yi, xj, yj, r2i, r2j, cross, dot, scale
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        xi = xs[i]; yi = ys[i]; xj = xs[j]; yj = ys[j]
        r2i = xi * xi + yi * yi
        r2j = xj * xj + yj * yj
        if r2i < 1e-18 or r2j < 1e-18:
            return -1
        cross = xi * yj - yi * xj
        dot = xi * xj + yi * yj
        scale = sqrt(r2i * r2j)
        if cross < -1e-9 * scale:
            return -1
        if fabs(cross) <= 1e-9 * scale and dot < 0.0:
            return -1
    return 0


cdef int _start_index(const double* ang, int n) nogil:
    """Vertex where the CCW angle sequence wraps past 2*pi (largest drop)."""
    cdef int i, start = 0
    cdef double drop, best = -1e300
    cdef double prev = ang[n - 1]
    for i in range(n):
        drop = prev - ang[i]
        if drop > best:
            best = drop
            start = i
        prev = ang[i]
    return start


cdef void _unwrap(const double* ang, int n, int start, double* out) nogil:
    cdef int k, idx
    cdef double a
    out[0] = ang[start]
    for k in range(1, n):
        idx = start + k
        if idx >= n:
            idx -= n
        a = ang[idx]
        if a < out[k - 1]:
            a = out[k - 1]  # clamp float dips on radial vertex pairs
        out[k] = a
    out[n] = out[0] + TWO_PI


cdef inline double _radial(double p0x, double p0y, double p1x, double p1y,
                           double ux, double uy) nogil:
    cdef double denom = ux * (p1y - p0y) - uy * (p1x - p0x)
    if fabs(denom) < 1e-30:
        return HUGE_R
    return (p0x * p1y - p0y * p1x) / denom


cdef inline double _piece_area(double t1, double t2,
                               double a0x, double a0y, double a1x, double a1y,
                               double b0x, double b0y, double b1x, double b1y) nogil:
    cdef double tm = 0.5 * (t1 + t2)
    cdef double umx = cos(tm), umy = sin(tm)
    cdef double ra_m = _radial(a0x, a0y, a1x, a1y, umx, umy)
    cdef double rb_m = _radial(b0x, b0y, b1x, b1y, umx, umy)
    cdef double u1x, u1y, u2x, u2y, ra1, ra2, rb1, rb2, c
    if ra_m <= rb_m:
        return 0.0
    u1x = cos(t1); u1y = sin(t1)
    u2x = cos(t2); u2y = sin(t2)
    ra1 = _radial(a0x, a0y, a1x, a1y, u1x, u1y)
    ra2 = _radial(a0x, a0y, a1x, a1y, u2x, u2y)
    rb1 = _radial(b0x, b0y, b1x, b1y, u1x, u1y)
    rb2 = _radial(b0x, b0y, b1x, b1y, u2x, u2y)
    c = 0.5 * sin(t2 - t1) * (ra1 * ra2 - rb1 * rb2)
    return c if c > 0.0 else 0.0


cdef double _sweep(const double* ax, const double* ay, const double* sa,
                   int a_start, int na,
                   const double* bx, const double* by, const double* sb,
                   int b_start, int nb) nogil:
    cdef double t0 = sa[0]
    cdef double t_end = t0 + TWO_PI
    cdef double offset, acc, t, a_end, b_end, tn
    cdef double a0x, a0y, a1x, a1y, b0x, b0y, b1x, b1y
    cdef double dax, day, dbx, dby, denom, s, qx, qy, tq, ts
    cdef int ia, ib, i0, i1, j0, j1, guard, max_iter

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
        tn = a_end
        if b_end < tn:
            tn = b_end
        if t_end < tn:
            tn = t_end
        if tn > t + 1e-14:
            i0 = a_start + ia
            if i0 >= na:
                i0 -= na
            i1 = i0 + 1
            if i1 >= na:
                i1 -= na
            j0 = b_start + ib
            if j0 >= nb:
                j0 -= nb
            j1 = j0 + 1
            if j1 >= nb:
                j1 -= nb
            a0x = ax[i0]; a0y = ay[i0]; a1x = ax[i1]; a1y = ay[i1]
            b0x = bx[j0]; b0y = by[j0]; b1x = bx[j1]; b1y = by[j1]
            # split at the chord-line crossing if it falls inside the interval
            ts = -1.0
            dax = a1x - a0x; day = a1y - a0y
            dbx = b1x - b0x; dby = b1y - b0y
            denom = dax * dby - day * dbx
            if fabs(denom) > 1e-30:
                s = ((b0x - a0x) * dby - (b0y - a0y) * dbx) / denom
                qx = a0x + s * dax
                qy = a0y + s * day
                if qx * qx + qy * qy > 1e-24:
                    tq = _wrap_angle(atan2(qy, qx))
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


cdef double _diff_rotated(const double* ax, const double* ay, const double* sa,
                          int a_start, int na,
                          const double* bx, const double* by, const double* bang,
                          int nb, double theta,
                          double* wx, double* wy, double* wang, double* wsb) nogil:
    """Difference area against B rotated by theta, using work buffers for B."""
    cdef int i, b_start
    cdef double c, s, a
    if theta == 0.0:
        for i in range(nb):
            wx[i] = bx[i]
            wy[i] = by[i]
            wang[i] = bang[i]
    else:
        c = cos(theta)
        s = sin(theta)
        for i in range(nb):
            wx[i] = c * bx[i] - s * by[i]
            wy[i] = s * bx[i] + c * by[i]
            a = bang[i] + theta
            if a >= TWO_PI:
                a -= TWO_PI
            wang[i] = a
    b_start = _start_index(wang, nb)
    _unwrap(wang, nb, b_start, wsb)
    return _sweep(ax, ay, sa, a_start, na, wx, wy, wsb, b_start, nb)


def star_difference_area(a_pts, b_pts, double theta=0.0):
    """Area of ``a \\ rot(b, theta)``; -1.0 when not star-representable."""
    cdef const double[:, ::1] a = np.ascontiguousarray(a_pts, dtype=np.float64)
    cdef const double[:, ::1] b = np.ascontiguousarray(b_pts, dtype=np.float64)
    cdef int na = a.shape[0]
    cdef int nb = b.shape[0]
    cdef double result = -1.0
    cdef int i, a_start, ok
    cdef double* buf = <double*> malloc((4 * na + 7 * nb + 2) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* ax = buf
    cdef double* ay = ax + na
    cdef double* aang = ay + na
    cdef double* sa = aang + na            # na + 1 slots
    cdef double* bx = sa + na + 1
    cdef double* by = bx + nb
    cdef double* bang = by + nb
    cdef double* wx = bang + nb
    cdef double* wy = wx + nb
    cdef double* wang = wy + nb
    cdef double* wsb = wang + nb           # nb + 1 slots
    try:
        with nogil:
            for i in range(na):
                ax[i] = a[i, 0]
                ay[i] = a[i, 1]
            for i in range(nb):
                bx[i] = b[i, 0]
                by[i] = b[i, 1]
            ok = _star_ok(ax, ay, na)
            if ok == 0:
                ok = _star_ok(bx, by, nb)
            if ok == 0:
                for i in range(na):
                    aang[i] = _wrap_angle(atan2(ay[i], ax[i]))
                for i in range(nb):
                    bang[i] = _wrap_angle(atan2(by[i], bx[i]))
                a_start = _start_index(aang, na)
                _unwrap(aang, na, a_start, sa)
                result = _diff_rotated(ax, ay, sa, a_start, na,
                                       bx, by, bang, nb, theta,
                                       wx, wy, wang, wsb)
        return result if ok == 0 else -1.0
    finally:
        free(buf)


def best_rotation(a_pts, b_pts, thetas):
    """Min difference area over the rotation set; ties to the lowest index."""
    cdef const double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef double best = np.inf
    cdef int best_idx = 0
    cdef int t
    cdef double v
    for t in range(th.shape[0]):
        v = star_difference_area(a_pts, b_pts, th[t])
        if v < 0.0:
            return -1.0, -1
        if v < best:
            best = v
            best_idx = t
        if best == 0.0:
            break
    return best, best_idx


def best_match(a_pts, double a_area, px, py, pang, offsets, areas, thetas):
    """Exhaustive argmin over packed physical polygons and the rotation set.

    ``px``/``py``/``pang`` hold all physical polygons' kernel-relative
    vertices and vertex angles concatenated; ``offsets`` delimits polygon j as
    the slice [offsets[j], offsets[j+1]). Polygons then angles are scanned in
    ascending order with strict-less updates (ties resolve to the lowest
    indices), and a polygon is skipped when the exact lower bound
    area(A) - area(B) cannot strictly beat the incumbent.
    """
    cdef const double[:, ::1] a = np.ascontiguousarray(a_pts, dtype=np.float64)
    cdef const double[::1] pxv = np.ascontiguousarray(px, dtype=np.float64)
    cdef const double[::1] pyv = np.ascontiguousarray(py, dtype=np.float64)
    cdef const double[::1] pangv = np.ascontiguousarray(pang, dtype=np.float64)
    cdef const long long[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef const double[::1] areasv = np.ascontiguousarray(areas, dtype=np.float64)
    cdef const double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef int na = a.shape[0]
    cdef int m = off.shape[0] - 1
    cdef int nth = th.shape[0]
    cdef int max_nb = 0
    cdef int j, i, t, nb, a_start, status
    cdef long long o0
    cdef double best, jbest, v, lb
    cdef int best_j = -1, best_t = -1, jt

    for j in range(m):
        nb = <int> (off[j + 1] - off[j])
        if nb > max_nb:
            max_nb = nb

    cdef double* buf = <double*> malloc((4 * na + 4 * max_nb + 2) * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double* ax = buf
    cdef double* ay = ax + na
    cdef double* aang = ay + na
    cdef double* sa = aang + na            # na + 1 slots
    cdef double* wx = sa + na + 1
    cdef double* wy = wx + max_nb
    cdef double* wang = wy + max_nb
    cdef double* wsb = wang + max_nb       # max_nb + 1 slots

    status = 0
    best = np.inf
    try:
        with nogil:
            for i in range(na):
                ax[i] = a[i, 0]
                ay[i] = a[i, 1]
            if _star_ok(ax, ay, na) != 0:
                status = -1
            else:
                for i in range(na):
                    aang[i] = _wrap_angle(atan2(ay[i], ax[i]))
                a_start = _start_index(aang, na)
                _unwrap(aang, na, a_start, sa)
                for j in range(m):
                    lb = a_area - areasv[j]
                    if lb < 0.0:
                        lb = 0.0
                    if lb >= best + 1e-9:
                        continue
                    o0 = off[j]
                    nb = <int> (off[j + 1] - o0)
                    jbest = 1e300
                    jt = 0
                    for t in range(nth):
                        v = _diff_rotated(ax, ay, sa, a_start, na,
                                          &pxv[o0], &pyv[o0], &pangv[o0],
                                          nb, th[t], wx, wy, wang, wsb)
                        if v < jbest:
                            jbest = v
                            jt = t
                        if jbest == 0.0:
                            break
                    if jbest < best:
                        best = jbest
                        best_j = j
                        best_t = jt
                    if best == 0.0:
                        break
    finally:
        free(buf)
    if status != 0:
        raise ValueError("query polygon is not star-shaped about its kernel")
    return best, best_j, best_t
