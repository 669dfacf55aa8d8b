# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Fermat relocation sweep and dense Prim MST."""

from libc.math cimport sqrt, atan2, sin, M_PI, INFINITY

cdef double _WIDE = 2.0 * M_PI / 3.0
cdef double _THIRD_PI = M_PI / 3.0


cdef inline double _angle(double px, double py, double pz,
                          double qx, double qy, double qz,
                          double rx, double ry, double rz) nogil:
    cdef double ux = qx - px, uy = qy - py, uz = qz - pz
    cdef double vx = rx - px, vy = ry - py, vz = rz - pz
    cdef double cx = uy * vz - uz * vy
    cdef double cy = uz * vx - ux * vz
    cdef double cz = ux * vy - uy * vx
    return atan2(sqrt(cx * cx + cy * cy + cz * cz), ux * vx + uy * vy + uz * vz)


cdef inline bint _fermat(double px, double py, double pz,
                         double qx, double qy, double qz,
                         double rx, double ry, double rz,
                         double* out) nogil:
    cdef double a = sqrt((qx - rx) ** 2 + (qy - ry) ** 2 + (qz - rz) ** 2)
    cdef double b = sqrt((px - rx) ** 2 + (py - ry) ** 2 + (pz - rz) ** 2)
    cdef double c = sqrt((px - qx) ** 2 + (py - qy) ** 2 + (pz - qz) ** 2)
    cdef double big = a
    if b > big:
        big = b
    if c > big:
        big = c
    cdef double tiny = 1e-300 + 1e-15 * big
    cdef double A, B, C, wa, wb, wc, s
    if c <= tiny or b <= tiny:
        out[0] = px; out[1] = py; out[2] = pz
        return True
    if a <= tiny:
        out[0] = qx; out[1] = qy; out[2] = qz
        return True
    A = _angle(px, py, pz, qx, qy, qz, rx, ry, rz)
    if A >= _WIDE:
        out[0] = px; out[1] = py; out[2] = pz
        return True
    B = _angle(qx, qy, qz, px, py, pz, rx, ry, rz)
    if B >= _WIDE:
        out[0] = qx; out[1] = qy; out[2] = qz
        return True
    C = M_PI - A - B
    if C >= _WIDE:
        out[0] = rx; out[1] = ry; out[2] = rz
        return True
    wa = a / sin(A + _THIRD_PI)
    wb = b / sin(B + _THIRD_PI)
    wc = c / sin(C + _THIRD_PI)
    s = wa + wb + wc
    out[0] = (wa * px + wb * qx + wc * rx) / s
    out[1] = (wa * py + wb * qy + wc * ry) / s
    out[2] = (wa * pz + wb * qz + wc * rz) / s
    return False


def fermat3(p, q, r):
    cdef double out[3]
    cdef bint flag = _fermat(p[0], p[1], p[2], q[0], q[1], q[2], r[0], r[1], r[2], out)
    return out[0], out[1], out[2], bool(flag)


def sweep(const double[:, ::1] terminals, double[:, ::1] steiner, degenerate):
    cdef Py_ssize_t n = terminals.shape[0]
    cdef Py_ssize_t k, last = n - 3
    cdef double out[3]
    cdef double d, worst = 0.0
    cdef double lx, ly, lz, rx, ry, rz
    cdef unsigned char[::1] flags = degenerate
    with nogil:
        for k in range(n - 2):
            if k == 0:
                lx = terminals[0, 0]; ly = terminals[0, 1]; lz = terminals[0, 2]
            else:
                lx = steiner[k - 1, 0]; ly = steiner[k - 1, 1]; lz = steiner[k - 1, 2]
            if k == last:
                rx = terminals[n - 1, 0]; ry = terminals[n - 1, 1]; rz = terminals[n - 1, 2]
            else:
                rx = steiner[k + 1, 0]; ry = steiner[k + 1, 1]; rz = steiner[k + 1, 2]
            flags[k] = _fermat(lx, ly, lz,
                               terminals[k + 1, 0], terminals[k + 1, 1], terminals[k + 1, 2],
                               rx, ry, rz, out)
            d = sqrt((out[0] - steiner[k, 0]) ** 2 + (out[1] - steiner[k, 1]) ** 2
                     + (out[2] - steiner[k, 2]) ** 2)
            if d > worst:
                worst = d
            steiner[k, 0] = out[0]
            steiner[k, 1] = out[1]
            steiner[k, 2] = out[2]
    return worst


def mst_length(points):
    import numpy as np
    cdef double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t n = pts.shape[0]
    if n < 2:
        return 0.0
    cdef double[::1] dist = np.empty(n)
    cdef unsigned char[::1] done = np.zeros(n, dtype=np.uint8)
    cdef Py_ssize_t i, j, step
    cdef double best, d, total = 0.0
    with nogil:
        done[0] = 1
        for i in range(n):
            dist[i] = sqrt((pts[i, 0] - pts[0, 0]) ** 2 + (pts[i, 1] - pts[0, 1]) ** 2
                           + (pts[i, 2] - pts[0, 2]) ** 2)
        for step in range(n - 1):
            j = -1
            best = INFINITY
            for i in range(n):
                if not done[i] and dist[i] < best:
                    best = dist[i]
                    j = i
            total += best
            done[j] = 1
            for i in range(n):
                if not done[i]:
                    d = sqrt((pts[i, 0] - pts[j, 0]) ** 2 + (pts[i, 1] - pts[j, 1]) ** 2
                             + (pts[i, 2] - pts[j, 2]) ** 2)
                    if d < dist[i]:
                        dist[i] = d
    return total
