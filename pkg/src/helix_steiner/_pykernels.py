"""Pure-Python kernels. Mirrors ``_ckernels.pyx`` one-for-one."""

import math

import numpy as np

_WIDE = 2.0 * math.pi / 3.0
_THIRD_PI = math.pi / 3.0


def _angle(px, py, pz, qx, qy, qz, rx, ry, rz):
    ux, uy, uz = qx - px, qy - py, qz - pz
    vx, vy, vz = rx - px, ry - py, rz - pz
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), ux * vx + uy * vy + uz * vz)


def fermat3(p, q, r):
    """Fermat point of three 3-vectors; returns ``(x, y, z, degenerate)``."""
    px, py, pz = p
    qx, qy, qz = q
    rx, ry, rz = r
    a = math.sqrt((qx - rx) ** 2 + (qy - ry) ** 2 + (qz - rz) ** 2)
    b = math.sqrt((px - rx) ** 2 + (py - ry) ** 2 + (pz - rz) ** 2)
    c = math.sqrt((px - qx) ** 2 + (py - qy) ** 2 + (pz - qz) ** 2)
    tiny = 1e-300 + 1e-15 * max(a, b, c)
    # coincident pair: the duplicate carries weight two and wins
    if c <= tiny or b <= tiny:
        return px, py, pz, True
    if a <= tiny:
        return qx, qy, qz, True
    A = _angle(px, py, pz, qx, qy, qz, rx, ry, rz)
    if A >= _WIDE:
        return px, py, pz, True
    B = _angle(qx, qy, qz, px, py, pz, rx, ry, rz)
    if B >= _WIDE:
        return qx, qy, qz, True
    C = math.pi - A - B
    if C >= _WIDE:
        return rx, ry, rz, True
    # barycentric weights of the first isogonic centre
    wa = a / math.sin(A + _THIRD_PI)
    wb = b / math.sin(B + _THIRD_PI)
    wc = c / math.sin(C + _THIRD_PI)
    s = wa + wb + wc
    return (
        (wa * px + wb * qx + wc * rx) / s,
        (wa * py + wb * qy + wc * ry) / s,
        (wa * pz + wb * qz + wc * rz) / s,
        False,
    )


def sweep(terminals, steiner, degenerate):
    """One Gauss-Seidel pass over the 3-sausage; returns the largest move."""
    n = terminals.shape[0]
    T = terminals.tolist()
    S = steiner.tolist()
    last = n - 3
    worst = 0.0
    for k in range(n - 2):
        left = T[0] if k == 0 else S[k - 1]
        right = T[n - 1] if k == last else S[k + 1]
        x, y, z, flag = fermat3(left, T[k + 1], right)
        old = S[k]
        d = math.sqrt((x - old[0]) ** 2 + (y - old[1]) ** 2 + (z - old[2]) ** 2)
        if d > worst:
            worst = d
        S[k] = [x, y, z]
        degenerate[k] = flag
    steiner[:] = S
    return worst


def mst_length(points):
    """Prim's algorithm on the complete Euclidean graph, O(n^2)."""
    pts = np.ascontiguousarray(points, dtype=float)
    n = pts.shape[0]
    if n < 2:
        return 0.0
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    dist = np.sqrt(((pts - pts[0]) ** 2).sum(axis=1))
    dist[0] = np.inf
    total = 0.0
    for _ in range(n - 1):
        j = int(np.argmin(dist))
        total += float(dist[j])
        in_tree[j] = True
        dist[j] = np.inf
        dj = np.sqrt(((pts - pts[j]) ** 2).sum(axis=1))
        np.minimum(dist, np.where(in_tree, np.inf, dj), out=dist)
    return total
