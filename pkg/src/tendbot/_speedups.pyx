# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled raycast kernels. Must mirror tendbot._kernels_np exactly."""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, sqrt

cnp.import_array()

BACKEND = "cython"

cdef double _EPS = 1e-12
cdef double _T_MIN = 1e-9


def rays_vs_triangles(origins, dirs, v0, v1, v2, double max_range):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] O = np.ascontiguousarray(origins, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] D = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] A = np.ascontiguousarray(v0, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] B = np.ascontiguousarray(v1, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(v2, dtype=np.float64)
    cdef Py_ssize_t n = O.shape[0]
    cdef Py_ssize_t m = A.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_best = np.full(n, np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx_best = np.full(n, -1, dtype=np.int64)
    if n == 0 or m == 0:
        return t_best, idx_best

    cdef Py_ssize_t i, j
    cdef double e1x, e1y, e1z, e2x, e2y, e2z
    cdef double px, py, pz, det, inv, sx, sy, sz, u, qx, qy, qz, v, t
    cdef double ox, oy, oz, dx, dy, dz

    for i in range(n):
        ox = O[i, 0]; oy = O[i, 1]; oz = O[i, 2]
        dx = D[i, 0]; dy = D[i, 1]; dz = D[i, 2]
        for j in range(m):
            e1x = B[j, 0] - A[j, 0]; e1y = B[j, 1] - A[j, 1]; e1z = B[j, 2] - A[j, 2]
            e2x = C[j, 0] - A[j, 0]; e2y = C[j, 1] - A[j, 1]; e2z = C[j, 2] - A[j, 2]
            px = dy * e2z - dz * e2y
            py = dz * e2x - dx * e2z
            pz = dx * e2y - dy * e2x
            det = e1x * px + e1y * py + e1z * pz
            if det > -_EPS and det < _EPS:
                continue
            inv = 1.0 / det
            sx = ox - A[j, 0]; sy = oy - A[j, 1]; sz = oz - A[j, 2]
            u = (sx * px + sy * py + sz * pz) * inv
            if u < 0.0 or u > 1.0:
                continue
            qx = sy * e1z - sz * e1y
            qy = sz * e1x - sx * e1z
            qz = sx * e1y - sy * e1x
            v = (dx * qx + dy * qy + dz * qz) * inv
            if v < 0.0 or u + v > 1.0:
                continue
            t = (e2x * qx + e2y * qy + e2z * qz) * inv
            if t > _T_MIN and t <= max_range and t < t_best[i]:
                t_best[i] = t
                idx_best[i] = j
    return t_best, idx_best


def rays_vs_spheres(origins, dirs, centers, radii, double max_range):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] O = np.ascontiguousarray(origins, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] D = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(centers, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] R = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t n = O.shape[0]
    cdef Py_ssize_t m = C.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_best = np.full(n, np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx_best = np.full(n, -1, dtype=np.int64)
    if n == 0 or m == 0:
        return t_best, idx_best

    cdef Py_ssize_t i, j
    cdef double ocx, ocy, ocz, b, c, disc, sq, t0, t1, t
    for i in range(n):
        for j in range(m):
            ocx = O[i, 0] - C[j, 0]
            ocy = O[i, 1] - C[j, 1]
            ocz = O[i, 2] - C[j, 2]
            b = D[i, 0] * ocx + D[i, 1] * ocy + D[i, 2] * ocz
            c = ocx * ocx + ocy * ocy + ocz * ocz - R[j] * R[j]
            disc = b * b - c
            if disc < 0.0:
                continue
            sq = sqrt(disc)
            t0 = -b - sq
            t1 = -b + sq
            t = t0 if t0 > _T_MIN else t1
            if t > _T_MIN and t <= max_range and t < t_best[i]:
                t_best[i] = t
                idx_best[i] = j
    return t_best, idx_best


def rays_vs_cylinders(origins, dirs, centers_xy, radii, double z0, double z1, double max_range):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] O = np.ascontiguousarray(origins, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] D = np.ascontiguousarray(dirs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] C = np.ascontiguousarray(centers_xy, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] R = np.ascontiguousarray(radii, dtype=np.float64)
    cdef Py_ssize_t n = O.shape[0]
    cdef Py_ssize_t m = C.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] t_best = np.full(n, np.inf)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx_best = np.full(n, -1, dtype=np.int64)
    if n == 0 or m == 0:
        return t_best, idx_best

    cdef Py_ssize_t i, j
    cdef double a, b, c, ocx, ocy, disc, sq, inv_a, t0, t1, t, z
    for i in range(n):
        a = D[i, 0] * D[i, 0] + D[i, 1] * D[i, 1]
        if a <= _EPS:
            continue
        inv_a = 1.0 / a
        for j in range(m):
            ocx = O[i, 0] - C[j, 0]
            ocy = O[i, 1] - C[j, 1]
            b = D[i, 0] * ocx + D[i, 1] * ocy
            c = ocx * ocx + ocy * ocy - R[j] * R[j]
            disc = b * b - a * c
            if disc < 0.0:
                continue
            sq = sqrt(disc)
            t0 = (-b - sq) * inv_a
            t1 = (-b + sq) * inv_a
            t = t0 if t0 > _T_MIN else t1
            if t <= _T_MIN or t > max_range or t >= t_best[i]:
                continue
            z = O[i, 2] + t * D[i, 2]
            if z < z0 or z > z1:
                continue
            t_best[i] = t
            idx_best[i] = j
    return t_best, idx_best


def min_dist_to_points(queries, points):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Q = np.ascontiguousarray(queries, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] P = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t nq = Q.shape[0]
    cdef Py_ssize_t npt = P.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.full(nq, np.inf)
    if nq == 0 or npt == 0:
        return out
    cdef Py_ssize_t i, j
    cdef double best, dx, dy, dz, d2
    for i in range(nq):
        best = INFINITY
        for j in range(npt):
            dx = Q[i, 0] - P[j, 0]
            dy = Q[i, 1] - P[j, 1]
            dz = Q[i, 2] - P[j, 2]
            d2 = dx * dx + dy * dy + dz * dz
            if d2 < best:
                best = d2
        out[i] = sqrt(best)
    return out
