"""NumPy implementations of the raycast kernels.

These are the fallback backend; `tendbot._speedups` provides the same
functions compiled with Cython. Signatures and results must match exactly
(same arithmetic in double precision).
"""

from __future__ import annotations

import numpy as np

BACKEND = "numpy"

_EPS = 1e-12
_T_MIN = 1e-9


def rays_vs_triangles(origins, dirs, v0, v1, v2, max_range):
    """Nearest Moller-Trumbore hit per ray against a triangle soup.

    origins, dirs: (N, 3); v0, v1, v2: (M, 3).
    Returns (t, idx): t[i] is the hit distance or +inf, idx[i] the triangle
    index or -1. Ties go to the lowest triangle index.
    """
    origins = np.asarray(origins, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    n = origins.shape[0]
    m = v0.shape[0]
    t_best = np.full(n, np.inf)
    idx_best = np.full(n, -1, dtype=np.int64)
    if m == 0 or n == 0:
        return t_best, idx_best

    e1 = v1 - v0  # (M, 3)
    e2 = v2 - v0
    # broadcast rays against triangles: (N, M, 3)
    p = np.cross(dirs[:, None, :], e2[None, :, :])
    det = np.einsum("mk,nmk->nm", e1, p)
    ok = np.abs(det) > _EPS
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    s = origins[:, None, :] - v0[None, :, :]
    u = np.einsum("nmk,nmk->nm", s, p) * inv
    ok &= (u >= 0.0) & (u <= 1.0)
    q = np.cross(s, e1[None, :, :])
    v = np.einsum("nk,nmk->nm", dirs, q) * inv
    ok &= (v >= 0.0) & (u + v <= 1.0)
    t = np.einsum("mk,nmk->nm", e2, q) * inv
    ok &= (t > _T_MIN) & (t <= max_range)
    t = np.where(ok, t, np.inf)
    idx = np.argmin(t, axis=1)
    tmin = t[np.arange(n), idx]
    hit = np.isfinite(tmin)
    t_best[hit] = tmin[hit]
    idx_best[hit] = idx[hit]
    return t_best, idx_best


def rays_vs_spheres(origins, dirs, centers, radii, max_range):
    """Nearest ray/sphere hit per ray. Returns (t, idx) like rays_vs_triangles."""
    origins = np.asarray(origins, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    centers = np.asarray(centers, dtype=float)
    radii = np.asarray(radii, dtype=float)
    n = origins.shape[0]
    m = centers.shape[0]
    t_best = np.full(n, np.inf)
    idx_best = np.full(n, -1, dtype=np.int64)
    if m == 0 or n == 0:
        return t_best, idx_best

    oc = origins[:, None, :] - centers[None, :, :]  # (N, M, 3)
    b = np.einsum("nk,nmk->nm", dirs, oc)
    c = np.einsum("nmk,nmk->nm", oc, oc) - radii[None, :] ** 2
    disc = b * b - c
    ok = disc >= 0.0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    t0 = -b - sq
    t1 = -b + sq
    t = np.where(t0 > _T_MIN, t0, t1)
    ok &= (t > _T_MIN) & (t <= max_range)
    t = np.where(ok, t, np.inf)
    idx = np.argmin(t, axis=1)
    tmin = t[np.arange(n), idx]
    hit = np.isfinite(tmin)
    t_best[hit] = tmin[hit]
    idx_best[hit] = idx[hit]
    return t_best, idx_best


def rays_vs_cylinders(origins, dirs, centers_xy, radii, z0, z1, max_range):
    """Nearest hit per ray against vertical cylinders spanning z in [z0, z1].

    Side surface only (caps are irrelevant for planar beams and conservative
    for depth rays at desk scale). Returns (t, idx).
    """
    origins = np.asarray(origins, dtype=float)
    dirs = np.asarray(dirs, dtype=float)
    centers_xy = np.asarray(centers_xy, dtype=float)
    radii = np.asarray(radii, dtype=float)
    n = origins.shape[0]
    m = centers_xy.shape[0]
    t_best = np.full(n, np.inf)
    idx_best = np.full(n, -1, dtype=np.int64)
    if m == 0 or n == 0:
        return t_best, idx_best

    oxy = origins[:, None, :2] - centers_xy[None, :, :]  # (N, M, 2)
    dxy = dirs[:, :2]
    a = np.einsum("nk,nk->n", dxy, dxy)[:, None]
    b = np.einsum("nk,nmk->nm", dxy, oxy)
    c = np.einsum("nmk,nmk->nm", oxy, oxy) - radii[None, :] ** 2
    ok = np.broadcast_to(a > _EPS, b.shape).copy()
    disc = b * b - np.where(a > _EPS, a, 1.0) * c
    ok &= disc >= 0.0
    sq = np.sqrt(np.where(ok, disc, 0.0))
    inv_a = 1.0 / np.where(a > _EPS, a, 1.0)
    t0 = (-b - sq) * inv_a
    t1 = (-b + sq) * inv_a
    t = np.where(t0 > _T_MIN, t0, t1)
    z = origins[:, None, 2] + t * dirs[:, None, 2]
    ok &= (t > _T_MIN) & (t <= max_range) & (z >= z0) & (z <= z1)
    t = np.where(ok, t, np.inf)
    idx = np.argmin(t, axis=1)
    tmin = t[np.arange(n), idx]
    hit = np.isfinite(tmin)
    t_best[hit] = tmin[hit]
    idx_best[hit] = idx[hit]
    return t_best, idx_best


def min_dist_to_points(queries, points):
    """Per-query minimum Euclidean distance to a point set (brute force).

    queries: (Q, 3), points: (N, 3). Returns (Q,) distances (+inf if no points).
    """
    queries = np.asarray(queries, dtype=float)
    points = np.asarray(points, dtype=float)
    if points.shape[0] == 0 or queries.shape[0] == 0:
        return np.full(queries.shape[0], np.inf)
    out = np.empty(queries.shape[0])
    # chunk queries so the (q, N) distance block stays small
    chunk = max(1, int(4e6 // max(points.shape[0], 1)))
    for lo in range(0, queries.shape[0], chunk):
        q = queries[lo : lo + chunk]
        d2 = ((q[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
        out[lo : lo + chunk] = np.sqrt(d2.min(axis=1))
    return out
