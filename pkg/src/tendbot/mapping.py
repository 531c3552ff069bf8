"""Log-odds occupancy grid built from lidar scans, with a lazily recomputed
inflation layer and a Euclidean distance field used by the band optimizer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .basesim import LidarScan
from .geometry import Pose2D

LOG_ODDS_CLAMP = 4.0
LOG_ODDS_HIT = 0.85
LOG_ODDS_FREE = -0.4
OCCUPIED_LO = math.log(0.65 / 0.35)
FREE_LO = math.log(0.35 / 0.65)


@dataclass
class OccupancyGrid:
    """2D log-odds map; origin is the world position of cell (0, 0)'s corner."""

    resolution: float
    origin: Pose2D
    log_odds: np.ndarray  # (rows, cols), row ~ y, col ~ x
    inflation_radius: float
    version: int = 0

    def __post_init__(self):
        self._cache_version = -1
        self._lethal = None
        self._dist_to_lethal = None

    @staticmethod
    def blank(width_m: float, height_m: float, resolution: float = 0.05,
              origin: Pose2D = Pose2D(0, 0, 0), inflation_radius: float = 0.5) -> "OccupancyGrid":
        cols = int(round(width_m / resolution))
        rows = int(round(height_m / resolution))
        return OccupancyGrid(resolution, origin, np.zeros((rows, cols)), inflation_radius)

    @property
    def shape(self):
        return self.log_odds.shape

    def world_to_cell(self, x: float, y: float):
        col = int(math.floor((x - self.origin.x) / self.resolution))
        row = int(math.floor((y - self.origin.y) / self.resolution))
        return row, col

    def cell_center(self, row: int, col: int):
        return (
            self.origin.x + (col + 0.5) * self.resolution,
            self.origin.y + (row + 0.5) * self.resolution,
        )

    def in_bounds(self, row: int, col: int) -> bool:
        return 0 <= row < self.shape[0] and 0 <= col < self.shape[1]

    # tri-state occupancy
    def probability(self, row: int, col: int) -> float:
        return 1.0 / (1.0 + math.exp(-self.log_odds[row, col]))

    def occupied_mask(self) -> np.ndarray:
        return self.log_odds > OCCUPIED_LO

    def free_mask(self) -> np.ndarray:
        return self.log_odds < FREE_LO

    def state(self, row: int, col: int) -> str:
        lo = self.log_odds[row, col]
        if lo > OCCUPIED_LO:
            return "occupied"
        if lo < FREE_LO:
            return "free"
        return "unknown"

    # inflation layer, recomputed lazily per version
    def _refresh_cache(self):
        if self._cache_version == self.version:
            return
        occ = self.occupied_mask()
        if occ.any():
            d_occ = ndimage.distance_transform_edt(~occ) * self.resolution
        else:
            d_occ = np.full(self.shape, np.inf)
        lethal = d_occ <= self.inflation_radius
        if lethal.any():
            dist = ndimage.distance_transform_edt(~lethal) * self.resolution
        else:
            dist = np.full(self.shape, np.inf)
        self._lethal = lethal
        self._dist_to_lethal = dist
        self._cache_version = self.version

    def lethal_mask(self) -> np.ndarray:
        self._refresh_cache()
        return self._lethal

    def is_lethal(self, row: int, col: int) -> bool:
        return bool(self.lethal_mask()[row, col])

    def traversable(self, row: int, col: int) -> bool:
        return self.in_bounds(row, col) and not self.is_lethal(row, col)

    def distance_field(self) -> np.ndarray:
        """Per-cell Euclidean distance (m) to the nearest lethal cell."""
        self._refresh_cache()
        return self._dist_to_lethal

    def clearance_at(self, x: float, y: float) -> float:
        """Bilinear sample of the distance field at world coordinates."""
        d = self.distance_field()
        if not np.isfinite(d).any():
            return float("inf")
        cx = (x - self.origin.x) / self.resolution - 0.5
        cy = (y - self.origin.y) / self.resolution - 0.5
        c0 = int(math.floor(cx))
        r0 = int(math.floor(cy))
        fx, fy = cx - c0, cy - r0
        rows, cols = self.shape
        c0 = max(0, min(cols - 2, c0))
        r0 = max(0, min(rows - 2, r0))
        fx = max(0.0, min(1.0, fx))
        fy = max(0.0, min(1.0, fy))
        top = d[r0, c0] * (1 - fx) + d[r0, c0 + 1] * fx
        bot = d[r0 + 1, c0] * (1 - fx) + d[r0 + 1, c0 + 1] * fx
        return float(top * (1 - fy) + bot * fy)

    def copy(self) -> "OccupancyGrid":
        g = OccupancyGrid(
            self.resolution, self.origin, self.log_odds.copy(), self.inflation_radius, self.version
        )
        return g


def _bresenham(r0: int, c0: int, r1: int, c1: int):
    """Integer cells on the segment from (r0, c0) to (r1, c1), inclusive."""
    cells = []
    dr = abs(r1 - r0)
    dc = abs(c1 - c0)
    sr = 1 if r1 >= r0 else -1
    sc = 1 if c1 >= c0 else -1
    err = dc - dr
    r, c = r0, c0
    while True:
        cells.append((r, c))
        if r == r1 and c == c1:
            break
        e2 = 2 * err
        if e2 > -dr:
            err -= dr
            c += sc
        if e2 < dc:
            err += dc
            r += sr
    return cells


def update_map(grid: OccupancyGrid, scan: LidarScan, est_pose: Pose2D) -> OccupancyGrid:
    """Apply the inverse sensor model for one scan (in place; returns grid)."""
    lo = grid.log_odds
    r0, c0 = grid.world_to_cell(est_pose.x, est_pose.y)
    bearings = est_pose.theta + scan.bearings()
    for rng, b in zip(scan.ranges, bearings):
        hit = np.isfinite(rng) and rng < scan.max_range - 1e-9
        reach = rng if hit else scan.max_range
        ex = est_pose.x + reach * math.cos(b)
        ey = est_pose.y + reach * math.sin(b)
        r1, c1 = grid.world_to_cell(ex, ey)
        cells = _bresenham(r0, c0, r1, c1)
        body = cells[:-1] if hit else cells
        for (r, c) in body:
            if grid.in_bounds(r, c):
                lo[r, c] = max(-LOG_ODDS_CLAMP, lo[r, c] + LOG_ODDS_FREE)
        if hit:
            r, c = cells[-1]
            if grid.in_bounds(r, c):
                lo[r, c] = min(LOG_ODDS_CLAMP, lo[r, c] + LOG_ODDS_HIT)
    grid.version += 1
    return grid


def _points_in_polygon(xs: np.ndarray, ys: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Even-odd rule point-in-polygon test, vectorized over points."""
    inside = np.zeros(xs.shape, dtype=bool)
    n = len(poly)
    j = n - 1
    for i in range(n):
        xi, yi = poly[i]
        xj, yj = poly[j]
        crosses = ((yi > ys) != (yj > ys)) & (
            xs < (xj - xi) * (ys - yi) / (yj - yi + 1e-300) + xi
        )
        inside ^= crosses
        j = i
    return inside


def rasterize_scene(scene, resolution: float = 0.05, inflation_radius: float = 0.5) -> OccupancyGrid:
    """Ground-truth grid: cells whose centers fall inside any obstacle polygon
    are set fully occupied, everything else fully free."""
    x0, y0, x1, y1 = scene.floor_bounds
    grid = OccupancyGrid.blank(x1 - x0, y1 - y0, resolution, Pose2D(x0, y0, 0), inflation_radius)
    rows, cols = grid.shape
    cc, rr = np.meshgrid(np.arange(cols), np.arange(rows))
    xs = x0 + (cc + 0.5) * resolution
    ys = y0 + (rr + 0.5) * resolution
    occ = np.zeros((rows, cols), dtype=bool)
    for poly in scene.static_obstacles:
        occ |= _points_in_polygon(xs, ys, np.asarray(poly))
    grid.log_odds = np.where(occ, LOG_ODDS_CLAMP, -LOG_ODDS_CLAMP).astype(float)
    grid.version += 1
    return grid
