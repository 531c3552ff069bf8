"""Ground-truth scene: geometry the simulated sensors perceive.

Obstacles are simple 2D polygons extruded to a fixed 1.0 m height for 3D
sensing; the machine is a triangle mesh; the part is a sphere. Dynamic
obstacles are scripted discs interpolated over time. The scene is immutable
after load, so sensor queries are safe from any thread.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ScenarioError
from .geometry import Pose2D, Transform3D

OBSTACLE_HEIGHT = 1.0


@dataclass(frozen=True)
class RayHit:
    distance: float
    point: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class DynamicObstacle:
    name: str
    radius: float
    waypoints: np.ndarray  # (K, 3) rows of (t, x, y), t strictly increasing

    def position(self, t: float) -> np.ndarray:
        w = self.waypoints
        if t <= w[0, 0]:
            return w[0, 1:].copy()
        if t >= w[-1, 0]:
            return w[-1, 1:].copy()
        i = int(np.searchsorted(w[:, 0], t, side="right")) - 1
        t0, t1 = w[i, 0], w[i + 1, 0]
        a = (t - t0) / (t1 - t0)
        return (1.0 - a) * w[i, 1:] + a * w[i + 1, 1:]


@dataclass(frozen=True)
class Part:
    pose: Transform3D
    radius: float


@dataclass(frozen=True)
class Scene:
    floor_bounds: tuple  # (xmin, ymin, xmax, ymax)
    static_obstacles: list  # list of (K, 2) float arrays
    machine_vertices: np.ndarray  # (V, 3)
    machine_triangles: np.ndarray  # (T, 3) int
    part: Part | None
    dynamic_obstacles: list
    _tri_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def triangle_soup(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All static triangles (mesh + extruded obstacles) as (v0, v1, v2)."""
        if "soup" not in self._tri_cache:
            tris = []
            if len(self.machine_triangles):
                v = self.machine_vertices
                f = self.machine_triangles
                tris.append((v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]))
            for poly in self.static_obstacles:
                w0, w1, w2 = _extrude_polygon(poly, OBSTACLE_HEIGHT)
                tris.append((w0, w1, w2))
            if tris:
                v0 = np.vstack([t[0] for t in tris])
                v1 = np.vstack([t[1] for t in tris])
                v2 = np.vstack([t[2] for t in tris])
            else:
                v0 = v1 = v2 = np.zeros((0, 3))
            self._tri_cache["soup"] = (v0, v1, v2)
        return self._tri_cache["soup"]

    def dynamic_snapshot(self, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Disc centers (K, 2) and radii (K,) at time t."""
        if not self.dynamic_obstacles:
            return np.zeros((0, 2)), np.zeros(0)
        centers = np.array([d.position(t) for d in self.dynamic_obstacles])
        radii = np.array([d.radius for d in self.dynamic_obstacles])
        return centers, radii

    def contains(self, x: float, y: float) -> bool:
        x0, y0, x1, y1 = self.floor_bounds
        return x0 <= x <= x1 and y0 <= y <= y1


@dataclass(frozen=True)
class RobotModel:
    base_radius: float
    wheel_base: float
    max_v: float
    max_omega: float
    max_accel: float
    arm_mount: Transform3D
    link_spheres: list  # per link: list of (offset (3,), radius)

    def __post_init__(self):
        for name in ("base_radius", "wheel_base", "max_v", "max_omega", "max_accel"):
            if getattr(self, name) <= 0:
                raise ScenarioError(f"robot.{name} must be > 0")
        for li, spheres in enumerate(self.link_spheres):
            for si, (_, r) in enumerate(spheres):
                if r <= 0:
                    raise ScenarioError(f"robot.link_spheres[{li}][{si}].radius must be > 0")


@dataclass(frozen=True)
class NoiseConfig:
    odom_dist_frac: float = 0.01  # fraction of traveled distance
    odom_dtheta_std: float = math.radians(0.5)  # per step
    imu_yaw_rate_std: float = 0.005
    imu_bias: float = 0.002
    lidar_range_std: float = 0.01
    depth_sigma: float = 0.002


@dataclass(frozen=True)
class Scenario:
    scene: Scene
    robot: RobotModel
    arm: "object"  # ArmModel; typed loosely to avoid an import cycle
    start: Pose2D
    noise: NoiseConfig
    seed: int = 0


def raycast(scene: Scene, origin, direction, max_range: float, t: float | None = None):
    """Nearest intersection with the scene, or None on a miss.

    Checks machine mesh triangles, extruded obstacle polygons, the part
    sphere, and (when t is given) dynamic obstacles as vertical cylinders.
    The returned normal faces the origin side.
    """
    origin = np.asarray(origin, dtype=float)
    direction = np.asarray(direction, dtype=float)
    if abs(np.linalg.norm(direction) - 1.0) > 1e-9:
        raise ValueError("raycast direction must be a unit vector")
    if max_range <= 0:
        raise ValueError("max_range must be > 0")
    hits = _raycast_batch(scene, origin[None, :], direction[None, :], max_range, t)
    return hits[0]


def _raycast_batch(scene: Scene, origins, dirs, max_range, t=None):
    """Vectorized raycast used by the sensor simulators."""
    n = origins.shape[0]
    best_t = np.full(n, np.inf)
    best_normal = np.zeros((n, 3))

    v0, v1, v2 = scene.triangle_soup()
    if len(v0):
        tt, idx = kernels.rays_vs_triangles(origins, dirs, v0, v1, v2, max_range)
        better = tt < best_t
        if better.any():
            e1 = v1[idx[better]] - v0[idx[better]]
            e2 = v2[idx[better]] - v0[idx[better]]
            nrm = np.cross(e1, e2)
            nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
            best_t[better] = tt[better]
            best_normal[better] = nrm

    if scene.part is not None:
        c = scene.part.pose.translation[None, :]
        r = np.array([scene.part.radius])
        tt, _ = kernels.rays_vs_spheres(origins, dirs, c, r, max_range)
        better = tt < best_t
        if better.any():
            pts = origins[better] + tt[better, None] * dirs[better]
            nrm = pts - c
            nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
            best_t[better] = tt[better]
            best_normal[better] = nrm

    if t is not None and scene.dynamic_obstacles:
        centers, radii = scene.dynamic_snapshot(t)
        tt, idx = kernels.rays_vs_cylinders(
            origins, dirs, centers, radii, 0.0, OBSTACLE_HEIGHT, max_range
        )
        better = tt < best_t
        if better.any():
            pts = origins[better] + tt[better, None] * dirs[better]
            nrm = np.zeros((int(better.sum()), 3))
            nrm[:, :2] = pts[:, :2] - centers[idx[better]]
            nrm /= np.linalg.norm(nrm, axis=1, keepdims=True)
            best_t[better] = tt[better]
            best_normal[better] = nrm

    out = []
    for i in range(n):
        if not np.isfinite(best_t[i]):
            out.append(None)
            continue
        nrm = best_normal[i]
        if np.dot(nrm, dirs[i]) > 0:
            nrm = -nrm
        out.append(RayHit(float(best_t[i]), origins[i] + best_t[i] * dirs[i], nrm))
    return out


def dynamic_obstacle_pose(scene: Scene, obstacle_id, t: float) -> np.ndarray:
    """Disc center at time t; id is an index or the obstacle's name."""
    if t < 0:
        raise ValueError("t must be >= 0")
    if isinstance(obstacle_id, str):
        for d in scene.dynamic_obstacles:
            if d.name == obstacle_id:
                return d.position(t)
        raise KeyError(f"unknown dynamic obstacle {obstacle_id!r}")
    if not 0 <= obstacle_id < len(scene.dynamic_obstacles):
        raise KeyError(f"unknown dynamic obstacle index {obstacle_id}")
    return scene.dynamic_obstacles[obstacle_id].position(t)


# --- polygon helpers -------------------------------------------------------


def _segments_intersect(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(p3, p4, p1)
    d2 = orient(p3, p4, p2)
    d3 = orient(p1, p2, p3)
    d4 = orient(p1, p2, p4)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True
    return False


def polygon_is_simple(poly: np.ndarray) -> bool:
    n = len(poly)
    if n < 3:
        return False
    for i in range(n):
        a1, a2 = poly[i], poly[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_intersect(a1, a2, poly[j], poly[(j + 1) % n]):
                return False
    return True


def _signed_area(poly: np.ndarray) -> float:
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _ear_clip(poly: np.ndarray) -> list:
    """Triangulate a simple polygon (CCW) by ear clipping."""
    idx = list(range(len(poly)))
    tris = []
    guard = 0
    while len(idx) > 3 and guard < 10000:
        guard += 1
        n = len(idx)
        for k in range(n):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % n]
            a, b, c = poly[i0], poly[i1], poly[i2]
            cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
            if cross <= 1e-12:
                continue
            ear = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if _point_in_triangle(poly[j], a, b, c):
                    ear = False
                    break
            if ear:
                tris.append((i0, i1, i2))
                idx.pop(k)
                break
        else:
            break
    if len(idx) == 3:
        tris.append(tuple(idx))
    return tris


def _point_in_triangle(p, a, b, c) -> bool:
    def sgn(p1, p2, p3):
        return (p1[0] - p3[0]) * (p2[1] - p3[1]) - (p2[0] - p3[0]) * (p1[1] - p3[1])

    d1, d2, d3 = sgn(p, a, b), sgn(p, b, c), sgn(p, c, a)
    neg = (d1 < 0) or (d2 < 0) or (d3 < 0)
    pos = (d1 > 0) or (d2 > 0) or (d3 > 0)
    return not (neg and pos)


def _extrude_polygon(poly: np.ndarray, height: float):
    """Walls plus top/bottom caps of a polygon extruded from z=0 to height."""
    p = np.asarray(poly, dtype=float)
    if _signed_area(p) < 0:
        p = p[::-1]
    n = len(p)
    lo = np.column_stack([p, np.zeros(n)])
    hi = np.column_stack([p, np.full(n, height)])
    v0, v1, v2 = [], [], []
    for i in range(n):
        j = (i + 1) % n
        # wall quad split into two triangles
        v0 += [lo[i], lo[i]]
        v1 += [lo[j], hi[j]]
        v2 += [hi[j], hi[i]]
    for (a, b, c) in _ear_clip(p):
        v0 += [hi[a], lo[a]]
        v1 += [hi[b], lo[c]]
        v2 += [hi[c], lo[b]]
    return np.array(v0), np.array(v1), np.array(v2)


# --- scenario IO -----------------------------------------------------------


def _require(d: dict, key: str, ctx: str):
    if key not in d:
        raise ScenarioError(f"{ctx}: missing required field '{key}'")
    return d[key]


def load_scenario(path) -> Scenario:
    """Load and validate a scenario JSON file."""
    try:
        with open(path) as f:
            raw = json.load(f)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: parse error at line {exc.lineno} col {exc.colno}: {exc.msg}")
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    from .arm import ArmModel  # local import: arm depends on geometry only

    floor = _require(raw, "floor", "scenario")
    if len(floor) != 4 or floor[2] <= floor[0] or floor[3] <= floor[1]:
        raise ScenarioError("floor: expected [xmin, ymin, xmax, ymax] with positive extent")

    obstacles = []
    for i, ob in enumerate(raw.get("obstacles", [])):
        verts = np.asarray(_require(ob, "vertices", f"obstacles[{i}]"), dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 3:
            raise ScenarioError(f"obstacles[{i}].vertices: expected (>=3, 2) array")
        if not polygon_is_simple(verts):
            raise ScenarioError(f"obstacles[{i}]: polygon is self-intersecting")
        obstacles.append(verts)

    mesh = raw.get("machine_mesh") or {"vertices": [], "triangles": []}
    mv = np.asarray(mesh.get("vertices", []), dtype=float).reshape(-1, 3)
    mt = np.asarray(mesh.get("triangles", []), dtype=int).reshape(-1, 3)
    if len(mt) and (mt.min() < 0 or mt.max() >= len(mv)):
        raise ScenarioError("machine_mesh.triangles: vertex index out of range")

    part = None
    if raw.get("part") is not None:
        pd = raw["part"]
        radius = float(_require(pd, "radius", "part"))
        if radius <= 0:
            raise ScenarioError("part.radius must be > 0")
        part = Part(Transform3D.from_dict(_require(pd, "pose", "part")), radius)

    dyn = []
    for i, d in enumerate(raw.get("dynamic_obstacles", [])):
        r = float(_require(d, "radius", f"dynamic_obstacles[{i}]"))
        if r <= 0:
            raise ScenarioError(f"dynamic_obstacles[{i}].radius must be > 0")
        w = np.asarray(_require(d, "waypoints", f"dynamic_obstacles[{i}]"), dtype=float)
        if w.ndim != 2 or w.shape[1] != 3 or len(w) < 1:
            raise ScenarioError(f"dynamic_obstacles[{i}].waypoints: expected rows of (t, x, y)")
        if len(w) > 1 and not np.all(np.diff(w[:, 0]) > 0):
            raise ScenarioError(f"dynamic_obstacles[{i}].waypoints: times must strictly increase")
        dyn.append(DynamicObstacle(d.get("name", str(i)), r, w))

    scene = Scene(tuple(float(v) for v in floor), obstacles, mv, mt, part, dyn)

    rb = _require(raw, "robot", "scenario")
    link_spheres = []
    for link in rb.get("link_spheres", []):
        link_spheres.append([(np.asarray(s["center"], dtype=float), float(s["radius"])) for s in link])
    robot = RobotModel(
        base_radius=float(_require(rb, "base_radius", "robot")),
        wheel_base=float(_require(rb, "wheel_base", "robot")),
        max_v=float(_require(rb, "max_v", "robot")),
        max_omega=float(_require(rb, "max_omega", "robot")),
        max_accel=float(_require(rb, "max_accel", "robot")),
        arm_mount=Transform3D.from_dict(rb["arm_mount"]) if "arm_mount" in rb else Transform3D.identity(),
        link_spheres=link_spheres,
    )

    arm = ArmModel.from_dict(raw["arm"]) if "arm" in raw else ArmModel.ur5_default()

    start = Pose2D.from_dict(_require(raw, "start_pose", "scenario"))
    noise = NoiseConfig(**raw.get("noise", {}))
    return Scenario(scene, robot, arm, start, noise, seed=int(raw.get("seed", 0)))


def scenario_to_dict(sc: Scenario) -> dict:
    scene = sc.scene
    out = {
        "floor": list(scene.floor_bounds),
        "obstacles": [{"vertices": p.tolist()} for p in scene.static_obstacles],
        "machine_mesh": {
            "vertices": scene.machine_vertices.tolist(),
            "triangles": scene.machine_triangles.tolist(),
        },
        "part": None
        if scene.part is None
        else {"pose": scene.part.pose.as_dict(), "radius": scene.part.radius},
        "dynamic_obstacles": [
            {"name": d.name, "radius": d.radius, "waypoints": d.waypoints.tolist()}
            for d in scene.dynamic_obstacles
        ],
        "robot": {
            "base_radius": sc.robot.base_radius,
            "wheel_base": sc.robot.wheel_base,
            "max_v": sc.robot.max_v,
            "max_omega": sc.robot.max_omega,
            "max_accel": sc.robot.max_accel,
            "arm_mount": sc.robot.arm_mount.as_dict(),
            "link_spheres": [
                [{"center": c.tolist(), "radius": r} for (c, r) in link]
                for link in sc.robot.link_spheres
            ],
        },
        "arm": sc.arm.as_dict(),
        "start_pose": sc.start.as_dict(),
        "noise": {
            "odom_dist_frac": sc.noise.odom_dist_frac,
            "odom_dtheta_std": sc.noise.odom_dtheta_std,
            "imu_yaw_rate_std": sc.noise.imu_yaw_rate_std,
            "imu_bias": sc.noise.imu_bias,
            "lidar_range_std": sc.noise.lidar_range_std,
            "depth_sigma": sc.noise.depth_sigma,
        },
        "seed": sc.seed,
    }
    return out


def save_scenario(sc: Scenario, path) -> None:
    with open(path, "w") as f:
        json.dump(scenario_to_dict(sc), f, indent=2)
