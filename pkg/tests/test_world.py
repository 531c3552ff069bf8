import json
import math

import numpy as np
import pytest

from tendbot.errors import ScenarioError
from tendbot.geometry import Transform3D
from tendbot.world import (
    DynamicObstacle,
    Part,
    dynamic_obstacle_pose,
    load_scenario,
    raycast,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)

from conftest import box_polygon, make_scene


MINIMAL = {
    "floor": [0, 0, 10, 10],
    "obstacles": [],
    "robot": {
        "base_radius": 0.25,
        "wheel_base": 0.4,
        "max_v": 0.6,
        "max_omega": 1.2,
        "max_accel": 0.8,
    },
    "start_pose": {"x": 1.0, "y": 1.0, "theta": 0.0},
}


def test_minimal_scenario(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(json.dumps(MINIMAL))
    sc = load_scenario(p)
    assert sc.scene.static_obstacles == []
    assert sc.scene.floor_bounds == (0.0, 0.0, 10.0, 10.0)
    assert sc.start.x == 1.0


def test_self_intersecting_polygon_rejected(tmp_path):
    bad = dict(MINIMAL)
    bad["obstacles"] = [
        {"vertices": [[0, 0], [1, 1], [1, 0], [0, 1]]},  # bowtie
    ]
    p = tmp_path / "s.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(ScenarioError, match=r"obstacles\[0\]"):
        load_scenario(p)


def test_parse_error_reports_line(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{\n  bad json\n}")
    with pytest.raises(ScenarioError, match="line"):
        load_scenario(p)


def test_printer_cell_fixture_counts():
    from tendbot.scenarios import scenario_path

    sc = load_scenario(scenario_path("printer_cell"))
    assert len(sc.scene.machine_triangles) > 0
    assert sc.scene.part is not None
    # two free-standing tables plus four perimeter walls
    tables = [o for o in sc.scene.static_obstacles if np.ptp(o[:, 0]) < 4.0 and np.ptp(o[:, 1]) < 4.0]
    assert len(tables) == 2


def test_scenario_round_trip(tmp_path):
    from tendbot.scenarios import scenario_path

    sc = load_scenario(scenario_path("printer_cell"))
    out = tmp_path / "copy.json"
    save_scenario(sc, out)
    sc2 = load_scenario(out)
    assert scenario_to_dict(sc) == scenario_to_dict(sc2)


def test_raycast_wall_plane(wall_scene):
    hit = raycast(wall_scene, np.array([0.0, 0.0, 0.5]), np.array([1.0, 0.0, 0.0]), 10.0)
    assert hit is not None
    assert hit.distance == pytest.approx(2.0, abs=1e-9)
    assert np.allclose(hit.normal, [-1.0, 0.0, 0.0], atol=1e-9)
    assert np.allclose(hit.point, [2.0, 0.0, 0.5], atol=1e-9)


def test_raycast_miss(wall_scene):
    assert raycast(wall_scene, np.array([0.0, 0.0, 0.5]), np.array([-1.0, 0.0, 0.0]), 10.0) is None


def test_raycast_requires_unit_direction(wall_scene):
    with pytest.raises(ValueError):
        raycast(wall_scene, np.zeros(3), np.array([2.0, 0.0, 0.0]), 10.0)


def _moller_trumbore(origin, d, a, b, c):
    e1, e2 = b - a, c - a
    p = np.cross(d, e2)
    det = e1 @ p
    if abs(det) < 1e-12:
        return None
    inv = 1.0 / det
    s = origin - a
    u = (s @ p) * inv
    if u < 0 or u > 1:
        return None
    q = np.cross(s, e1)
    v = (d @ q) * inv
    if v < 0 or u + v > 1:
        return None
    t = (e2 @ q) * inv
    return t if t > 1e-9 else None


def test_raycast_matches_bruteforce_oracle():
    rng = np.random.default_rng(42)
    scene = make_scene(
        floor=(-5, -5, 5, 5),
        obstacles=[box_polygon(2.0, 0.0, 1.0, 1.0), box_polygon(-1.5, 1.5, 0.8, 2.0)],
        machine_vertices=[[0, -2, 0], [1, -2, 0], [0.5, -2, 1.0], [0, -3, 0.2], [1, -3, 0.2], [0.5, -3, 1.2]],
        machine_triangles=[[0, 1, 2], [3, 4, 5]],
        part=Part(Transform3D(np.eye(3), np.array([0.0, 0.0, 0.5])), 0.2),
    )
    v0, v1, v2 = scene.triangle_soup()
    max_range = 12.0
    for _ in range(1000):
        origin = rng.uniform(-4, 4, 3) * np.array([1, 1, 0.3]) + np.array([0, 0, 0.6])
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        # oracle: every triangle, then the sphere
        best = math.inf
        for i in range(len(v0)):
            t = _moller_trumbore(origin, d, v0[i], v1[i], v2[i])
            if t is not None and t <= max_range:
                best = min(best, t)
        oc = origin - scene.part.pose.translation
        bq = oc @ d
        cq = oc @ oc - scene.part.radius**2
        disc = bq * bq - cq
        if disc >= 0:
            for t in (-bq - math.sqrt(disc), -bq + math.sqrt(disc)):
                if 1e-9 < t <= max_range:
                    best = min(best, t)
                    break
        hit = raycast(scene, origin, d, max_range)
        if math.isinf(best):
            assert hit is None
        else:
            assert hit is not None
            assert hit.distance == pytest.approx(best, abs=1e-9)
            assert np.allclose(hit.point, origin + best * d, atol=1e-9)


def test_raycast_point_on_ray_invariant():
    scene = make_scene(obstacles=[box_polygon(3.0, 3.0, 1.0, 1.0)])
    hit = raycast(scene, np.array([0.0, 3.0, 0.5]), np.array([1.0, 0.0, 0.0]), 10.0)
    assert hit is not None
    assert 0 < hit.distance <= 10.0
    assert np.linalg.norm(hit.point - (np.array([0.0, 3.0, 0.5]) + hit.distance * np.array([1, 0, 0]))) < 1e-9


def _dyn(name="d0"):
    return DynamicObstacle(name, 0.3, np.array([[0.0, 1.0, 1.0], [2.0, 3.0, 1.0], [4.0, 3.0, 5.0]]))


def test_dynamic_obstacle_interpolation():
    scene = make_scene(dynamic=[_dyn()])
    assert np.allclose(dynamic_obstacle_pose(scene, 0, 0.0), [1.0, 1.0])
    assert np.allclose(dynamic_obstacle_pose(scene, 0, 1.0), [2.0, 1.0])  # midpoint
    assert np.allclose(dynamic_obstacle_pose(scene, 0, 99.0), [3.0, 5.0])  # clamp
    assert np.allclose(dynamic_obstacle_pose(scene, "d0", 3.0), [3.0, 3.0])


def test_dynamic_obstacle_unknown_id():
    scene = make_scene(dynamic=[_dyn()])
    with pytest.raises(KeyError):
        dynamic_obstacle_pose(scene, 5, 0.0)
    with pytest.raises(KeyError):
        dynamic_obstacle_pose(scene, "nope", 0.0)
    with pytest.raises(ValueError):
        dynamic_obstacle_pose(scene, 0, -1.0)
