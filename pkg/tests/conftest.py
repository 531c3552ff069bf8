import math

import numpy as np
import pytest

from tendbot.geometry import Pose2D, Transform3D
from tendbot.world import (
    DynamicObstacle,
    NoiseConfig,
    Part,
    RobotModel,
    Scene,
)


def box_polygon(cx, cy, w, h):
    return np.array(
        [
            [cx - w / 2, cy - h / 2],
            [cx + w / 2, cy - h / 2],
            [cx + w / 2, cy + h / 2],
            [cx - w / 2, cy + h / 2],
        ]
    )


def make_scene(
    floor=(0.0, 0.0, 10.0, 10.0),
    obstacles=(),
    machine_vertices=None,
    machine_triangles=None,
    part=None,
    dynamic=(),
):
    mv = np.zeros((0, 3)) if machine_vertices is None else np.asarray(machine_vertices, dtype=float)
    mt = np.zeros((0, 3), dtype=int) if machine_triangles is None else np.asarray(machine_triangles, dtype=int)
    return Scene(
        floor_bounds=tuple(float(v) for v in floor),
        static_obstacles=[np.asarray(o, dtype=float) for o in obstacles],
        machine_vertices=mv,
        machine_triangles=mt,
        part=part,
        dynamic_obstacles=list(dynamic),
    )


def default_robot(**overrides):
    kw = dict(
        base_radius=0.25,
        wheel_base=0.4,
        max_v=0.6,
        max_omega=1.2,
        max_accel=0.8,
        arm_mount=Transform3D(np.eye(3), np.array([0.0, 0.0, 0.35])),
        link_spheres=[],
    )
    kw.update(overrides)
    return RobotModel(**kw)


@pytest.fixture
def empty_scene():
    return make_scene()


@pytest.fixture
def wall_scene():
    # wall occupying x in [2, 2.2] across the y extent
    return make_scene(floor=(-5.0, -5.0, 5.0, 5.0), obstacles=[box_polygon(2.1, 0.0, 0.2, 9.0)])


@pytest.fixture
def robot():
    return default_robot()


@pytest.fixture
def noise_free():
    return NoiseConfig(
        odom_dist_frac=0.0,
        odom_dtheta_std=0.0,
        imu_yaw_rate_std=0.0,
        imu_bias=0.0,
        lidar_range_std=0.0,
        depth_sigma=0.0,
    )
