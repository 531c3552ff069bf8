"""Differential-drive base simulation and the sensor models feeding it:
wheel odometry, yaw-rate IMU, and a planar lidar raycast against the scene.

All sensors draw from per-sensor seeded generators, so readings are
deterministic for a fixed seed regardless of interleaving between sensors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import Pose2D, normalize_angle
from .world import NoiseConfig, RobotModel, Scene, _raycast_batch

LIDAR_BEAMS = 360
LIDAR_MAX_RANGE = 8.0
LIDAR_HEIGHT = 0.2
NO_RETURN = float("inf")


@dataclass(frozen=True)
class BaseState:
    truth: Pose2D
    v: float = 0.0
    omega: float = 0.0


@dataclass(frozen=True)
class LidarScan:
    timestamp: float
    angle_min: float
    angle_max: float
    ranges: np.ndarray
    max_range: float = LIDAR_MAX_RANGE

    def bearings(self) -> np.ndarray:
        return np.linspace(self.angle_min, self.angle_max, len(self.ranges))


def step_base(state: BaseState, robot: RobotModel, cmd_v: float, cmd_omega: float, dt: float) -> BaseState:
    """Integrate one control step with exact arc geometry.

    The command is clamped to the velocity limits and the linear
    acceleration bound before integration.
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    v = max(-robot.max_v, min(robot.max_v, cmd_v))
    dv_max = robot.max_accel * dt
    v = max(state.v - dv_max, min(state.v + dv_max, v))
    omega = max(-robot.max_omega, min(robot.max_omega, cmd_omega))

    x, y, th = state.truth.x, state.truth.y, state.truth.theta
    if abs(omega) < 1e-6:
        x += v * math.cos(th) * dt
        y += v * math.sin(th) * dt
        th += omega * dt
    else:
        r = v / omega
        th1 = th + omega * dt
        x += r * (math.sin(th1) - math.sin(th))
        y += -r * (math.cos(th1) - math.cos(th))
        th = th1
    return BaseState(Pose2D(x, y, th), v, omega)


class SensorSuite:
    """Odometry, IMU, and lidar simulators with independent seeded RNGs."""

    def __init__(self, noise: NoiseConfig, seed: int = 0):
        self.noise = noise
        self._odom_rng = np.random.default_rng(np.random.SeedSequence([seed, 1]))
        self._imu_rng = np.random.default_rng(np.random.SeedSequence([seed, 2]))
        self._lidar_rng = np.random.default_rng(np.random.SeedSequence([seed, 3]))

    def read_odometry(self, state: BaseState, dt: float) -> dict:
        """Noisy distance/heading increments over the last step."""
        dist = state.v * dt
        dtheta = state.omega * dt
        dist_noisy = dist + self._odom_rng.normal(0.0, abs(dist) * self.noise.odom_dist_frac)
        dtheta_noisy = dtheta + self._odom_rng.normal(0.0, self.noise.odom_dtheta_std)
        return {"dv": dist_noisy, "dtheta": dtheta_noisy}

    def read_imu(self, state: BaseState, dt: float) -> dict:
        """Yaw rate with a constant bias plus white noise."""
        rate = state.omega + self.noise.imu_bias + self._imu_rng.normal(0.0, self.noise.imu_yaw_rate_std)
        return {"yaw_rate": rate}

    def simulate_lidar(self, scene: Scene, truth_pose: Pose2D, t: float) -> LidarScan:
        """360 beams at one-degree spacing in the sensor plane."""
        if not scene.contains(truth_pose.x, truth_pose.y):
            raise ValueError("lidar pose outside floor bounds")
        bearings = truth_pose.theta + np.arange(LIDAR_BEAMS) * (2 * math.pi / LIDAR_BEAMS) - math.pi
        origins = np.tile([truth_pose.x, truth_pose.y, LIDAR_HEIGHT], (LIDAR_BEAMS, 1))
        dirs = np.column_stack([np.cos(bearings), np.sin(bearings), np.zeros(LIDAR_BEAMS)])
        hits = _raycast_batch(scene, origins, dirs, LIDAR_MAX_RANGE, t=t)
        ranges = np.full(LIDAR_BEAMS, NO_RETURN)
        for i, h in enumerate(hits):
            if h is not None:
                r = h.distance + self._lidar_rng.normal(0.0, self.noise.lidar_range_std)
                ranges[i] = min(max(r, 1e-6), LIDAR_MAX_RANGE)
        return LidarScan(
            timestamp=t,
            angle_min=-math.pi,
            angle_max=-math.pi + (LIDAR_BEAMS - 1) * (2 * math.pi / LIDAR_BEAMS),
            ranges=ranges,
        )


def dead_reckon(pose: Pose2D, odom: dict) -> Pose2D:
    """Advance a pose by odometry increments (midpoint heading)."""
    th_mid = pose.theta + 0.5 * odom["dtheta"]
    return Pose2D(
        pose.x + odom["dv"] * math.cos(th_mid),
        pose.y + odom["dv"] * math.sin(th_mid),
        normalize_angle(pose.theta + odom["dtheta"]),
    )
