"""6-DOF serial arm kinematics: FK, closed-form IK enumeration for UR-style
geometry, distance-ranked solution sorting, and tool-frame Cartesian jogs.

DH convention: T_i = Rz(theta_i) * Tz(d_i) * Tx(a_i) * Rx(alpha_i).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import JointLimit, NoConverge, Singular
from .geometry import Transform3D, normalize_angle

# kinematic constants of a UR5 with all-zero joint offsets
UR5_D = (0.089159, 0.0, 0.0, 0.10915, 0.09465, 0.0823)
UR5_A = (0.0, -0.425, -0.39225, 0.0, 0.0, 0.0)
UR5_ALPHA = (math.pi / 2, 0.0, 0.0, math.pi / 2, -math.pi / 2, 0.0)

DUPLICATE_TOL = 1e-4
FK_POS_TOL = 1e-6
FK_ROT_TOL = 1e-6


def _dh_matrix(a: float, d: float, alpha: float, theta: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, d],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


@dataclass(frozen=True)
class ArmModel:
    """DH parameters, joint limits, and the tool/camera mounting offsets."""

    a: tuple
    d: tuple
    alpha: tuple
    limits: np.ndarray = field(
        default_factory=lambda: np.array([[-2 * math.pi, 2 * math.pi]] * 6)
    )
    tool_offset: Transform3D = field(default_factory=Transform3D.identity)
    camera_offset: Transform3D = field(default_factory=Transform3D.identity)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "limits", np.asarray(self.limits, dtype=float).reshape(6, 2))

    @staticmethod
    def ur5_default() -> "ArmModel":
        return ArmModel(
            UR5_A,
            UR5_D,
            UR5_ALPHA,
            tool_offset=Transform3D(np.eye(3), np.array([0.0, 0.0, 0.12])),
            camera_offset=Transform3D(np.eye(3), np.array([0.05, 0.0, 0.02])),
        )

    def total_reach(self) -> float:
        return float(sum(abs(v) for v in self.a) + sum(abs(v) for v in self.d))

    def within_limits(self, q) -> bool:
        q = np.asarray(q, dtype=float)
        return bool(np.all(q >= self.limits[:, 0] - 1e-12) and np.all(q <= self.limits[:, 1] + 1e-12))

    def is_ur_style(self) -> bool:
        a, d = self.a, self.d
        pattern_a = abs(a[0]) < 1e-12 and all(abs(v) < 1e-12 for v in a[3:])
        pattern_d = abs(d[1]) < 1e-12 and abs(d[2]) < 1e-12
        alph = np.allclose(self.alpha, UR5_ALPHA, atol=1e-9)
        return pattern_a and pattern_d and alph

    def as_dict(self) -> dict:
        return {
            "dh": [{"a": self.a[i], "d": self.d[i], "alpha": self.alpha[i]} for i in range(6)],
            "limits": self.limits.tolist(),
            "tool_offset": self.tool_offset.as_dict(),
            "camera_offset": self.camera_offset.as_dict(),
        }

    @staticmethod
    def from_dict(dd: dict) -> "ArmModel":
        dh = dd["dh"]
        if sum(abs(j["a"]) + abs(j["d"]) for j in dh) <= 0:
            raise ValueError("arm: total reach must be > 0")
        return ArmModel(
            a=[j["a"] for j in dh],
            d=[j["d"] for j in dh],
            alpha=[j["alpha"] for j in dh],
            limits=np.asarray(dd.get("limits", [[-2 * math.pi, 2 * math.pi]] * 6)),
            tool_offset=Transform3D.from_dict(dd["tool_offset"])
            if "tool_offset" in dd
            else Transform3D.identity(),
            camera_offset=Transform3D.from_dict(dd["camera_offset"])
            if "camera_offset" in dd
            else Transform3D.identity(),
        )


@dataclass(frozen=True)
class IkSolutionSet:
    solutions: list  # list of (6,) arrays
    sorted: bool = False

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)


def link_transforms(model: ArmModel, q) -> list:
    """Cumulative transforms T_0i (4x4) for i = 1..6."""
    q = np.asarray(q, dtype=float)
    T = np.eye(4)
    out = []
    for i in range(6):
        T = T @ _dh_matrix(model.a[i], model.d[i], model.alpha[i], q[i])
        out.append(T)
    return out


def flange_pose(model: ArmModel, q) -> Transform3D:
    T = link_transforms(model, q)[-1]
    return Transform3D(T[:3, :3], T[:3, 3])


def fk(model: ArmModel, q) -> Transform3D:
    """TCP pose in the arm-base frame (flange chain then tool offset)."""
    q = np.asarray(q, dtype=float)
    if not model.within_limits(q):
        raise JointLimit(f"configuration outside joint limits: {q}")
    return flange_pose(model, q).compose(model.tool_offset)


def camera_pose(model: ArmModel, q) -> Transform3D:
    return flange_pose(model, q).compose(model.camera_offset)


def jacobian(model: ArmModel, q) -> np.ndarray:
    """Geometric Jacobian of the TCP, 6x6: rows [v; omega] in base frame."""
    q = np.asarray(q, dtype=float)
    Ts = link_transforms(model, q)
    p_e = (Ts[-1] @ model.tool_offset.matrix())[:3, 3]
    J = np.zeros((6, 6))
    z_prev = np.array([0.0, 0.0, 1.0])
    p_prev = np.zeros(3)
    for i in range(6):
        J[:3, i] = np.cross(z_prev, p_e - p_prev)
        J[3:, i] = z_prev
        z_prev = Ts[i][:3, 2]
        p_prev = Ts[i][:3, 3]
    return J


def manipulability(model: ArmModel, q) -> float:
    J = jacobian(model, q)
    return float(abs(np.linalg.det(J)))


def _fit_limits(model: ArmModel, q: np.ndarray):
    """Shift each joint by +-2pi if needed to land inside its limits."""
    out = q.copy()
    for i in range(6):
        lo, hi = model.limits[i]
        if out[i] < lo:
            if out[i] + 2 * math.pi <= hi:
                out[i] += 2 * math.pi
            else:
                return None
        elif out[i] > hi:
            if out[i] - 2 * math.pi >= lo:
                out[i] -= 2 * math.pi
            else:
                return None
    return out


def ik_all(model: ArmModel, target: Transform3D) -> IkSolutionSet:
    """All closed-form IK branches reaching the TCP target.

    Enumerates shoulder left/right x elbow up/down x wrist flip for the
    UR-style geometry, drops branches failing limits or the FK round trip,
    and removes duplicates. Unreachable targets yield an empty set.
    """
    if not model.is_ur_style():
        raise ValueError("closed-form IK requires UR-style DH geometry")
    T06 = target.compose(model.tool_offset.inverse()).matrix()
    d1, d4, d5, d6 = model.d[0], model.d[3], model.d[4], model.d[5]
    a2, a3 = model.a[1], model.a[2]

    candidates = []
    p05 = T06 @ np.array([0.0, 0.0, -d6, 1.0])
    rho = math.hypot(p05[0], p05[1])
    if rho < abs(d4) - 1e-12:
        return IkSolutionSet([], sorted=False)
    psi = math.atan2(p05[1], p05[0])
    phi = math.acos(max(-1.0, min(1.0, d4 / max(rho, 1e-300))))
    for t1 in (psi + phi + math.pi / 2, psi - phi + math.pi / 2):
        A1 = _dh_matrix(model.a[0], d1, model.alpha[0], t1)
        T16 = np.linalg.inv(A1) @ T06
        c5 = (T16[2, 3] - d4) / d6
        if abs(c5) > 1.0 + 1e-9:
            continue
        c5 = max(-1.0, min(1.0, c5))
        for t5 in (math.acos(c5), -math.acos(c5)):
            s5 = math.sin(t5)
            T61 = np.linalg.inv(T16)
            if abs(s5) > 1e-9:
                t6 = math.atan2(-T61[1, 2] / s5, T61[0, 2] / s5)
            else:
                t6 = 0.0  # wrist singular: theta6 is free, pin it
            A5 = _dh_matrix(model.a[4], d5, model.alpha[4], t5)
            A6 = _dh_matrix(model.a[5], d6, model.alpha[5], t6)
            T14 = T16 @ np.linalg.inv(A5 @ A6)
            p13 = T14 @ np.array([0.0, -d4, 0.0, 1.0])
            L = math.hypot(math.hypot(p13[0], p13[1]), p13[2])
            c3 = (L * L - a2 * a2 - a3 * a3) / (2 * a2 * a3)
            if abs(c3) > 1.0 + 1e-9:
                continue
            c3 = max(-1.0, min(1.0, c3))
            for t3 in (math.acos(c3), -math.acos(c3)):
                t2 = -math.atan2(p13[1], -p13[0]) + math.asin(
                    max(-1.0, min(1.0, a3 * math.sin(t3) / max(L, 1e-300)))
                )
                A2 = _dh_matrix(model.a[1], model.d[1], model.alpha[1], t2)
                A3 = _dh_matrix(a3, model.d[2], model.alpha[2], t3)
                T34 = np.linalg.inv(A3) @ np.linalg.inv(A2) @ T14
                t4 = math.atan2(T34[1, 0], T34[0, 0])
                candidates.append([t1, t2, t3, t4, t5, t6])

    solutions = []
    for cand in candidates:
        q = np.array([normalize_angle(v) for v in cand])
        q = _fit_limits(model, q)
        if q is None:
            continue
        reached = fk(model, q)
        if np.linalg.norm(reached.translation - target.translation) > FK_POS_TOL:
            continue
        if reached.rotation_distance(target) > FK_ROT_TOL:
            continue
        if any(np.linalg.norm(q - s) <= DUPLICATE_TOL for s in solutions):
            continue
        solutions.append(q)
    return IkSolutionSet(solutions, sorted=False)


DISTANCE_WEIGHTS = np.array([3.0, 3.0, 2.0, 1.0, 1.0, 1.0])


def joint_distance(q_a, q_b, weights=DISTANCE_WEIGHTS) -> float:
    dq = np.asarray(q_a, dtype=float) - np.asarray(q_b, dtype=float)
    return float(np.sum(weights * dq * dq))


def sort_by_distance(solset: IkSolutionSet, current, weights=DISTANCE_WEIGHTS) -> IkSolutionSet:
    """Ascending weighted joint-space distance from the current config.

    Proximal joints weigh more; the sort is stable so permuting the input
    cannot reorder equal-distance solutions arbitrarily.
    """
    current = np.asarray(current, dtype=float)
    keyed = [(joint_distance(s, current, weights), i, s) for i, s in enumerate(solset.solutions)]
    keyed.sort(key=lambda ks: (ks[0], tuple(ks[2])))
    return IkSolutionSet([s for _, _, s in keyed], sorted=True)


def _rotation_error_vec(R_target: np.ndarray, R_cur: np.ndarray) -> np.ndarray:
    """Axis-angle vector of R_target * R_cur^T (small-angle safe)."""
    R = R_target @ R_cur.T
    w = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    c = max(-1.0, min(1.0, (np.trace(R) - 1.0) / 2.0))
    angle = math.acos(c)
    s = 2.0 * math.sin(angle) if angle > 1e-12 else 2.0
    return w * (angle / s) if angle > 1e-12 else 0.5 * w


MANIPULABILITY_FLOOR = 1e-4
JOG_AXES = {
    "+x": np.array([1.0, 0.0, 0.0]),
    "-x": np.array([-1.0, 0.0, 0.0]),
    "+y": np.array([0.0, 1.0, 0.0]),
    "-y": np.array([0.0, -1.0, 0.0]),
    "+z": np.array([0.0, 0.0, 1.0]),
    "-z": np.array([0.0, 0.0, -1.0]),
}


def solve_pose_delta(model: ArmModel, current, target: Transform3D, damping=0.05, max_iter=100):
    """Damped least-squares differential IK toward a nearby TCP target."""
    q = np.asarray(current, dtype=float).copy()
    lam2 = damping * damping
    for _ in range(max_iter):
        pose = fk(model, q)
        err = np.concatenate(
            [target.translation - pose.translation, _rotation_error_vec(target.rotation, pose.rotation)]
        )
        if np.linalg.norm(err[:3]) <= 1e-7 and np.linalg.norm(err[3:]) <= 1e-6:
            if not model.within_limits(q):
                raise JointLimit("jog target violates joint limits")
            return q
        if manipulability(model, q) < MANIPULABILITY_FLOOR:
            raise Singular("manipulability below floor during differential IK")
        J = jacobian(model, q)
        dq = J.T @ np.linalg.solve(J @ J.T + lam2 * np.eye(6), err)
        step = np.linalg.norm(dq)
        if step > 0.2:
            dq *= 0.2 / step
        q = q + dq
    raise NoConverge("differential IK did not converge")


def jog_delta(model: ArmModel, current, direction: str, step: float = 0.005) -> np.ndarray:
    """One Cartesian jog of the TCP along a tool-frame axis.

    Orientation is held fixed. Refuses near singularities so the caller can
    surface a warning instead of commanding a wild joint motion.
    """
    if direction not in JOG_AXES:
        raise ValueError(f"direction must be one of {sorted(JOG_AXES)}")
    if not 0.0 < step <= 0.02:
        raise ValueError("step must be in (0, 0.02] m")
    q0 = np.asarray(current, dtype=float)
    if manipulability(model, q0) < MANIPULABILITY_FLOOR:
        raise Singular("manipulability below floor at current configuration")
    pose = fk(model, q0)
    axis_world = pose.rotation @ JOG_AXES[direction]
    target = Transform3D(pose.rotation, pose.translation + step * axis_world)
    return solve_pose_delta(model, q0, target)
