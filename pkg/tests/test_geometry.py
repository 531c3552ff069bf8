import math

import numpy as np
import pytest

from tendbot.geometry import Pose2D, Transform3D, look_at, normalize_angle, rot_x, rot_y, rot_z


def random_transform(rng):
    # random rotation via QR of a Gaussian matrix, sign-fixed to det +1
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return Transform3D(q, rng.normal(size=3))


def test_angle_normalization_range():
    for a in [-10.0, -math.pi, math.pi, 3 * math.pi, 0.0, 123.456]:
        n = normalize_angle(a)
        assert -math.pi < n <= math.pi
        assert abs(math.sin(n - a)) < 1e-12


def test_pose_theta_normalized_at_boundary():
    assert Pose2D(0, 0, 3 * math.pi).theta == pytest.approx(math.pi)
    assert Pose2D(0, 0, -math.pi).theta == pytest.approx(math.pi)


def test_compose_inverse_identity_random():
    rng = np.random.default_rng(7)
    for _ in range(50):
        t = random_transform(rng)
        ident = t.compose(t.inverse())
        assert np.allclose(ident.rotation, np.eye(3), atol=1e-9)
        assert np.allclose(ident.translation, 0.0, atol=1e-9)


def test_transform_rejects_non_orthonormal():
    with pytest.raises(ValueError):
        Transform3D(np.eye(3) * 1.001, np.zeros(3))
    refl = np.diag([1.0, 1.0, -1.0])
    with pytest.raises(ValueError):
        Transform3D(refl, np.zeros(3))


def test_apply_matches_matrix_form():
    rng = np.random.default_rng(3)
    t = random_transform(rng)
    p = rng.normal(size=(10, 3))
    hom = np.column_stack([p, np.ones(10)])
    expected = (t.matrix() @ hom.T).T[:, :3]
    assert np.allclose(t.apply(p), expected, atol=1e-12)


def test_axis_rotations_orthonormal():
    for f in (rot_x, rot_y, rot_z):
        R = f(0.7)
        assert np.allclose(R @ R.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(R) == pytest.approx(1.0)


def test_look_at_points_z_axis_at_target():
    eye = np.array([1.0, 2.0, 3.0])
    target = np.array([0.0, 0.0, 0.5])
    t = look_at(eye, target)
    z = t.rotation[:, 2]
    want = (target - eye) / np.linalg.norm(target - eye)
    assert np.allclose(z, want, atol=1e-12)
    # valid rotation
    assert np.allclose(t.rotation @ t.rotation.T, np.eye(3), atol=1e-12)


def test_pose_compose_roundtrip():
    p = Pose2D(1.0, 2.0, 0.3)
    q = Pose2D(0.5, -0.2, 1.1)
    composed = p.compose(q)
    # manual expansion
    c, s = math.cos(0.3), math.sin(0.3)
    assert composed.x == pytest.approx(1.0 + c * 0.5 - s * -0.2)
    assert composed.y == pytest.approx(2.0 + s * 0.5 + c * -0.2)
    assert composed.theta == pytest.approx(normalize_angle(1.4))
