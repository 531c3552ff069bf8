import math

import numpy as np
import pytest

from tendbot.arm import (
    ArmModel,
    IkSolutionSet,
    fk,
    ik_all,
    jacobian,
    jog_delta,
    joint_distance,
    link_transforms,
    manipulability,
    sort_by_distance,
)
from tendbot.errors import JointLimit, Singular
from tendbot.geometry import Transform3D


@pytest.fixture(scope="module")
def ur5():
    return ArmModel.ur5_default()


@pytest.fixture(scope="module")
def ur5_bare():
    # no tool/camera offsets: pure DH chain
    return ArmModel(ArmModel.ur5_default().a, ArmModel.ur5_default().d, ArmModel.ur5_default().alpha)


def test_zero_length_arm_fk_identity_translation():
    arm = ArmModel(a=[0] * 6, d=[0] * 6, alpha=(math.pi / 2, 0, 0, math.pi / 2, -math.pi / 2, 0))
    for q in (np.zeros(6), np.array([0.3, -1.0, 0.7, 2.0, -0.4, 1.3])):
        pose = fk(arm, q)
        assert np.allclose(pose.translation, 0.0, atol=1e-12)


def test_fk_matches_hand_composed_chain(ur5_bare):
    # independent composition of the six DH matrices at q = 0
    def dh(a, d, alpha):
        ca, sa = math.cos(alpha), math.sin(alpha)
        return np.array(
            [[1, -0 * ca, 0 * sa, a], [0, ca, -sa, 0], [0, sa, ca, d], [0, 0, 0, 1.0]]
        )

    T = np.eye(4)
    for i in range(6):
        T = T @ dh(ur5_bare.a[i], ur5_bare.d[i], ur5_bare.alpha[i])
    pose = fk(ur5_bare, np.zeros(6))
    assert np.allclose(pose.matrix(), T, atol=1e-12)


def test_fk_translation_bounded_by_reach(ur5):
    rng = np.random.default_rng(1)
    reach = ur5.total_reach() + np.linalg.norm(ur5.tool_offset.translation)
    for _ in range(1000):
        q = rng.uniform(-2 * math.pi, 2 * math.pi, 6)
        assert np.linalg.norm(fk(ur5, q).translation) <= reach + 1e-9


def test_fk_rejects_out_of_limit():
    arm = ArmModel(
        ArmModel.ur5_default().a,
        ArmModel.ur5_default().d,
        ArmModel.ur5_default().alpha,
        limits=np.array([[-1.0, 1.0]] * 6),
    )
    with pytest.raises(JointLimit):
        fk(arm, np.array([2.0, 0, 0, 0, 0, 0]))


def test_ik_round_trip_contains_seed(ur5):
    rng = np.random.default_rng(2)
    for _ in range(100):
        q = rng.uniform(-math.pi, math.pi, 6)
        target = fk(ur5, q)
        sols = ik_all(ur5, target)
        assert len(sols) >= 1
        assert any(np.abs(s - q).max() < 1e-6 for s in sols)


def test_ik_unreachable_empty(ur5):
    target = Transform3D(np.eye(3), np.array([2 * ur5.total_reach(), 0.0, 0.0]))
    assert len(ik_all(ur5, target)) == 0


def test_ik_solutions_verified_and_distinct(ur5):
    rng = np.random.default_rng(3)
    for _ in range(50):
        q = rng.uniform(-math.pi, math.pi, 6)
        target = fk(ur5, q)
        sols = list(ik_all(ur5, target))
        assert len(sols) <= 8
        for s in sols:
            reached = fk(ur5, s)
            assert np.linalg.norm(reached.translation - target.translation) <= 1e-6
            assert reached.rotation_distance(target) <= 1e-6
        for i in range(len(sols)):
            for j in range(i + 1, len(sols)):
                assert np.linalg.norm(sols[i] - sols[j]) > 1e-4


def _numeric_ik_solutions(model, target, seeds, tol=1e-8):
    """Oracle: multi-start damped-Newton IK, deduplicated."""
    from tendbot.arm import _rotation_error_vec

    found = []
    for q0 in seeds:
        q = np.array(q0, dtype=float)
        ok = False
        for _ in range(200):
            pose = fk(model, q)
            err = np.concatenate(
                [
                    target.translation - pose.translation,
                    _rotation_error_vec(target.rotation, pose.rotation),
                ]
            )
            if np.linalg.norm(err) < tol:
                ok = True
                break
            J = jacobian(model, q)
            dq = J.T @ np.linalg.solve(J @ J.T + 1e-8 * np.eye(6), err)
            n = np.linalg.norm(dq)
            if n > 0.5:
                dq *= 0.5 / n
            q = np.array([math.remainder(v, 2 * math.pi) for v in q + dq])
        if not ok:
            continue
        q = np.array([math.remainder(v, 2 * math.pi) for v in q])
        if not any(np.linalg.norm(q - f) < 1e-3 for f in found):
            found.append(q)
    return found


def test_numeric_search_finds_no_extra_family(ur5):
    """Multi-start refinement discovers no solution family ik_all missed."""
    rng = np.random.default_rng(4)
    for _ in range(10):
        q_true = rng.uniform(-math.pi, math.pi, 6)
        target = fk(ur5, q_true)
        analytic = list(ik_all(ur5, target))
        seeds = [rng.uniform(-math.pi, math.pi, 6) for _ in range(60)] + [q_true]
        for q_num in _numeric_ik_solutions(ur5, target, seeds):
            d = min(np.abs(q_num - s).max() for s in analytic)
            assert d < 1e-4, f"numeric oracle found unlisted solution {q_num}"


def test_sort_by_distance_current_first(ur5):
    q = np.array([0.3, -1.2, 1.0, -0.5, 0.8, 0.1])
    sols = ik_all(ur5, fk(ur5, q))
    ranked = sort_by_distance(sols, q)
    assert ranked.sorted
    assert np.abs(ranked.solutions[0] - q).max() < 1e-6
    assert joint_distance(ranked.solutions[0], q) < 1e-10


def test_sort_by_distance_matches_hand_metric():
    a = np.zeros(6)
    b = np.array([0.1, 0, 0, 0, 0, 0])  # metric 3 * 0.01 = 0.03
    c = np.array([0, 0, 0, 0.2, 0, 0])  # metric 1 * 0.04 = 0.04
    ranked = sort_by_distance(IkSolutionSet([c, b]), a)
    assert np.array_equal(ranked.solutions[0], b)
    assert joint_distance(b, a) == pytest.approx(0.03)
    assert joint_distance(c, a) == pytest.approx(0.04)


def test_sort_by_distance_order_independent(ur5):
    q = np.array([0.2, -0.9, 1.1, 0.4, 1.2, -0.3])
    sols = list(ik_all(ur5, fk(ur5, q)))
    r1 = sort_by_distance(IkSolutionSet(sols), q)
    r2 = sort_by_distance(IkSolutionSet(sols[::-1]), q)
    assert all(np.array_equal(x, y) for x, y in zip(r1.solutions, r2.solutions))
    metrics = [joint_distance(s, q) for s in r1.solutions]
    assert metrics == sorted(metrics)


def test_jacobian_matches_finite_differences(ur5):
    rng = np.random.default_rng(5)
    h = 1e-6
    for _ in range(100):
        q = rng.uniform(-1.8, 1.8, 6)
        J = jacobian(ur5, q)
        Jfd = np.zeros((6, 6))
        for i in range(6):
            dq = np.zeros(6)
            dq[i] = h
            tp = fk(ur5, q + dq)
            tm = fk(ur5, q - dq)
            Jfd[:3, i] = (tp.translation - tm.translation) / (2 * h)
            R = tp.rotation @ tm.rotation.T
            w = 0.5 * np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
            Jfd[3:, i] = w / (2 * h)
        assert np.abs(J - Jfd).max() < 1e-5


JOG_HOME = np.array([0.0, -1.2, 1.4, -0.8, -1.5, 0.4])


def test_jog_moves_tcp_along_tool_axis(ur5):
    before = fk(ur5, JOG_HOME)
    q2 = jog_delta(ur5, JOG_HOME, "+z", 0.005)
    after = fk(ur5, q2)
    delta = after.translation - before.translation
    tool_z = before.rotation[:, 2]
    assert abs(delta @ tool_z - 0.005) < 1e-5
    assert np.linalg.norm(delta - 0.005 * tool_z) < 1e-5
    assert after.rotation_distance(before) <= 1e-4


def test_jog_inverse_motion_returns(ur5):
    q1 = jog_delta(ur5, JOG_HOME, "+x", 0.008)
    q2 = jog_delta(ur5, q1, "-x", 0.008)
    assert np.abs(q2 - JOG_HOME).max() < 1e-4


def test_jog_refuses_at_wrist_singularity(ur5):
    q_sing = np.array([0.0, -1.0, 1.0, 0.0, 0.0, 0.0])  # joint 5 at zero
    assert manipulability(ur5, q_sing) < 1e-4
    with pytest.raises(Singular):
        jog_delta(ur5, q_sing, "+z", 0.005)


def test_jog_rejects_bad_step(ur5):
    with pytest.raises(ValueError):
        jog_delta(ur5, JOG_HOME, "+z", 0.05)
    with pytest.raises(ValueError):
        jog_delta(ur5, JOG_HOME, "sideways", 0.005)
