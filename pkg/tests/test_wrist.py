import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from orthohaptic.errors import GimbalDegeneracy, LimitViolation, OutOfRange
from orthohaptic.geometry import X_AXIS, Z_AXIS, angle_between_rotations, is_rotation, rot_x, rot_y
from orthohaptic.oracles import angular_velocity_difference, relative_error
from orthohaptic.wrist import (
    DEFAULT_SPM,
    WristVariant,
    hybrid_fk,
    hybrid_ik,
    hybrid_jacobian,
    spm_fk,
    spm_ik,
    spm_jacobian,
    spm_residuals,
    wrist_angles,
    wrist_limits_check,
    wrist_rotation,
)

LIM = math.pi / 4
deg = math.radians

bounded = st.floats(-LIM, LIM)
motor = st.floats(-deg(30), deg(30))


def test_hybrid_fk_examples():
    assert np.array_equal(hybrid_fk([0, 0, 0]), np.eye(3))
    assert np.allclose(hybrid_fk([deg(30), 0, 0]), rot_x(deg(30)), atol=1e-16)
    R = hybrid_fk([deg(10), deg(20), deg(730)])
    assert is_rotation(R)
    assert np.allclose(R, hybrid_fk([deg(10), deg(20), deg(10)]), atol=1e-14)


def test_hybrid_fk_matches_scipy_euler():
    a = [0.3, -0.5, 2.0]
    ref = Rotation.from_euler("XYZ", a).as_matrix()
    assert np.max(np.abs(hybrid_fk(a) - ref)) <= 1e-15


def test_hybrid_fk_rejects_pitch():
    with pytest.raises(LimitViolation) as e:
        hybrid_fk([deg(50), 0, 0])
    assert e.value.leg == 1


def test_hybrid_ik_examples():
    assert np.array_equal(hybrid_ik(np.eye(3)), np.zeros(3))
    assert np.allclose(hybrid_ik(rot_y(deg(40))), [0, deg(40), 0], atol=1e-15)
    with pytest.raises(OutOfRange) as e:
        hybrid_ik(rot_y(deg(60)))
    assert e.value.joints == (2,)


def test_hybrid_ik_gimbal():
    with pytest.raises(GimbalDegeneracy):
        hybrid_ik(rot_y(math.pi / 2))


@given(bounded, bounded, st.floats(-math.pi, math.pi))
def test_hybrid_round_trip(t1, t2, phi):
    a = np.array([t1, t2, phi])
    back = hybrid_ik(hybrid_fk(a))
    assert np.max(np.abs(back[:2] - a[:2])) <= 1e-10
    assert abs(math.remainder(back[2] - phi, 2 * math.pi)) <= 1e-10


@given(bounded, bounded, st.floats(-100.0, 100.0))
def test_roll_never_moves_the_roll_axis(t1, t2, phi):
    R0 = hybrid_fk([t1, t2, 0.0])
    R1 = hybrid_fk([t1, t2, phi])
    assert np.max(np.abs(R1 @ Z_AXIS - R0 @ Z_AXIS)) <= 1e-12


def test_hybrid_jacobian_home_and_det():
    assert np.array_equal(hybrid_jacobian([0, 0, 0]), np.eye(3))
    assert np.linalg.det(hybrid_jacobian([0.2, LIM, 1.0])) == pytest.approx(math.cos(LIM), abs=1e-9)
    assert np.linalg.det(hybrid_jacobian([0.2, -LIM, 1.0])) == pytest.approx(0.7071067811865476,
                                                                            abs=1e-9)


def test_hybrid_jacobian_finite_differences(rng):
    for _ in range(50):
        a = np.array([rng.uniform(-LIM, LIM), rng.uniform(-LIM, LIM), rng.uniform(-3, 3)])
        Jfd = angular_velocity_difference(hybrid_fk, a, 1e-6)
        assert relative_error(hybrid_jacobian(a), Jfd) <= 1e-6


def test_spm_home():
    assert np.array_equal(spm_ik(np.eye(3)), np.zeros(3))
    assert np.max(np.abs(spm_fk([0, 0, 0]) - np.eye(3))) <= 1e-15
    assert np.max(np.abs(spm_jacobian(np.eye(3)) - np.eye(3))) <= 1e-12
    assert np.allclose(np.linalg.svd(spm_jacobian(np.eye(3)), compute_uv=False), 1.0, atol=1e-12)


def test_spm_single_axis():
    R = rot_x(deg(10))
    th = spm_ik(R)
    assert np.allclose(th, [deg(10), 0, 0], atol=1e-15)
    assert np.max(np.abs(spm_residuals(R, th))) <= 1e-15
    assert angle_between_rotations(spm_fk(th), R) <= 1e-9


def test_spm_ik_residuals_in_20_degree_ball(rng):
    for _ in range(500):
        R = Rotation.from_rotvec(rng.normal(size=3) * 0.5).as_matrix()
        if Rotation.from_matrix(R).magnitude() > deg(20):
            continue
        assert np.max(np.abs(spm_residuals(R, spm_ik(R)))) <= 1e-10


def test_spm_round_trip(rng):
    worst = 0.0
    for _ in range(1000):
        th = rng.uniform(-deg(30), deg(30), size=3)
        R = spm_fk(th)
        worst = max(worst, angle_between_rotations(spm_fk(spm_ik(R)), R),
                    np.max(np.abs(spm_ik(R) - th)))
    assert worst <= 1e-8


def test_spm_jacobian_finite_differences(rng):
    for _ in range(50):
        th = rng.uniform(-deg(25), deg(25), size=3)
        Jfd = angular_velocity_difference(spm_fk, th, 1e-6)
        assert relative_error(spm_jacobian(spm_fk(th)), Jfd) <= 1e-6


@given(motor, motor, motor)
def test_spm_fk_satisfies_constraints(a, b, c):
    th = np.array([a, b, c])
    R = spm_fk(th)
    assert is_rotation(R)
    assert np.max(np.abs(spm_residuals(R, th))) <= 1e-9


def test_limits_check():
    hyb, sph = WristVariant.hybrid(), WristVariant.spherical()
    assert wrist_limits_check([0, 0, 1000.0], hyb).ok
    chk = wrist_limits_check([deg(50), 0, 0], hyb)
    assert (chk.ok, chk.offending) == (False, (1,))
    assert wrist_limits_check([0, 0, 0], hyb) and wrist_limits_check([0, 0, 0], sph)
    assert wrist_limits_check([0, 0, deg(50)], sph).offending == (3,)


def test_spherical_bounds_enforced():
    sph = WristVariant.spherical()
    with pytest.raises(LimitViolation):
        wrist_rotation([0, 0, deg(50)], sph)
    with pytest.raises(OutOfRange):
        wrist_angles(spm_fk([deg(44), deg(44), 0]) @ rot_x(deg(10)), sph)


def test_variant_mounts():
    assert np.array_equal(WristVariant.hybrid().home_axis, Z_AXIS)
    axis = WristVariant.spherical().home_axis
    assert np.max(np.abs(axis - np.ones(3) / math.sqrt(3))) <= 1e-12
    with pytest.raises(ValueError):
        WristVariant.spherical(mount=np.eye(3))
    with pytest.raises(ValueError):
        WristVariant.hybrid(limit=math.pi / 2)


def test_default_leg_geometry_is_orthogonal():
    g = DEFAULT_SPM
    assert np.allclose(np.einsum("ij,ij->i", g.u, g.m0), 0)
    assert np.allclose(g.link(0, 0.0), g.m0[0])
    assert np.allclose(g.link(0, math.pi / 2), np.cross(g.u[0], g.m0[0]))
    assert not np.allclose(X_AXIS, g.v[0])


def test_hybrid_round_trip_ten_thousand(rng):
    worst = 0.0
    for _ in range(10000):
        a = [rng.uniform(-LIM, LIM), rng.uniform(-LIM, LIM), rng.uniform(-math.pi, math.pi)]
        R = hybrid_fk(a)
        worst = max(worst, np.max(np.abs(hybrid_fk(hybrid_ik(R)) - R)))
    assert worst <= 1e-10


def test_mount_conjugation(rng):
    # a device whose hybrid wrist is turned about z by alpha sees the same
    # joint angles once orientations are expressed in the wrist frame
    from orthohaptic.device import DeviceParams, DevicePose, JointVector, device_fk, device_ik
    from orthohaptic.device import device_jacobian
    from orthohaptic.geometry import rot_z

    M = rot_z(0.7)
    plain = DeviceParams.hybrid()
    turned = DeviceParams.hybrid(mount=M)
    for _ in range(20):
        g = [rng.uniform(-LIM, LIM), rng.uniform(-LIM, LIM), rng.uniform(-3, 3)]
        q = JointVector([1, 1, 1], g)
        R0 = device_fk(q, plain).R
        R1 = device_fk(q, turned).R
        assert np.allclose(R1, M @ R0, atol=1e-15)
        back = device_ik(DevicePose([0, 0, 0], R1), turned)
        assert np.allclose(back.gamma[:2], g[:2], atol=1e-12)
        assert abs(math.remainder(back.gamma[2] - g[2], 2 * math.pi)) <= 1e-12
        assert np.allclose(device_jacobian(q, turned).J_r, device_jacobian(q, plain).J_r)
    sph = WristVariant.spherical()
    R = spm_fk(np.radians([5, -8, 12]))
    assert np.allclose(wrist_angles(sph.mount.T @ (sph.mount @ R), sph), np.radians([5, -8, 12]))
