import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from orthohaptic.errors import BendTooLarge, MisalignedYokesWarning
from orthohaptic.orthoglide import OrthoglideParams, ik
from orthohaptic.transmission import (
    TransmissionState,
    UJointConfig,
    bend_angle_from_leg,
    chain_input,
    chain_output,
    chain_speed_ratio,
    leg_transmission,
    ujoint_input,
    ujoint_output,
    ujoint_speed_ratio,
)

deg = math.radians
B30 = UJointConfig(deg(30))

angles = st.floats(-20.0, 20.0)
bends = st.floats(0.0, deg(60))


def test_straight_shaft_is_identity():
    for th in (-7.0, 0.0, 0.3, 12.0):
        assert ujoint_output(th, UJointConfig(0.0)) == th
    assert ujoint_speed_ratio(1.234, UJointConfig(0.0)) == 1.0


def test_transfer_examples():
    out = ujoint_output(deg(45), B30)
    assert math.degrees(out) == pytest.approx(49.1066, abs=5e-5)
    assert out == pytest.approx(math.atan(1 / math.cos(deg(30))), abs=1e-15)
    assert ujoint_output(deg(90), B30) == pytest.approx(deg(90), abs=1e-15)


def test_transfer_by_integrating_the_speed_ratio():
    val, _ = quad(lambda t: ujoint_speed_ratio(t, B30), 0.0, deg(45), epsabs=1e-14)
    assert val == pytest.approx(ujoint_output(deg(45), B30), abs=1e-12)


def test_speed_ratio_extremes():
    # the derivative of atan(tan t / cos b): 1/cos b at t = 0, cos b at t = 90 deg
    assert ujoint_speed_ratio(0.0, B30) == pytest.approx(1.154701, abs=5e-7)
    assert ujoint_speed_ratio(deg(90), B30) == pytest.approx(0.866025, abs=5e-7)


@given(angles, bends, st.floats(-math.pi, math.pi))
def test_speed_ratio_is_the_derivative(th, beta, phase):
    cfg = UJointConfig(beta, phase)
    h = 1e-6
    fd = (ujoint_output(th + h, cfg) - ujoint_output(th - h, cfg)) / (2 * h)
    assert ujoint_speed_ratio(th, cfg) == pytest.approx(fd, rel=1e-6)


@given(angles, bends, st.floats(-math.pi, math.pi))
def test_inverse(th, beta, phase):
    cfg = UJointConfig(beta, phase)
    assert ujoint_input(ujoint_output(th, cfg), cfg) == pytest.approx(th, abs=1e-12)


@given(angles, bends)
def test_single_joint_formula(th, beta):
    out = ujoint_output(th, UJointConfig(beta))
    ref = math.atan(math.tan(th) / math.cos(beta))
    assert abs(math.remainder(out - ref, math.pi)) <= 1e-12
    # same turn as the input
    assert abs(out - th) < math.pi / 2


@given(angles, st.floats(0.0, deg(40)), st.floats(-math.pi, math.pi))
def test_z_configuration_is_homokinetic(th, beta, phase):
    stt = TransmissionState.z_config(2, beta, phase)
    assert stt.is_homokinetic()
    assert abs(chain_output(th, stt) - th) <= 1e-12
    assert abs(chain_input(th, stt) - th) <= 1e-12
    assert chain_speed_ratio(th, stt) == pytest.approx(1.0, abs=1e-12)


def test_misphased_yokes():
    stt = TransmissionState.z_config(1, deg(40), yoke_offset=math.pi / 2)
    assert not stt.is_homokinetic()
    th = np.linspace(0, 2 * np.pi, 721)
    with pytest.warns(MisalignedYokesWarning):
        out = chain_output(th, stt)
    assert np.max(np.abs(out - th)) > 0.1
    j1, j2 = stt.joints
    assert np.allclose(out, ujoint_output(ujoint_output(th, j1), j2), atol=1e-15)


def test_straight_chain_ignores_phases():
    stt = TransmissionState(1, 0.0, (UJointConfig(0.0, 0.3), UJointConfig(0.0, 1.1)))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert chain_output(0.77, stt) == 0.77


def test_period_integral_and_monotonicity():
    n = 4096
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    for beta in (deg(10), deg(45), deg(80)):
        cfg = UJointConfig(beta)
        assert np.sum(ujoint_speed_ratio(th, cfg)) * 2 * np.pi / n == pytest.approx(2 * np.pi,
                                                                                    abs=1e-9)
        assert np.all(np.diff(ujoint_output(th, cfg)) > 0)


def test_bend_from_leg():
    P = OrthoglideParams()
    assert bend_angle_from_leg([0, 0, 0], 1.0, 1, P) == 0.0
    p = np.array([0, 0.5, 0])
    rho = ik(p, P)
    assert math.degrees(bend_angle_from_leg(p, rho[0], 1, P)) == pytest.approx(30.0, abs=1e-12)
    assert bend_angle_from_leg(p, rho[1], 2, P) == 0.0


def test_bend_too_large_on_cylinder_boundary():
    P = OrthoglideParams()
    p = np.array([0, 1.0, 0])
    rho = ik(p, P, check_limits=False)
    assert bend_angle_from_leg(p, rho[0], 1, P) == pytest.approx(math.pi / 2)
    with pytest.raises(BendTooLarge):
        leg_transmission(p, rho, 1, P)
    with pytest.raises(BendTooLarge):
        ujoint_output(0.1, UJointConfig(math.pi / 2))


def test_negative_bend_rejected():
    with pytest.raises(ValueError):
        UJointConfig(-0.1)


@pytest.mark.parametrize("leg", [1, 2, 3])
def test_no_bend_at_home_for_every_leg(leg):
    P = OrthoglideParams()
    assert bend_angle_from_leg([0, 0, 0], 1.0, leg, P) == 0.0
