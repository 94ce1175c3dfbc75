import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orthohaptic.errors import NoAssembly, OutsideCylinder, RangeLimit, SerialSingularity
from orthohaptic.geometry import rot_axis_angle
from orthohaptic.oracles import central_difference, relative_error
from orthohaptic.orthoglide import (
    OrthoglideParams,
    amplification_factors,
    fk,
    ik,
    jacobian,
    jacobian_batch,
    singular_values_batch,
    singularity_report,
)

P = OrthoglideParams()
# the diagonal point where the three legs become coplanar
T_PARALLEL = 1.0 / math.sqrt(6.0)

inner = st.tuples(*[st.floats(-0.45, 0.4)] * 3).map(np.array)


def sphere_residual(p, rho, params=P):
    return np.linalg.norm(p - rho[:, None] * params.axes, axis=1) - params.L


def test_ik_home():
    assert np.array_equal(ik([0, 0, 0], P), [1.0, 1.0, 1.0])


def test_ik_offset_x():
    s = math.sqrt(0.99)
    assert np.allclose(ik([0.1, 0, 0], P), [1.1, s, s], rtol=0, atol=1e-15)
    assert ik([0.1, 0, 0], P)[1] == pytest.approx(0.994987, abs=5e-7)


def test_ik_outside_cylinder():
    with pytest.raises(OutsideCylinder) as e:
        ik([0, 1.2, 0], P)
    assert e.value.leg == 1


def test_ik_range_limit():
    with pytest.raises(RangeLimit) as e:
        ik([0, 0, 0], P.with_range(0.1, 0.9))
    assert e.value.leg == 1
    # unchecked call still solves
    assert np.array_equal(ik([0, 0, 0], P.with_range(0.1, 0.9), check_limits=False), np.ones(3))


def test_fk_examples():
    assert np.max(np.abs(fk([1, 1, 1], P))) <= 1e-15
    s = math.sqrt(0.99)
    assert np.max(np.abs(fk([1.1, s, s], P) - [0.1, 0, 0])) <= 1e-9
    # rounded input from a printed table
    assert np.max(np.abs(fk([1.1, 0.994987, 0.994987], P) - [0.1, 0, 0])) <= 1e-6
    with pytest.raises(NoAssembly):
        fk([2.5, 2.5, 2.5], P)


def test_fk_picks_working_mode_at_home():
    # the spheres around (1,0,0), (0,1,0), (0,0,1) also meet at (2/3, 2/3, 2/3)
    p = fk([1, 1, 1], P)
    assert np.linalg.norm(p) < 1e-12


@given(inner)
def test_ik_fk_round_trip(p):
    rho = ik(p, P, check_limits=False)
    assert np.max(np.abs(sphere_residual(p, rho))) <= 1e-12
    assert np.max(np.abs(fk(rho, P) - p)) <= 1e-9


@given(inner, st.floats(0.3, 5.0))
def test_round_trip_rotated_axes_and_scaled(p, L):
    axes = rot_axis_angle(np.ones(3) / math.sqrt(3), 0.4)
    params = OrthoglideParams(L, -10, 10, axes)
    q = L * p @ axes
    assert np.max(np.abs(fk(ik(q, params), params) - q)) <= 1e-9 * L


def test_jacobian_home_is_identity():
    assert np.max(np.abs(jacobian([0, 0, 0], P) - np.eye(3))) <= 1e-12


@pytest.mark.parametrize("p", [(0.1, 0.1, 0.1), (0.3, -0.2, 0.05), (0.0, 0.6, 0.0)])
def test_jacobian_matches_finite_differences(p):
    Jfd = central_difference(lambda r: fk(r, P), ik(p, P), 1e-6)
    assert relative_error(jacobian(p, P), Jfd) <= 1e-6


def test_amplification_factors_from_fd_svd():
    p = (0, 0.6, 0)
    Jfd = central_difference(lambda r: fk(r, P), ik(p, P), 1e-6)
    ref = np.sort(np.linalg.svd(Jfd, compute_uv=False))
    assert np.allclose(amplification_factors(p, P), ref, rtol=1e-6)


def test_amplification_closed_form_on_axis():
    # at (0, y, 0) hand elimination gives J = I + k (e1 + e3) e2^T with
    # k = y / sqrt(1 - y^2): a shear of size a = k sqrt(2) in the (e1+e3, e2)
    # plane, singular values (sqrt(a^2 + 4) +- a) / 2, plus 1 along e1 - e3
    y = 0.6
    a = math.sqrt(2) * y / math.sqrt(1 - y * y)
    ref = ((math.sqrt(a * a + 4) - a) / 2, 1.0, (math.sqrt(a * a + 4) + a) / 2)
    s = amplification_factors((0, y, 0), P)
    assert s == pytest.approx(ref, rel=1e-12)
    assert ref[2] == pytest.approx(1.6622532281570879, rel=1e-15)


def test_amplification_home():
    s = amplification_factors((0, 0, 0), P)
    assert s == (1.0, 1.0, 1.0)
    assert s[2] / s[0] == 1.0


def test_serial_singularity_on_cylinder_boundary():
    with pytest.raises(SerialSingularity) as e:
        jacobian([0, 1.0, 0], P)
    assert e.value.leg == 1
    assert set(e.value.legs) == {1, 3}


def test_near_boundary_is_ill_conditioned_not_singular():
    # |c_1| = sqrt(1 - 0.999999^2) ~ 1.4e-3 stays well above tol.singular
    J = jacobian([0, 0.999999, 0], P)
    assert np.linalg.cond(J) > 1e5


def test_singularity_report_kinds():
    assert singularity_report([0, 0, 0], P).kind == "Regular"
    r = singularity_report([0.6, 0, 0.8], P)
    assert (r.kind, r.legs) == ("Serial", (2,))
    t = T_PARALLEL
    r = singularity_report([t, t, t], P)
    assert r.kind == "Parallel"
    rho = ik([t, t, t], P)
    d = (np.array([t, t, t]) - rho[:, None] * np.eye(3))
    assert abs(np.linalg.det(d)) < 1e-8
    assert singularity_report([0, 1.2, 0], P).kind == "Outside"
    assert singularity_report([0.5, 0.5, 0.5], P).kind == "Outside"


def test_parallel_point_stroke():
    # rho_i = t + sqrt(1 - 2 t^2) = 3 / sqrt(6)
    assert ik([T_PARALLEL] * 3, P) == pytest.approx([3 / math.sqrt(6)] * 3, abs=1e-14)


def test_batch_matches_scalar(rng):
    pts = rng.uniform(-0.4, 0.4, size=(50, 3))
    out = jacobian_batch(pts, P)
    for k, p in enumerate(pts):
        assert np.allclose(out["J"][k], jacobian(p, P), atol=1e-13)
    sv = singular_values_batch(out["J"])
    assert np.all(np.diff(sv, axis=1) >= 0)


def test_params_validation():
    with pytest.raises(ValueError):
        OrthoglideParams(L=0)
    with pytest.raises(ValueError):
        OrthoglideParams(rho_min=2, rho_max=1)
    with pytest.raises(ValueError):
        OrthoglideParams(axes=np.diag([1.0, 1.0, 2.0]))
    OrthoglideParams(rho_min=1.0, rho_max=1.0)


@given(st.floats(-0.5, 0.5), st.floats(-0.5, 0.5), st.floats(-0.5, 0.4), st.floats(1e-3, 0.1))
def test_stroke_increases_with_axial_coordinate(y, z, x, dx):
    a = ik([x, y, z], P, check_limits=False)[0]
    b = ik([x + dx, y, z], P, check_limits=False)[0]
    assert b > a


def test_round_trip_ten_thousand_points_in_cube(rng):
    from orthohaptic.workspace import WorkspaceSpec, largest_cube

    cube = largest_cube(WorkspaceSpec(P))
    pts = cube.center + rng.uniform(-0.5, 0.5, size=(10000, 3)) * cube.edge
    worst_rt = worst_res = 0.0
    for p in pts:
        rho = ik(p, P)
        worst_res = max(worst_res, np.max(np.abs(sphere_residual(p, rho))))
        worst_rt = max(worst_rt, np.linalg.norm(fk(rho, P) - p))
    assert worst_res <= 1e-9 and worst_rt <= 1e-9
