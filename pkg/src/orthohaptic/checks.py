"""
Self-check suites run by ``orthohaptic check``.

Each suite measures one error quantity at the default parameters and
compares it with a fixed bound. Random samples come from seeded generators,
so two runs print byte-identical reports.
"""

import math
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .design import DesignSpec, cube_grid, evaluate_design, size_device
from .device import (
    DeviceParams,
    DevicePose,
    JointVector,
    device_fk,
    device_ik,
    device_jacobian,
    home_axis,
    home_axis_tilt,
)
from .errors import KinematicError, OutOfRange
from .geometry import (
    angle_between_rotations,
    rot_axis_angle,
    rot_x,
    rot_y,
    unit,
)
from .oracles import (
    angular_velocity_difference,
    brute_member,
    central_difference,
    dense_cube_oracle,
    relative_error,
)
from .orthoglide import OrthoglideParams, amplification_factors, fk, ik, jacobian
from .transmission import (
    TransmissionState,
    UJointConfig,
    chain_output,
    ujoint_output,
    ujoint_speed_ratio,
)
from .workspace import WorkspaceSpec, cube_boundary_template, grid_points, largest_cube, member_mask
from .wrist import (
    hybrid_fk,
    hybrid_ik,
    hybrid_jacobian,
    spm_fk,
    spm_ik,
    spm_jacobian,
    spm_residuals,
)

SEED = 20240611


@dataclass(frozen=True)
class SuiteResult:
    name: str
    error: float
    bound: float
    detail: str = ""
    # (label, measured value) pairs behind ``error``
    parts: tuple = ()

    def passed(self, scale: float = 1.0) -> bool:
        return bool(np.isfinite(self.error) and self.error <= self.bound * scale)


@lru_cache(maxsize=None)
def default_cube():
    return largest_cube(WorkspaceSpec(OrthoglideParams()))


def _rng(k: int = 0):
    return np.random.default_rng(SEED + k)


def sample_in_cube(rng, cube, n: int, params: OrthoglideParams = None):
    params = params or OrthoglideParams()
    u = rng.uniform(-0.5, 0.5, size=(n, 3)) * cube.edge
    return cube.center + u @ params.axes


def random_rotation(rng, max_angle: float):
    axis = unit(rng.normal(size=3))
    return rot_axis_angle(axis, rng.uniform(0.0, max_angle))


def random_joint_vectors(rng, params: DeviceParams, n: int):
    """Joint vectors from random positions in the cube and in-range wrist angles."""
    cube = default_cube()
    P = sample_in_cube(rng, cube, n, params.ortho)
    lim = params.variant.limit
    out = []
    for p in P:
        rho = ik(p, params.ortho)
        if params.variant.tag == "Hybrid2R1R":
            g = np.array([rng.uniform(-lim, lim), rng.uniform(-lim, lim), rng.uniform(-10, 10)])
        else:
            g = rng.uniform(-lim * 2 / 3, lim * 2 / 3, size=3)
        out.append(JointVector(rho, g))
    return out


def random_poses(rng, params: DeviceParams, n: int):
    cube = default_cube()
    P = sample_in_cube(rng, cube, n, params.ortho)
    lim = params.variant.limit
    poses = []
    for p in P:
        if params.variant.tag == "Hybrid2R1R":
            a = [rng.uniform(-lim, lim), rng.uniform(-lim, lim), rng.uniform(-50.0, 50.0)]
            Rw = hybrid_fk(a, lim)
        else:
            while True:
                Rw = random_rotation(rng, math.radians(30))
                if np.all(np.abs(spm_ik(Rw)) <= lim):
                    break
        poses.append(DevicePose(p, params.variant.mount @ Rw))
    return poses


# ---------------------------------------------------------------------------
# acceptance criteria
# ---------------------------------------------------------------------------

def translational_isotropy():
    P = OrthoglideParams()
    J = jacobian(np.zeros(3), P)
    s = np.array(amplification_factors(np.zeros(3), P))
    err = max(np.max(np.abs(J - np.eye(3))), np.max(np.abs(s - 1.0)))
    return SuiteResult("translational-isotropy", err, 1e-12, f"max|J-I|, max|s-1| = {err:.3e}",
                       (("error", err),))


def wrist_isotropy():
    Jh = hybrid_jacobian([0, 0, 0])
    Js = spm_jacobian(np.eye(3))
    err = 0.0
    for J in (Jh, Js):
        s = np.linalg.svd(J, compute_uv=False)
        err = max(err, np.max(np.abs(J - np.eye(3))), np.max(np.abs(s - 1.0)))
    return SuiteResult("wrist-isotropy", err, 1e-12, f"both variants: {err:.3e}",
                       (("error", err),))


def decoupling(n: int = 1000):
    rng = _rng(3)
    worst = 0.0
    for params in (DeviceParams.hybrid(), DeviceParams.spherical()):
        for q in random_joint_vectors(rng, params, n // 2):
            J = device_jacobian(q, params)
            worst = max(worst, np.max(np.abs(J.coupling_tr)), np.max(np.abs(J.coupling_rt)))
    return SuiteResult("decoupling", worst, 0.0,
                       f"max |coupling| over {n} configurations = {worst:.3e}",
                       (("coupling", worst),))


def device_round_trips(n: int = 10000):
    rng = _rng(4)
    pos, ori = 0.0, 0.0
    for params in (DeviceParams.hybrid(), DeviceParams.spherical()):
        for pose in random_poses(rng, params, n):
            back = device_fk(device_ik(pose, params), params)
            pos = max(pos, np.max(np.abs(back.p - pose.p)) / params.ortho.L)
            ori = max(ori, angle_between_rotations(back.R, pose.R))
    err = max(pos, ori)
    return SuiteResult("round-trips", err, 1e-9,
                       f"{n} poses per variant: position/L {pos:.3e}, orientation {ori:.3e} rad",
                       (("position/L", pos), ("orientation", ori)))


def jacobian_fd(n: int = 100, h: float = 1e-6):
    rng = _rng(5)
    et = er = 0.0
    for params in (DeviceParams.hybrid(), DeviceParams.spherical()):
        M = params.variant.mount
        for q in random_joint_vectors(rng, params, n):
            J = device_jacobian(q, params)
            Jt = central_difference(lambda r: device_fk(JointVector(r, q.gamma), params).p,
                                    q.rho, h * params.ortho.L)
            Jr = angular_velocity_difference(
                lambda g: device_fk(JointVector(q.rho, g), params).R, q.gamma, h, frame=M)
            et = max(et, relative_error(J.J_t, Jt))
            er = max(er, relative_error(J.J_r, Jr))
    err = max(et, er)
    return SuiteResult("jacobian-fd", err, 1e-6,
                       f"{n} configurations per variant: J_t {et:.3e}, J_r {er:.3e}",
                       (("J_t", et), ("J_r", er)))


def workspace_oracle(n: int = 41):
    params = OrthoglideParams()
    P = grid_points((-params.L, params.L), n)
    mine = member_mask(P, WorkspaceSpec(params))
    ref = brute_member(P, params.L, params.rho_min, params.rho_max)
    bad = int(np.count_nonzero(mine != ref))
    return SuiteResult("workspace-oracle", bad, 0,
                       f"{bad} disagreements over {n}^3 points ({int(ref.sum())} members)",
                       (("disagreements", bad),))


def inscribed_cube():
    params = OrthoglideParams()
    spec = WorkspaceSpec(params)
    cube = default_cube()
    ref_edge, _, spacing = dense_cube_oracle(params.L, params.rho_min, params.rho_max)
    rel = abs(cube.edge - ref_edge) / ref_edge
    C = cube.corners(params)
    corners_ok = bool(member_mask(C, spec).all())
    # faces parallel to the coordinate planes: corner offsets are exactly +-edge/2
    aligned = cube.axis_aligned and bool(np.allclose(np.abs(C - cube.center), cube.edge / 2,
                                                     rtol=0, atol=1e-15))
    err = rel if corners_ok and aligned else np.inf
    return SuiteResult("inscribed-cube", err, params.tol.grid_match,
                       f"edge {cube.edge:.9g} vs 201^3 oracle {ref_edge:.9g} "
                       f"(spacing {spacing:.3g}), corners feasible: {corners_ok}, axis-aligned: {aligned}",
                       (("relative edge", rel), ("infeasible corners", int(not corners_ok)),
                        ("misaligned faces", int(not aligned))))


def transmission(n: int = 1000):
    rng = _rng(8)
    chain = single = 0.0
    for _ in range(n):
        th = rng.uniform(-4 * np.pi, 4 * np.pi)
        beta = rng.uniform(0.0, math.radians(60))
        st = TransmissionState.z_config(1, beta, phase=rng.uniform(-np.pi, np.pi))
        chain = max(chain, abs(chain_output(th, st) - th))
        out = ujoint_output(th, UJointConfig(beta))
        ref = math.atan(math.tan(th) / math.cos(beta))
        d = (out - ref + np.pi / 2) % np.pi - np.pi / 2
        single = max(single, abs(d))
    err = max(chain, single)
    return SuiteResult("transmission", err, 1e-12,
                       f"chain identity {chain:.3e}, single-joint transfer {single:.3e}",
                       (("chain", chain), ("single", single)))


def wrist_limits():
    lim = math.radians(45)
    wrong = 0
    # beyond the bound plus tolerance must be rejected
    for deg in (45.001, 50, 60, 80):
        for R in (rot_x(math.radians(deg)), rot_y(math.radians(deg)),
                  rot_x(-math.radians(deg)), rot_y(-math.radians(deg))):
            try:
                hybrid_ik(R, lim)
                wrong += 1
            except OutOfRange:
                pass
    # roll of any magnitude must pass
    params = DeviceParams.hybrid()
    for roll in (0.0, 3.0, -7.5, 100.0, 1e4, -1e6):
        R = hybrid_fk([0.3, -0.5, roll], lim)
        try:
            hybrid_ik(R, lim)
            device_ik(DevicePose(np.zeros(3), R), params)
            device_fk(JointVector(np.ones(3), [0.3, -0.5, roll]), params)
        except KinematicError:
            wrong += 1
    for deg in (44.999, 45.0):
        try:
            hybrid_ik(rot_y(math.radians(deg)), lim)
        except OutOfRange:
            wrong += 1
    return SuiteResult("wrist-limits", wrong, 0, f"{wrong} wrong accept/reject decisions",
                       (("wrong", wrong),))


def sizing_scale():
    base = size_device(DesignSpec(0.5, 2.0))
    worst = 0.0
    for k in (0.5, 2.0, 10.0):
        r = size_device(DesignSpec(0.5 * k, 2.0))
        worst = max(worst, abs(r.L - k * base.L) / (k * base.L))
    return SuiteResult("sizing-scale", worst, 1e-6,
                       f"L(0.5) = {base.L:.9g}; worst relative deviation {worst:.3e}",
                       (("relative", worst),))


def home_axis_geometry():
    params = DeviceParams.spherical()
    a = home_axis(params)
    e_axis = np.max(np.abs(a - np.ones(3) / math.sqrt(3)))
    e_angle = abs(home_axis_tilt(params) - math.acos(1 / math.sqrt(3)))
    # scale the angle error onto the tighter axis bound
    err = max(e_axis, e_angle * 1e-3)
    return SuiteResult("home-axis", err, 1e-12,
                       f"axis error {e_axis:.3e}, tilt {math.degrees(home_axis_tilt(params)):.9g} deg "
                       f"(error {e_angle:.3e})",
                       (("axis", e_axis), ("angle", e_angle)))


# ---------------------------------------------------------------------------
# module invariants
# ---------------------------------------------------------------------------

def rotation_chain(n: int = 1000):
    rng = _rng(20)
    R = np.eye(3)
    worst = 0.0
    for _ in range(n):
        a = unit(rng.normal(size=3))
        t = rng.uniform(-np.pi, np.pi)
        Ra = rot_axis_angle(a, t)
        worst = max(worst, np.max(np.abs(Ra @ a - a)))
        R = R @ Ra
    worst = max(worst, np.max(np.abs(R.T @ R - np.eye(3))), abs(np.linalg.det(R) - 1))
    return SuiteResult("geometry-chain", worst, 1e-10, f"{n} compositions: {worst:.3e}")


def orthoglide_invariants(n: int = 10000):
    rng = _rng(21)
    params = OrthoglideParams()
    P = sample_in_cube(rng, default_cube(), n, params)
    rt = res = 0.0
    for p in P:
        rho = ik(p, params)
        res = max(res, np.max(np.abs(np.linalg.norm(p - rho[:, None] * params.axes, axis=1)
                                     - params.L)))
        rt = max(rt, np.max(np.abs(fk(rho, params) - p)))
    fd = 0.0
    for p in P[:100]:
        Jfd = central_difference(lambda r: fk(r, params), ik(p, params), 1e-6 * params.L)
        fd = max(fd, relative_error(jacobian(p, params), Jfd))
    err = max(rt / 1e-9, res / 1e-9, fd / 1e-6)
    return SuiteResult("orthoglide", err, 1.0,
                       f"round trip {rt:.3e}, residual {res:.3e}, Jacobian vs FD {fd:.3e} "
                       f"(normalized worst {err:.3f})")


def wrist_invariants():
    rng = _rng(22)
    lim = math.radians(45)
    hyb = spm_rt = spm_res = roll = 0.0
    for _ in range(10000):
        a = [rng.uniform(-lim, lim), rng.uniform(-lim, lim), rng.uniform(-np.pi, np.pi)]
        R = hybrid_fk(a)
        hyb = max(hyb, np.max(np.abs(hybrid_fk(hybrid_ik(R)) - R)))
        R2 = hybrid_fk([a[0], a[1], a[2] + rng.uniform(-10, 10)])
        roll = max(roll, np.max(np.abs(R2[:, 2] - R[:, 2])))
    for _ in range(1000):
        th = rng.uniform(-math.radians(30), math.radians(30), size=3)
        R = spm_fk(th)
        spm_rt = max(spm_rt, np.max(np.abs(spm_ik(R) - th)))
        spm_res = max(spm_res, np.max(np.abs(spm_residuals(R, th))))
    err = max(hyb / 1e-10, spm_rt / 1e-8, spm_res / 1e-9, roll / 1e-12)
    return SuiteResult("wrist", err, 1.0,
                       f"hybrid round trip {hyb:.3e}, 3R round trip {spm_rt:.3e}, "
                       f"3R residual {spm_res:.3e}, roll axis drift {roll:.3e}")


def transmission_invariants():
    n = 4096
    th = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    worst_int = 0.0
    monotone = True
    for beta_deg in (10, 30, 45, 60, 80):
        cfg = UJointConfig(math.radians(beta_deg))
        # periodic trapezoid rule: spectrally accurate for smooth periodic integrands
        integral = np.sum(ujoint_speed_ratio(th, cfg)) * (2 * np.pi / n)
        worst_int = max(worst_int, abs(integral - 2 * np.pi))
        out = ujoint_output(th, cfg)
        monotone &= bool(np.all(np.diff(out) > 0) and out[-1] - out[0] < 2 * np.pi)
    err = worst_int if monotone else np.inf
    return SuiteResult("transmission-period", err, 1e-9,
                       f"period integral error {worst_int:.3e}, strictly increasing: {monotone}")


def workspace_invariants():
    params = OrthoglideParams()
    P = grid_points((-params.L, params.L), 21)
    m15 = member_mask(P, WorkspaceSpec(params, psi=1.5))
    m2 = member_mask(P, WorkspaceSpec(params, psi=2.0))
    m3 = member_mask(P, WorkspaceSpec(params, psi=3.0))
    bad = int(np.count_nonzero(m15 & ~m2) + np.count_nonzero(m2 & ~m3))
    spec = WorkspaceSpec(params)
    base = member_mask(P, spec)
    for perm in ((1, 2, 0), (2, 0, 1), (1, 0, 2)):
        bad += int(np.count_nonzero(member_mask(P[:, perm], spec) != base))
    cube = default_cube()
    T = cube.center + cube.edge * cube_boundary_template(9)
    bad += int(np.count_nonzero(~member_mask(T, spec)))
    return SuiteResult("workspace", bad, 0,
                       f"{bad} violations of psi monotonicity, leg symmetry, cube samples")


def design_invariants():
    Ls = [size_device(DesignSpec(0.5, psi)).L for psi in (1.5, 2.0, 3.0)]
    mono = all(a >= b for a, b in zip(Ls, Ls[1:]))
    r = size_device(DesignSpec(0.5, 2.0))
    fine = evaluate_design(r.L, r.rho_min, r.rho_max, DesignSpec(0.5, 2.0), m=17,
                           offsets=[r.report.offset])
    corners = cube_grid(r.cube.center, r.cube.edge, 2)
    P = OrthoglideParams(r.L, r.rho_min, r.rho_max)
    covered = all(P.rho_min <= v <= P.rho_max for c in corners for v in ik(c, P, check_limits=False))
    bad = int(not mono) + int(not fine.feasible) + int(not covered)
    return SuiteResult("design", bad, 0,
                       f"L(psi=1.5,2,3) = {', '.join(f'{x:.6g}' for x in Ls)}; "
                       f"17^3 re-verification feasible: {fine.feasible}; stroke covers corners: {covered}")


def device_invariants():
    bad = 0
    params = DeviceParams.hybrid()
    q = JointVector(ik([0.1, -0.2, 0.05], params.ortho), [0.2, -0.3, 0.4])
    base = device_fk(q, params)
    for k in range(-3, 4):
        other = device_fk(JointVector(q.rho, q.gamma + [0, 0, 2 * np.pi * k]), params)
        bad += int(angle_between_rotations(other.R, base.R) > 1e-9)
    for dg in ([0.1, 0, 0], [0, 0.2, 0], [0, 0, 5.0]):
        bad += int(np.any(device_fk(JointVector(q.rho, q.gamma + dg), params).p != base.p))
    for dr in ([0.01, 0, 0], [0, -0.02, 0], [0, 0, 0.03]):
        bad += int(angle_between_rotations(device_fk(JointVector(q.rho + dr, q.gamma), params).R,
                                           base.R) > 1e-12)
    sph = DeviceParams.spherical()
    tilt = math.degrees(home_axis_tilt(sph))
    bad += int(abs(tilt - 54.7356103172) > 1e-9)
    return SuiteResult("device", bad, 0, f"{bad} failures; 3T+3R home axis tilt from z = {tilt:.10g} deg")


ACCEPTANCE = (
    ("1", translational_isotropy),
    ("2", wrist_isotropy),
    ("3", decoupling),
    ("4", device_round_trips),
    ("5", jacobian_fd),
    ("6", workspace_oracle),
    ("7", inscribed_cube),
    ("8", transmission),
    ("9", wrist_limits),
    ("10", sizing_scale),
    ("11", home_axis_geometry),
)

INVARIANTS = (
    ("geometry", rotation_chain),
    ("orthoglide", orthoglide_invariants),
    ("wrist", wrist_invariants),
    ("transmission", transmission_invariants),
    ("workspace", workspace_invariants),
    ("design", design_invariants),
    ("device", device_invariants),
)


def run_all(scale: float = 1.0, only=None, out=print, timing: bool = False) -> bool:
    """Run every suite, print one line per suite, return overall success."""
    ok = True
    for label, fn in ACCEPTANCE + INVARIANTS:
        if only and label not in only and fn.__name__ not in only:
            continue
        t0 = time.perf_counter()
        try:
            r = fn()
            passed = r.passed(scale)
            line = f"{'PASS' if passed else 'FAIL'} [{label}] {r.name}: {r.detail} (bound {r.bound * scale:.1e})"
        except Exception as e:  # a crash is a failure of that suite
            passed = False
            line = f"FAIL [{label}] {fn.__name__}: {type(e).__name__}: {e}"
        if timing:
            line += f" [{time.perf_counter() - t0:.1f}s]"
        out(line)
        ok &= passed
    return ok
