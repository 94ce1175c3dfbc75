"""
Orientation kinematics of the two wrist variants.

``Hybrid2R1R`` is the two-dof agile eye (pitch about x, yaw about y) carrying
a serial roll joint about z: ``R = Rx(t1) Ry(t2) Rz(phi)``.

``Spherical3R`` is the three-dof agile eye. Leg ``i`` turns a motor about
``u_i``; the intermediate link direction ``m_i(t) = Rot(u_i, t) m_i0`` must
stay orthogonal to the platform marker ``R v_i``:

    m_i(t_i) . (R v_i) = 0.

Jacobians map joint rates to the angular velocity of the moving body
expressed in the wrist base frame. Both wrists are isotropic (Jacobian equal
to the identity) at their home posture ``R = I``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    GimbalDegeneracy,
    JacobianSingular,
    LegDegeneracy,
    LimitViolation,
    NoConvergence,
    OutOfRange,
    WristSingular,
)
from .geometry import (
    DEFAULT_TOL,
    Z_AXIS,
    Tolerances,
    cross3,
    orthonormalize,
    rot_exp,
    rot_x,
    rot_y,
    rot_z,
    rotation_between,
    wrap_angle,
)

HYBRID = "Hybrid2R1R"
SPHERICAL = "Spherical3R"
DEFAULT_LIMIT = np.pi / 4
DIAGONAL = np.ones(3) / np.sqrt(3.0)


@dataclass(frozen=True, eq=False)
class WristVariant:
    """Wrist type, its mounting rotation and the pitch/yaw (or motor) bound.

    The distinguished axis at home is ``mount @ z``: ``z`` itself for the
    hybrid wrist and the cube diagonal ``(1, 1, 1)/sqrt(3)`` for the
    spherical one.
    """

    tag: str = HYBRID
    mount: np.ndarray = field(default_factory=lambda: np.eye(3))
    limit: float = DEFAULT_LIMIT
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        if self.tag not in (HYBRID, SPHERICAL):
            raise ValueError(f"unknown wrist variant {self.tag!r}")
        M = orthonormalize(self.mount)
        if np.max(np.abs(M - np.asarray(self.mount, dtype=float))) > 1e-10:
            raise ValueError("mount is not a proper rotation")
        target = Z_AXIS if self.tag == HYBRID else DIAGONAL
        if np.max(np.abs(M @ Z_AXIS - target)) > self.tol.unit:
            raise ValueError(f"mount must carry z onto {target} for {self.tag}")
        if not (0.0 < self.limit < np.pi / 2):
            raise ValueError("joint limit must lie in (0, pi/2)")
        M.setflags(write=False)
        object.__setattr__(self, "mount", M)

    @classmethod
    def hybrid(cls, limit: float = DEFAULT_LIMIT, mount=None, tol: Tolerances = DEFAULT_TOL):
        return cls(HYBRID, np.eye(3) if mount is None else mount, limit, tol)

    @classmethod
    def spherical(cls, limit: float = DEFAULT_LIMIT, mount=None, tol: Tolerances = DEFAULT_TOL):
        if mount is None:
            mount = rotation_between(Z_AXIS, DIAGONAL)
        return cls(SPHERICAL, mount, limit, tol)

    @property
    def home_axis(self) -> np.ndarray:
        return self.mount @ Z_AXIS


@dataclass(frozen=True, eq=False)
class SphericalLegGeometry:
    """Motor axes ``u``, platform markers ``v`` and link references ``m0`` (rows)."""

    u: np.ndarray = field(default_factory=lambda: np.eye(3))
    v: np.ndarray = field(default_factory=lambda: np.roll(np.eye(3), -1, axis=0))
    m0: np.ndarray = field(default_factory=lambda: np.roll(np.eye(3), -2, axis=0))
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        arrs = {}
        for name in ("u", "v", "m0"):
            a = np.array(getattr(self, name), dtype=float)
            if a.shape != (3, 3):
                raise ValueError(f"{name} must hold three row vectors")
            if np.any(np.abs(np.linalg.norm(a, axis=1) - 1.0) > self.tol.unit):
                raise ValueError(f"rows of {name} must be unit vectors")
            a.setflags(write=False)
            arrs[name] = a
        if np.any(np.abs(np.einsum("ij,ij->i", arrs["u"], arrs["m0"])) > self.tol.unit):
            raise ValueError("m0_i must be orthogonal to u_i")
        for k, a in arrs.items():
            object.__setattr__(self, k, a)
        w0 = np.array([cross3(arrs["u"][i], arrs["m0"][i]) for i in range(3)])
        w0.setflags(write=False)
        object.__setattr__(self, "_w0", w0)

    def links(self, theta) -> np.ndarray:
        """All three link directions as rows."""
        theta = np.asarray(theta, dtype=float)
        return np.cos(theta)[:, None] * self.m0 + np.sin(theta)[:, None] * self._w0

    def link(self, i: int, theta: float) -> np.ndarray:
        return np.cos(theta) * self.m0[i] + np.sin(theta) * self._w0[i]


DEFAULT_SPM = SphericalLegGeometry()


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitCheck:
    ok: bool
    offending: tuple = ()

    def __bool__(self):
        return self.ok


def wrist_limits_check(angles, variant: WristVariant) -> LimitCheck:
    """Which bounded joints of ``angles`` exceed ``variant.limit``.

    For the hybrid wrist only pitch and yaw are bounded; roll never offends.
    For the spherical wrist all three motor angles share the same bound.
    Returned joint indices are 1-based.
    """
    a = np.asarray(angles, dtype=float)
    bounded = (0, 1) if variant.tag == HYBRID else (0, 1, 2)
    slack = variant.tol.residual
    bad = tuple(i + 1 for i in bounded if not abs(a[i]) <= variant.limit + slack)
    return LimitCheck(not bad, bad)


# ---------------------------------------------------------------------------
# hybrid 2R + 1R
# ---------------------------------------------------------------------------

def hybrid_fk(angles, limit: float = DEFAULT_LIMIT, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``Rx(pitch) Ry(yaw) Rz(roll)``; roll is unbounded.

    Raises:
        LimitViolation: if pitch or yaw exceeds ``limit``.
    """
    t1, t2, phi = (float(x) for x in angles)
    for k, t in enumerate((t1, t2)):
        if not abs(t) <= limit + tol.residual:
            raise LimitViolation(k + 1, f"LimitViolation({k + 1}): {np.degrees(t):.6g} deg")
    return rot_x(t1) @ rot_y(t2) @ rot_z(phi)


def hybrid_ik(R, limit: float = DEFAULT_LIMIT, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Pitch, yaw and roll of ``R``; roll is reported in (-pi, pi].

    Raises:
        GimbalDegeneracy: if yaw reaches +-90 deg.
        OutOfRange: if pitch or yaw exceeds ``limit``.
    """
    R = np.asarray(R, dtype=float)
    s2 = float(np.clip(R[0, 2], -1.0, 1.0))
    c2 = np.hypot(R[0, 0], R[0, 1])
    if c2 <= tol.singular:
        raise GimbalDegeneracy("yaw at +-90 deg leaves pitch and roll undetermined")
    t2 = np.arctan2(s2, c2)
    t1 = np.arctan2(-R[1, 2], R[2, 2])
    phi = wrap_angle(np.arctan2(-R[0, 1], R[0, 0]))
    bad = tuple(k + 1 for k, t in enumerate((t1, t2)) if abs(t) > limit + tol.residual)
    if bad:
        raise OutOfRange(bad, f"OutOfRange: pitch={np.degrees(t1):.6g} deg, "
                              f"yaw={np.degrees(t2):.6g} deg beyond +-{np.degrees(limit):.6g}")
    return np.array([t1, t2, phi])


def hybrid_jacobian(angles) -> np.ndarray:
    """Columns are the three joint axes in the base frame; ``det = cos(yaw)``."""
    t1, t2, _ = (float(x) for x in angles)
    Rx = rot_x(t1)
    return np.column_stack([[1.0, 0.0, 0.0], Rx[:, 1], Rx @ rot_y(t2)[:, 2]])


# ---------------------------------------------------------------------------
# spherical 3R
# ---------------------------------------------------------------------------

def spm_residuals(R, theta, geom: SphericalLegGeometry = DEFAULT_SPM) -> np.ndarray:
    R = np.asarray(R, dtype=float)
    return np.einsum("ij,ij->i", geom.links(theta), geom.v @ R.T)


def spm_ik(R, geom: SphericalLegGeometry = DEFAULT_SPM) -> np.ndarray:
    """Motor angles of the home working mode for orientation ``R``.

    Each leg reduces to ``A cos t + B sin t = 0``; the root continuous with
    ``t = 0`` at ``R = I`` is ``t = atan2(A, -B)``.

    Raises:
        LegDegeneracy: if ``A`` and ``B`` both vanish for some leg.
    """
    R = np.asarray(R, dtype=float)
    tol = geom.tol
    out = np.empty(3)
    for i in range(3):
        w = R @ geom.v[i]
        A = geom.m0[i] @ w
        B = geom._w0[i] @ w
        if np.hypot(A, B) <= tol.singular:
            raise LegDegeneracy(i + 1)
        out[i] = np.arctan2(A, -B)
    return out


def _spm_blocks(R, theta, geom: SphericalLegGeometry):
    # linearized constraints: K omega = D theta_dot
    K = np.empty((3, 3))
    D = np.empty(3)
    for i in range(3):
        w = R @ geom.v[i]
        m = geom.link(i, theta[i])
        K[i] = cross3(w, m)
        D[i] = -cross3(geom.u[i], m) @ w
    return K, D


def _newton_step(R, f, err, theta, geom):
    K, _ = _spm_blocks(R, theta, geom)
    if abs(np.linalg.det(K)) <= geom.tol.singular:
        raise JacobianSingular("constraint Jacobian lost rank during Newton solve")
    delta = np.linalg.solve(K, -f)
    step = 1.0
    while True:
        R_new = rot_exp(step * delta) @ R
        f_new = spm_residuals(R_new, theta, geom)
        err_new = np.max(np.abs(f_new))
        if err_new <= err or step < 1e-6:
            return R_new, f_new, err_new
        step *= 0.5


def spm_fk(theta, geom: SphericalLegGeometry = DEFAULT_SPM, seed=None,
           max_iter: int = 50) -> np.ndarray:
    """Platform orientation for motor angles ``theta`` by Newton iteration.

    The unknown is an incremental rotation vector applied on the left of the
    current estimate, starting from ``seed`` (identity by default). A step
    that increases the residual is halved. After convergence one more step
    is taken if it lowers the residual further.

    Raises:
        NoConvergence: after ``max_iter`` steps, or if the solution found is
            not on the home working mode.
        JacobianSingular: if the Newton system loses rank.
    """
    theta = np.asarray(theta, dtype=float)
    tol = geom.tol
    R = np.eye(3) if seed is None else orthonormalize(seed)
    f = spm_residuals(R, theta, geom)
    err = np.max(np.abs(f))
    for _ in range(max_iter):
        if err <= tol.residual:
            break
        R, f, err = _newton_step(R, f, err, theta, geom)
    else:
        if err > tol.residual:
            raise NoConvergence(f"residual {err:.3e} after {max_iter} iterations")
    for _ in range(2):
        R_new, f_new, err_new = _newton_step(R, f, err, theta, geom)
        if not err_new < err:
            break
        R, f, err = R_new, f_new, err_new
    # products of exact rotations drift only at rounding level
    R = orthonormalize(R)
    back = spm_ik(R, geom)
    if np.max(np.abs(wrap_angle(back - theta))) > 1e3 * tol.residual:
        raise NoConvergence("Newton converged to a different working mode")
    return R


def spm_jacobian(R, geom: SphericalLegGeometry = DEFAULT_SPM) -> np.ndarray:
    """Map from motor rates to angular velocity, ``K^{-1} diag(D)``.

    Raises:
        WristSingular: if either the constraint matrix or a leg's input term
            is rank deficient within ``tol.singular``.
    """
    R = np.asarray(R, dtype=float)
    theta = spm_ik(R, geom)
    K, D = _spm_blocks(R, theta, geom)
    if abs(np.linalg.det(K)) <= geom.tol.singular or np.any(np.abs(D) <= geom.tol.singular):
        raise WristSingular("spherical wrist Jacobian is rank deficient")
    return np.linalg.solve(K, np.diag(D))


def wrist_rotation(angles, variant: WristVariant, geom: SphericalLegGeometry = DEFAULT_SPM,
                   seed=None) -> np.ndarray:
    """Wrist orientation in the wrist's own frame, enforcing the joint bounds."""
    if variant.tag == HYBRID:
        return hybrid_fk(angles, variant.limit, variant.tol)
    chk = wrist_limits_check(angles, variant)
    if not chk:
        j = chk.offending[0]
        raise LimitViolation(j, f"LimitViolation({j}): motor angle beyond +-"
                                f"{np.degrees(variant.limit):.6g} deg")
    return spm_fk(angles, geom, seed=seed)


def wrist_angles(Rw, variant: WristVariant, geom: SphericalLegGeometry = DEFAULT_SPM) -> np.ndarray:
    """Joint angles for a wrist-frame orientation, enforcing the joint bounds."""
    if variant.tag == HYBRID:
        return hybrid_ik(Rw, variant.limit, variant.tol)
    theta = spm_ik(Rw, geom)
    chk = wrist_limits_check(theta, variant)
    if not chk:
        raise OutOfRange(chk.offending)
    return theta


def wrist_jacobian(angles, Rw, variant: WristVariant,
                   geom: SphericalLegGeometry = DEFAULT_SPM) -> np.ndarray:
    if variant.tag == HYBRID:
        return hybrid_jacobian(angles)
    return spm_jacobian(Rw, geom)

