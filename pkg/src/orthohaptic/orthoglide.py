"""
Translational kinematics of the Orthoglide.

Each leg is reduced to one constraint: the platform reference point ``p``
stays at distance ``L`` from the point ``rho_i * e_i`` slid along the i-th
fixed prismatic axis,

    || p - rho_i e_i || = L.

Base and platform offsets of the real PRPaR legs are absorbed into the
origin of ``rho`` and into ``p``. With the default orthonormal axes the home
(isotropic) posture is ``p = 0``, ``rho = (L, L, L)``, where every leg is
aligned with its own prismatic axis and the Jacobian is the identity.

Vectorized ``*_batch`` helpers work on ``(N, 3)`` point arrays and are what
the workspace and design code use; the scalar functions raise on failure.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BranchAmbiguity,
    NoAssembly,
    OutsideCylinder,
    ParallelSingularity,
    RangeLimit,
    SerialSingularity,
)
from .geometry import DEFAULT_TOL, Tolerances, vec3


@dataclass(frozen=True, eq=False)
class OrthoglideParams:
    """Leg length, prismatic stroke and the three fixed axes (rows of ``axes``)."""

    L: float = 1.0
    rho_min: float = 0.1
    rho_max: float = 1.9
    axes: np.ndarray = field(default_factory=lambda: np.eye(3))
    tol: Tolerances = DEFAULT_TOL

    def __post_init__(self):
        axes = np.array(self.axes, dtype=float)
        if axes.shape != (3, 3):
            raise ValueError("axes must be a 3x3 array of row vectors")
        if not np.allclose(axes @ axes.T, np.eye(3), rtol=0, atol=self.tol.unit):
            raise ValueError("prismatic axes must be mutually orthogonal unit vectors")
        if not (np.isfinite(self.L) and self.L > 0):
            raise ValueError("leg length L must be positive")
        # rho_min == rho_max is allowed: the degenerate single-point stroke
        if not (self.rho_min <= self.rho_max):
            raise ValueError("rho_min must not exceed rho_max")
        axes.setflags(write=False)
        object.__setattr__(self, "axes", axes)

    @property
    def home_det_sign(self) -> float:
        # leg directions are -e_i at home, so det A = det(-axes)
        return float(np.sign(np.linalg.det(-self.axes)))

    def with_range(self, rho_min: float, rho_max: float) -> "OrthoglideParams":
        return OrthoglideParams(self.L, rho_min, rho_max, self.axes, self.tol)


@dataclass(frozen=True, eq=False)
class LegState:
    """Unit leg directions ``d`` (rows) and their axial components ``c``."""

    d: np.ndarray
    c: np.ndarray


# ---------------------------------------------------------------------------
# vectorized core
# ---------------------------------------------------------------------------

def leg_terms_batch(P, params: OrthoglideParams):
    """Per-leg quantities for points ``P`` of shape (N, 3).

    Returns ``(rho, r2, arg)`` where ``r2`` is the squared distance of each
    point from each prismatic axis and ``arg = L**2 - r2``; ``rho`` is NaN
    where the point is outside the leg's cylinder (beyond a relative slack of
    ``tol.residual``).
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    L = params.L
    proj = P @ params.axes.T
    r2 = np.einsum("ij,ij->i", P, P)[:, None] - proj**2
    arg = L * L - r2
    inside = arg >= -params.tol.residual * L * L
    sq = np.sqrt(np.where(inside, np.maximum(arg, 0.0), np.nan))
    return proj + sq, r2, arg


def jacobian_batch(P, params: OrthoglideParams):
    """Jacobians and diagnostics for many points at once.

    Returns a dict with ``J`` (N, 3, 3), ``A`` (N, 3, 3), ``c`` (N, 3),
    ``detA`` (N,), ``rho`` (N, 3) and ``r2`` (N, 3). Singular or outside
    points carry NaN Jacobians; no exceptions are raised.
    """
    P = np.atleast_2d(np.asarray(P, dtype=float))
    rho, r2, _ = leg_terms_batch(P, params)
    D = (P[:, None, :] - rho[:, :, None] * params.axes[None, :, :]) / params.L
    c = np.einsum("nij,ij->ni", D, params.axes)
    detA = np.linalg.det(np.nan_to_num(D))
    detA = np.where(np.isnan(rho).any(axis=1), np.nan, detA)
    ok = (np.abs(detA) > params.tol.singular) & np.all(np.abs(c) > params.tol.singular, axis=1)
    J = np.full(D.shape, np.nan)
    if ok.any():
        # J = A^{-1} diag(c)
        Ainv = np.linalg.inv(D[ok])
        J[ok] = Ainv * c[ok][:, None, :]
    return {"J": J, "A": D, "c": c, "detA": detA, "rho": rho, "r2": r2}


def singular_values_batch(J):
    """Ascending singular values of a stack of 3x3 matrices (NaN rows kept)."""
    J = np.asarray(J, dtype=float)
    out = np.full(J.shape[:-1], np.nan)
    ok = np.all(np.isfinite(J), axis=(-2, -1))
    if ok.any():
        out[ok] = np.linalg.svd(J[ok], compute_uv=False)[:, ::-1]
    return out


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------

def ik(p, params: OrthoglideParams, check_limits: bool = True) -> np.ndarray:
    """Prismatic values ``rho`` placing the platform at ``p``.

    The positive square-root branch is used for every leg, so that
    ``rho_i = p.e_i + sqrt(L**2 - r_i**2)`` and home gives ``rho_i = L``.

    Raises:
        OutsideCylinder: if ``p`` is farther than ``L`` from axis ``i``.
        RangeLimit: if ``check_limits`` and some ``rho_i`` leaves the stroke.
    """
    p = vec3(p)
    rho, _, _ = leg_terms_batch(p[None, :], params)
    rho = rho[0]
    for i in range(3):
        if np.isnan(rho[i]):
            raise OutsideCylinder(i + 1)
    if check_limits:
        slack = params.tol.residual * params.L
        for i in range(3):
            if not (params.rho_min - slack <= rho[i] <= params.rho_max + slack):
                raise RangeLimit(i + 1, f"RangeLimit({i + 1}): rho={rho[i]:.9g} outside "
                                        f"[{params.rho_min:.9g}, {params.rho_max:.9g}]")
    return rho


def leg_state(p, rho, params: OrthoglideParams) -> LegState:
    p = vec3(p)
    rho = vec3(rho)
    d = (p[None, :] - rho[:, None] * params.axes) / params.L
    c = np.einsum("ij,ij->i", d, params.axes)
    return LegState(d=d, c=c)


def _working_mode(p, rho, params: OrthoglideParams) -> tuple:
    st = leg_state(p, rho, params)
    det = np.linalg.det(st.d) * params.home_det_sign
    return det, st.c


def fk(rho, params: OrthoglideParams, seed=None) -> np.ndarray:
    """Platform position for prismatic values ``rho``.

    Exact three-sphere intersection: the two radical-plane equations fix a
    line, which is intersected with the first sphere. Of the (at most) two
    roots the one in the working assembly mode is returned, i.e. the one
    whose leg-direction determinant has the home sign and whose legs all
    point back toward their sliders (``c_i <= 0``), which is the branch
    :func:`ik` produces.

    Raises:
        NoAssembly: if the spheres do not meet, or meet only outside the
            working mode.
        BranchAmbiguity: if both roots qualify and no ``seed`` resolves it.
    """
    rho = vec3(rho)
    L = params.L
    tol = params.tol
    C = rho[:, None] * params.axes
    n = np.cross(C[0] - C[1], C[0] - C[2])
    nn = n @ n
    scale = max(L, float(np.max(np.abs(rho))))
    if np.sqrt(nn) <= tol.singular * scale * scale:
        raise NoAssembly("sphere centres are collinear")
    # 2 (C0 - Ci).p = |C0|^2 - |Ci|^2  for i = 1, 2
    M = 2.0 * np.array([C[0] - C[1], C[0] - C[2]])
    b = np.array([C[0] @ C[0] - C[1] @ C[1], C[0] @ C[0] - C[2] @ C[2]])
    p0 = np.linalg.lstsq(M, b, rcond=None)[0]
    u = n / np.sqrt(nn)
    w = p0 - C[0]
    # |w + t u|^2 = L^2
    half_b = w @ u
    disc = half_b**2 - (w @ w - L * L)
    if disc < -tol.residual * L * L:
        raise NoAssembly(f"spheres do not intersect (discriminant {disc:.3e})")
    root = np.sqrt(max(disc, 0.0))
    cands = [p0 + (-half_b + s * root) * u for s in (1.0, -1.0)]

    good = []
    for q in cands:
        det, c = _working_mode(q, rho, params)
        if det > -tol.singular and np.all(c <= tol.singular):
            good.append((q, det))
    if not good:
        raise NoAssembly("no intersection point lies in the working assembly mode")
    if len(good) == 2:
        regular = [g for g in good if g[1] > tol.singular]
        if len(regular) == 1:
            good = regular
        elif seed is not None:
            s = vec3(seed)
            good = [min(good, key=lambda g: np.linalg.norm(g[0] - s))]
        elif np.linalg.norm(good[0][0] - good[1][0]) <= tol.residual * L:
            good = [((good[0][0] + good[1][0]) / 2, 0.0)]
        else:
            raise BranchAmbiguity("both intersection points satisfy the branch rule")
    return good[0][0]


def jacobian(p, params: OrthoglideParams) -> np.ndarray:
    """Matrix ``J`` with ``p_dot = J @ rho_dot``.

    Differentiating the leg constraint gives ``d_i . p_dot = c_i rho_dot_i``,
    hence ``J = A^{-1} diag(c)`` with the leg directions as rows of ``A``.

    Raises:
        SerialSingularity: if some ``|c_i| <= tol.singular``.
        ParallelSingularity: if ``|det A| <= tol.singular``.
    """
    rho = ik(p, params, check_limits=False)
    st = leg_state(p, rho, params)
    tol = params.tol
    serial = tuple(i + 1 for i in range(3) if abs(st.c[i]) <= tol.singular)
    if serial:
        raise SerialSingularity(serial[0], serial)
    if abs(np.linalg.det(st.d)) <= tol.singular:
        raise ParallelSingularity("leg directions are linearly dependent")
    return np.linalg.solve(st.d, np.diag(st.c))


def amplification_factors(p, params: OrthoglideParams) -> tuple:
    """Velocity amplification factors ``(s_min, s_mid, s_max)`` at ``p``."""
    s = np.linalg.svd(jacobian(p, params), compute_uv=False)
    return float(s[2]), float(s[1]), float(s[0])


@dataclass(frozen=True)
class SingularityReport:
    """``kind`` is one of ``Regular``, ``Serial``, ``Parallel``, ``Outside``."""

    kind: str
    legs: tuple = ()
    det: float = float("nan")


def singularity_report(p, params: OrthoglideParams) -> SingularityReport:
    """Classify ``p``; never raises.

    ``Outside`` covers points beyond a cylinder and points that only the
    opposite assembly mode reaches.
    """
    try:
        rho = ik(p, params, check_limits=False)
    except OutsideCylinder as e:
        return SingularityReport("Outside", (e.leg,))
    st = leg_state(p, rho, params)
    tol = params.tol
    serial = tuple(i + 1 for i in range(3) if abs(st.c[i]) <= tol.singular)
    det = float(np.linalg.det(st.d))
    if serial:
        return SingularityReport("Serial", serial, det)
    if abs(det) <= tol.singular:
        return SingularityReport("Parallel", (), det)
    if det * params.home_det_sign < 0:
        return SingularityReport("Outside", (), det)
    return SingularityReport("Regular", (), det)
