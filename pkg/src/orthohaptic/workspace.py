"""
Translational workspace: membership, conditioning maps and the inscribed cube.

A point belongs to the workspace when every leg reaches it (it lies inside
the three leg cylinders), every prismatic value stays within its stroke, the
point is reached in the working assembly mode (the leg directions keep the
orientation they have at home, so no parallel singularity separates the
point from home) and, optionally, the velocity amplification factors stay in
``[1/psi, psi]``.
"""

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import EmptyWorkspace
from .orthoglide import (
    OrthoglideParams,
    jacobian_batch,
    leg_terms_batch,
    singular_values_batch,
)

# failure codes, in the order they are tested
MEMBER, CYLINDER, RANGE, PARALLEL, AMPLIFICATION = 0, 1, 2, 3, 4
_REASONS = {CYLINDER: "Cylinder", RANGE: "Range", PARALLEL: "Parallel",
            AMPLIFICATION: "Amplification"}

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class WorkspaceSpec:
    params: OrthoglideParams
    psi: float = None
    exclude_singular_shell: float = 0.0

    def __post_init__(self):
        if self.psi is not None and not self.psi >= 1.0:
            raise ValueError("amplification bound psi must be >= 1")
        if not (0.0 <= self.exclude_singular_shell < 1.0):
            raise ValueError("exclude_singular_shell must lie in [0, 1)")


@dataclass(frozen=True)
class Membership:
    ok: bool
    reason: str = None
    leg: int = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class CubeResult:
    center: np.ndarray
    edge: float
    axis_aligned: bool = True

    def corners(self, params: OrthoglideParams) -> np.ndarray:
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
                         dtype=float)
        return self.center + 0.5 * self.edge * signs @ params.axes


def classify_batch(P, spec: WorkspaceSpec):
    """Failure code per point (``MEMBER`` when the point belongs) and the leg.

    Returns ``(code, leg)`` arrays; ``leg`` is 1-based and 0 where no single
    leg is responsible.
    """
    params = spec.params
    P = np.atleast_2d(np.asarray(P, dtype=float))
    N = P.shape[0]
    code = np.zeros(N, dtype=int)
    leg = np.zeros(N, dtype=int)
    L = params.L
    tol = params.tol

    rho, r2, _ = leg_terms_batch(P, params)
    rmax = L * (1.0 - spec.exclude_singular_shell)
    cyl_bad = np.isnan(rho) | (r2 > rmax * rmax * (1.0 + tol.residual))
    slack = tol.residual * L
    rng_bad = ~cyl_bad & ((rho < params.rho_min - slack) | (rho > params.rho_max + slack))

    def _mark(bad, c):
        new = bad.any(axis=1) & (code == MEMBER)
        code[new] = c
        leg[new] = np.argmax(bad[new], axis=1) + 1

    _mark(cyl_bad, CYLINDER)
    _mark(rng_bad, RANGE)

    todo = code == MEMBER
    if todo.any():
        rho_t = rho[todo]
        D = (P[todo][:, None, :] - rho_t[:, :, None] * params.axes[None]) / L
        det = np.linalg.det(D) * params.home_det_sign
        idx = np.flatnonzero(todo)
        code[idx[~(det > tol.singular)]] = PARALLEL

    if spec.psi is not None:
        todo = code == MEMBER
        if todo.any():
            sv = singular_values_batch(jacobian_batch(P[todo], params)["J"])
            s_lo, s_hi = sv[:, 0], sv[:, 2]
            ok = (s_lo >= 1.0 / spec.psi - tol.residual) & (s_hi <= spec.psi + tol.residual)
            idx = np.flatnonzero(todo)
            code[idx[~ok]] = AMPLIFICATION
    return code, leg


def member_mask(P, spec: WorkspaceSpec) -> np.ndarray:
    return classify_batch(P, spec)[0] == MEMBER


def is_member(p, spec: WorkspaceSpec) -> Membership:
    """Membership of one point with the first failing constraint, if any."""
    code, leg = classify_batch(np.asarray(p, dtype=float)[None, :], spec)
    c = int(code[0])
    if c == MEMBER:
        return Membership(True)
    return Membership(False, _REASONS[c], int(leg[0]) or None)


# ---------------------------------------------------------------------------
# inscribed cube
# ---------------------------------------------------------------------------

def cube_boundary_template(n: int) -> np.ndarray:
    """Sample points on the surface of the unit cube centred at the origin.

    Corners, edge midpoints and face centres are always present; each face
    also carries an ``n x n`` grid.
    """
    if n < 3:
        raise ValueError("face grid resolution must be >= 3")
    g = np.linspace(-0.5, 0.5, n)
    A, B = np.meshgrid(g, g, indexing="ij")
    A, B = A.ravel(), B.ravel()
    pts = []
    for ax in range(3):
        for side in (-0.5, 0.5):
            f = np.empty((A.size, 3))
            others = [k for k in range(3) if k != ax]
            f[:, ax] = side
            f[:, others[0]] = A
            f[:, others[1]] = B
            pts.append(f)
    h = (-0.5, 0.0, 0.5)
    extra = np.array([[a, b, c] for a in h for b in h for c in h
                      if sum(abs(v) == 0.5 for v in (a, b, c)) >= 1])
    pts.append(extra)
    return np.unique(np.round(np.vstack(pts), 15), axis=0)


def _diagonal(params: OrthoglideParams) -> np.ndarray:
    return params.axes.sum(axis=0)


def _degenerate_cube(spec: WorkspaceSpec) -> CubeResult:
    # rho_min == rho_max: on the diagonal rho(t) = t + sqrt(L^2 - 2 t^2) rises
    # monotonically from -L/sqrt(2) up to its peak at t = L/sqrt(6)
    params = spec.params
    L, r0 = params.L, params.rho_min
    lo, hi = -L / math.sqrt(2.0), L / math.sqrt(6.0)

    def f(t):
        return t + math.sqrt(max(L * L - 2.0 * t * t, 0.0)) - r0

    if f(lo) > 0 or f(hi) < 0:
        raise EmptyWorkspace("the stroke reaches no point of the diagonal")
    t = brentq(f, lo, hi, xtol=1e-15 * L)
    center = t * _diagonal(params)
    if not member_mask(center[None, :], spec)[0]:
        raise EmptyWorkspace("the single reachable diagonal point is not a member")
    return CubeResult(center, 0.0)


def largest_cube(spec: WorkspaceSpec, n: int = 17, scan: int = 41) -> CubeResult:
    """Largest axis-aligned cube, centred on the diagonal, inside the workspace.

    For a centre ``t (e1 + e2 + e3)`` the largest feasible edge is found by
    bisection, a candidate being feasible when all its boundary samples are
    members. The centre is located by a coarse scan of ``scan`` points
    followed by golden-section refinement around the best one.

    Raises:
        EmptyWorkspace: if no diagonal point is a member.
    """
    params = spec.params
    L = params.L
    if params.rho_max - params.rho_min <= params.tol.residual * L:
        return _degenerate_cube(spec)

    T = cube_boundary_template(n) @ params.axes
    diag = _diagonal(params)

    def feasible(t, s):
        return bool(member_mask(t * diag + s * T, spec).all())

    def best_edge(t):
        if not member_mask((t * diag)[None, :], spec)[0]:
            return 0.0
        lo, hi = 0.0, 2.0 * L
        while hi - lo > 1e-10 * L:
            mid = 0.5 * (lo + hi)
            if feasible(t, mid):
                lo = mid
            else:
                hi = mid
        return lo

    t_lim = L / math.sqrt(2.0)
    ts = np.linspace(-t_lim, t_lim, scan)
    edges = np.array([best_edge(t) for t in ts])
    if not np.any(edges > 0.0) and not any(member_mask((t * diag)[None, :], spec)[0] for t in ts):
        raise EmptyWorkspace("no point of the diagonal belongs to the workspace")

    k = int(np.argmax(edges))
    a, b = ts[max(k - 1, 0)], ts[min(k + 1, scan - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = best_edge(c), best_edge(d)
    while b - a > 1e-7 * L:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = best_edge(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = best_edge(d)
    cands = [(edges[k], ts[k]), (fc, c), (fd, d)]
    edge, t = max(cands, key=lambda e: e[0])
    return CubeResult(t * diag, float(edge))


# ---------------------------------------------------------------------------
# conditioning map
# ---------------------------------------------------------------------------

def grid_points(box, n) -> np.ndarray:
    """Row-major grid (x slowest, z fastest).

    ``box`` is either ``(lo, hi)`` applied to every axis or three such pairs;
    ``n`` is an int or a triple; an axis with a single sample takes the
    box midpoint.
    """
    box = np.asarray(box, dtype=float)
    if box.shape == (2,):
        box = np.tile(box, (3, 1))
    ns = (n, n, n) if np.ndim(n) == 0 else tuple(n)
    if any(int(k) < 1 for k in ns):
        raise ValueError("grid needs at least one sample per axis")
    axes = [np.linspace(box[k, 0], box[k, 1], int(ns[k])) if int(ns[k]) > 1
            else np.array([0.5 * (box[k, 0] + box[k, 1])]) for k in range(3)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])


@dataclass(frozen=True, eq=False)
class ConditioningMap:
    points: np.ndarray
    sigma_min: np.ndarray
    sigma_max: np.ndarray
    kappa: np.ndarray
    member: np.ndarray

    def rows(self):
        for i in range(len(self.points)):
            yield (*self.points[i], self.sigma_min[i], self.sigma_max[i],
                   self.kappa[i], bool(self.member[i]))

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y", "z", "sigma_min", "sigma_max", "kappa", "member"])
        for x, y, z, s0, s1, k, m in self.rows():
            vals = [fmt_float(x), fmt_float(y), fmt_float(z)]
            if m:
                vals += [fmt_float(s0), fmt_float(s1), fmt_float(k)]
            else:
                vals += ["", "", ""]
            vals.append("true" if m else "false")
            w.writerow(vals)
        return buf.getvalue()

    def write_csv(self, path):
        atomic_write(path, self.to_csv_text())


def conditioning_map(spec: WorkspaceSpec, box, n) -> ConditioningMap:
    """Singular values over a grid; non-members carry NaN instead of values."""
    P = grid_points(box, n)
    member = member_mask(P, spec)
    sv = np.full((len(P), 3), np.nan)
    if member.any():
        sv[member] = singular_values_batch(jacobian_batch(P[member], spec.params)["J"])
    # a member on a cylinder boundary is serial-singular: it has no finite J
    member &= np.all(np.isfinite(sv), axis=1)
    s_lo, s_hi = sv[:, 0], sv[:, 2]
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = s_hi / s_lo
    return ConditioningMap(P, s_lo, s_hi, kappa, member)


def read_map_csv(path) -> ConditioningMap:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))

    def num(s):
        return float(s) if s != "" else np.nan

    P = np.array([[float(r["x"]), float(r["y"]), float(r["z"])] for r in rows]).reshape(-1, 3)
    return ConditioningMap(
        P,
        np.array([num(r["sigma_min"]) for r in rows]),
        np.array([num(r["sigma_max"]) for r in rows]),
        np.array([num(r["kappa"]) for r in rows]),
        np.array([r["member"] == "true" for r in rows], dtype=bool),
    )


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def fmt_float(x) -> str:
    """Shortest round-trip representation; integral values lose the ``.0``."""
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    return "0" if s == "-0" else s


def atomic_write(path, text: str):
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
