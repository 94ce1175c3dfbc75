"""
Sizing of the leg length and prismatic stroke.

Given a cube edge to cover and a bound ``psi`` on the velocity amplification
factors, find the smallest leg length ``L`` for which a cube of that edge,
centred on the diagonal near the isotropic point, lies in the workspace with
every amplification factor in ``[1/psi, psi]``. The stroke is then the
tightest interval covering the prismatic values needed over the cube.

Every constraint is homogeneous in length, so the optimal ``L`` scales
linearly with the requested edge.
"""

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible
from .geometry import DEFAULT_TOL, Tolerances
from .orthoglide import OrthoglideParams, jacobian_batch, singular_values_batch
from .workspace import CubeResult, WorkspaceSpec, member_mask


@dataclass(frozen=True)
class DesignSpec:
    required_edge: float
    psi: float = 2.0
    margin: float = 0.0

    def __post_init__(self):
        if not self.required_edge > 0:
            raise ValueError("required_edge must be positive")
        if not self.psi >= 1.0:
            raise ValueError("psi must be >= 1")
        if not self.margin >= 0:
            raise ValueError("margin must be >= 0")


@dataclass(frozen=True, eq=False)
class DesignReport:
    feasible: bool
    offset: float
    center: np.ndarray
    edge: float
    sigma_min: float
    sigma_max: float
    membership_failures: int
    sigma_failures: int
    grid_n: int


@dataclass(frozen=True, eq=False)
class DesignResult:
    L: float
    rho_min: float
    rho_max: float
    cube: CubeResult
    worst_sigma: tuple
    report: DesignReport


def cube_grid(center, edge: float, m: int, axes=None) -> np.ndarray:
    """``m**3`` points filling the axis-aligned cube, row-major order."""
    axes = np.eye(3) if axes is None else np.asarray(axes)
    g = np.linspace(-0.5, 0.5, m) * edge
    X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
    local = np.column_stack([X.ravel(), Y.ravel(), Z.ravel()])
    return np.asarray(center, dtype=float) + local @ axes


def default_offsets(edge: float, k: int = 21) -> np.ndarray:
    return np.linspace(-0.5, 0.5, k) * edge


def _score(P, params: OrthoglideParams, psi: float, tol: Tolerances):
    spec = WorkspaceSpec(params)
    mem = member_mask(P, spec)
    sv = np.full((len(P), 3), np.nan)
    if mem.any():
        sv[mem] = singular_values_batch(jacobian_batch(P[mem], params)["J"])
    finite = np.all(np.isfinite(sv), axis=1)
    n_mem_fail = int(np.count_nonzero(~(mem & finite)))
    if n_mem_fail == len(P):
        return n_mem_fail, 0, np.nan, np.nan, np.inf
    s_lo = float(np.nanmin(sv[:, 0]))
    s_hi = float(np.nanmax(sv[:, 2]))
    bad_sigma = (sv[:, 0] < 1.0 / psi - tol.residual) | (sv[:, 2] > psi + tol.residual)
    n_sig_fail = int(np.count_nonzero(bad_sigma & finite))
    badness = max(np.log(s_hi), -np.log(s_lo)) if n_mem_fail == 0 else np.inf
    return n_mem_fail, n_sig_fail, s_lo, s_hi, badness


def evaluate_design(L: float, rho_min: float, rho_max: float, spec: DesignSpec,
                    m: int = 9, offsets=None, axes=None, tol: Tolerances = DEFAULT_TOL
                    ) -> DesignReport:
    """Worst-case behaviour of a candidate design over the required cube.

    The cube (edge ``spec.required_edge``) is centred at the isotropic point
    moved along the diagonal by each of ``offsets``; the offset whose worst
    amplification factor is closest to 1 is reported. Pass infinite stroke
    limits to test the leg length alone.
    """
    params = OrthoglideParams(L, rho_min, rho_max,
                              np.eye(3) if axes is None else axes, tol)
    edge = spec.required_edge
    offsets = default_offsets(edge) if offsets is None else np.asarray(offsets, dtype=float)
    diag = params.axes.sum(axis=0)
    best = None
    for t in offsets:
        center = t * diag
        P = cube_grid(center, edge, m, params.axes)
        mf, sf, s_lo, s_hi, badness = _score(P, params, spec.psi, tol)
        key = (mf > 0, badness, abs(t))
        if best is None or key < best[0]:
            best = (key, t, center, mf, sf, s_lo, s_hi)
    _, t, center, mf, sf, s_lo, s_hi = best
    return DesignReport(mf == 0 and sf == 0, float(t), center, edge, s_lo, s_hi, mf, sf, m)


def size_device(spec: DesignSpec, m: int = 9, rel_width: float = 1e-3,
                tol: Tolerances = DEFAULT_TOL) -> DesignResult:
    """Smallest feasible leg length and the matching stroke.

    The bracket on ``L`` starts at the required edge and doubles until a
    feasible length appears (giving up past ``1000 * required_edge``), then
    bisection narrows it to ``rel_width``. The winner is re-checked on a
    grid twice as fine; if that check fails the search is repeated on the
    fine grid.

    Raises:
        Infeasible: if no length up to ``1000 * required_edge`` passes.
    """
    if not spec.psi > 1.0:
        raise Infeasible("psi must exceed 1: only the isotropic point has all factors equal to 1")
    inf = np.inf
    edge = spec.required_edge

    def ok(L, grid):
        return evaluate_design(L, -inf, inf, spec, m=grid, tol=tol).feasible

    def search(grid):
        lo, hi = 0.0, edge
        while not ok(hi, grid):
            lo, hi = hi, 2.0 * hi
            if hi > 1000.0 * edge:
                raise Infeasible(f"no leg length up to {1000 * edge:.6g} meets psi={spec.psi:.6g}")
        while hi - lo > rel_width * hi:
            mid = 0.5 * (lo + hi)
            if ok(mid, grid):
                hi = mid
            else:
                lo = mid
        return hi

    L = search(m)
    fine = 2 * m - 1
    if not ok(L, fine):
        L = search(fine)
    rep = evaluate_design(L, -inf, inf, spec, m=fine, tol=tol)

    P = cube_grid(rep.center, edge, fine)
    params = OrthoglideParams(L, -inf, inf, np.eye(3), tol)
    rho = jacobian_batch(P, params)["rho"]
    rho_min = float(np.min(rho)) - spec.margin
    rho_max = float(np.max(rho)) + spec.margin
    return DesignResult(L, rho_min, rho_max, CubeResult(rep.center, edge),
                        (rep.sigma_min, rep.sigma_max), rep)
