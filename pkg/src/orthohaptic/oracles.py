"""
Reference computations that deliberately avoid the production code paths.

They are slow or restricted (default axes, positive strokes) and exist to
cross-check the kinematic models: brute-force workspace membership, a dense
sampling estimate of the inscribed cube, and central finite differences.
"""

import numpy as np

from .geometry import rot_log


def brute_member(P, L: float, rho_min: float, rho_max: float, slack: float = 1e-9):
    """Membership from the raw sphere constraints, default axes, ``rho_min > 0``.

    For each leg the larger root of ``rho^2 - 2 rho p_i + |p|^2 - L^2 = 0``
    is taken. The point must also lie on the origin's side of the plane
    through the three sphere centres ``rho_i e_i`` (``sum p_i / rho_i < 1``);
    crossing that plane means switching assembly mode.
    """
    if rho_min <= 0:
        raise ValueError("the plane-side test assumes strictly positive strokes")
    P = np.atleast_2d(np.asarray(P, dtype=float))
    n2 = np.einsum("ij,ij->i", P, P)
    ok = np.ones(len(P), dtype=bool)
    rho = np.empty_like(P)
    for i in range(3):
        disc = P[:, i] ** 2 - (n2 - L * L)
        ok &= disc >= -slack * L * L
        rho[:, i] = P[:, i] + np.sqrt(np.maximum(disc, 0.0))
        ok &= (rho[:, i] >= rho_min - slack * L) & (rho[:, i] <= rho_max + slack * L)
    with np.errstate(divide="ignore", invalid="ignore"):
        side = np.sum(P / rho, axis=1)
    return ok & (side < 1.0)


def dense_cube_oracle(L: float, rho_min: float, rho_max: float, N: int = 201,
                      half_box: float = None, n_centres: int = 2001):
    """Largest diagonal-centred cube from an ``N**3`` membership sample.

    The workspace boundary is located at the midpoints of adjacent
    member/non-member sample pairs. For a centre ``(t, t, t)`` the largest
    admissible half edge is the Chebyshev distance to the nearest boundary
    point (and to the sampling box), maximized over ``n_centres`` values of
    ``t``. The error on the edge is at most one sample spacing.

    Returns ``(edge, t, spacing)``.
    """
    h = 0.65 * L if half_box is None else half_box
    g = np.linspace(-h, h, N)
    X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
    G = np.stack([X, Y, Z], axis=-1)
    m = brute_member(G.reshape(-1, 3), L, rho_min, rho_max).reshape(N, N, N)
    mids = []
    for ax in range(3):
        a = [slice(None)] * 3
        b = [slice(None)] * 3
        a[ax] = slice(0, -1)
        b[ax] = slice(1, None)
        flip = m[tuple(a)] != m[tuple(b)]
        mids.append(0.5 * (G[tuple(a)][flip] + G[tuple(b)][flip]))
    B = np.vstack(mids)
    qmax, qmin = B.max(axis=1), B.min(axis=1)
    ts = np.linspace(-h, h, n_centres)
    best = (-1.0, 0.0)
    for t in ts:
        i = int(np.clip(round((t + h) / (2 * h) * (N - 1)), 0, N - 1))
        if not m[i, i, i]:
            continue
        half = min(np.min(np.maximum(qmax - t, t - qmin)), h - abs(t))
        if half > best[0]:
            best = (half, t)
    return 2.0 * best[0], best[1], g[1] - g[0]


def central_difference(f, x, h: float):
    """Jacobian of a vector function by central differences."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        cols.append((np.asarray(f(x + e)) - np.asarray(f(x - e))) / (2.0 * h))
    return np.column_stack(cols)


def angular_velocity_difference(R_of, x, h: float, frame=None):
    """Angular-velocity Jacobian of a rotation-valued function.

    Column ``k`` is ``log(R(x + h e_k) R(x - h e_k)^T) / (2h)``, optionally
    re-expressed in ``frame`` (columns of ``frame`` are its axes).
    """
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = h
        w = rot_log(R_of(x + e) @ R_of(x - e).T) / (2.0 * h)
        cols.append(w if frame is None else frame.T @ w)
    return np.column_stack(cols)


def relative_error(A, B, floor: float = 1.0) -> float:
    """Largest elementwise ``|A - B| / max(|B|, floor)``."""
    A, B = np.asarray(A, dtype=float), np.asarray(B, dtype=float)
    return float(np.max(np.abs(A - B) / np.maximum(np.abs(B), floor)))
