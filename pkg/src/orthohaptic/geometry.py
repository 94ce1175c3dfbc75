"""
3-vector and rotation helpers.

Vectors are plain ``(3,)`` float arrays and rotations plain ``(3, 3)`` arrays;
nothing here allocates custom classes. Angles are radians.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonUnitAxis, NotARotation


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    Attributes:
        unit: allowed deviation of a direction vector from unit norm.
        residual: allowed constraint residual after a solve.
        singular: threshold below which a pivot/determinant counts as zero.
        grid_match: relative agreement demanded between a sampled optimum
            and its dense-sampling reference.
    """

    unit: float = 1e-12
    residual: float = 1e-9
    singular: float = 1e-8
    grid_match: float = 0.01

    def __post_init__(self):
        for name in ("unit", "residual", "singular", "grid_match"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"tolerance {name} must be finite and > 0, got {v!r}")
        if self.residual < self.unit:
            raise ValueError("tolerance residual must be >= unit")


DEFAULT_TOL = Tolerances()

X_AXIS = np.array([1.0, 0.0, 0.0])
Y_AXIS = np.array([0.0, 1.0, 0.0])
Z_AXIS = np.array([0.0, 0.0, 1.0])


def vec3(v) -> np.ndarray:
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise ValueError(f"expected 3 components, got {a.shape[0]}")
    return a


def unit(v) -> np.ndarray:
    a = vec3(v)
    n = np.linalg.norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return a / n


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors; much cheaper than ``np.cross`` for single pairs."""
    return np.array([a[1] * b[2] - a[2] * b[1],
                     a[2] * b[0] - a[0] * b[2],
                     a[0] * b[1] - a[1] * b[0]])


def skew(v) -> np.ndarray:
    x, y, z = v
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(S) -> np.ndarray:
    """Inverse of :func:`skew` applied to the skew part of ``S``."""
    return 0.5 * np.array([S[2, 1] - S[1, 2], S[0, 2] - S[2, 0], S[1, 0] - S[0, 1]])


def rot_axis_angle(axis, angle: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Rotation by ``angle`` about the unit vector ``axis`` (right-hand rule).

    Raises:
        NonUnitAxis: if ``axis`` is not unit length within ``tol.unit``.
    """
    a = vec3(axis)
    if abs(np.linalg.norm(a) - 1.0) > tol.unit:
        raise NonUnitAxis(f"axis norm {np.linalg.norm(a)!r} is not 1")
    K = skew(a)
    s, c = np.sin(angle), np.cos(angle)
    return np.eye(3) + s * K + (1.0 - c) * (K @ K)


def rot_x(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def rot_y(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def rot_exp(omega) -> np.ndarray:
    """Rotation matrix of a rotation vector (angle times unit axis)."""
    w = vec3(omega)
    th = np.linalg.norm(w)
    K = skew(w)
    if th < 1e-8:
        # second-order series, exact to double precision in this range
        return np.eye(3) + K + 0.5 * (K @ K)
    return np.eye(3) + (np.sin(th) / th) * K + ((1.0 - np.cos(th)) / th**2) * (K @ K)


def rot_log(R) -> np.ndarray:
    """Rotation vector ``w`` with ``rot_exp(w) == R`` and ``|w|`` in [0, pi].

    Accurate over the whole range: the angle comes from ``atan2`` of the skew
    and trace parts, and near a half turn the axis is read from the symmetric
    part instead of the (vanishing) skew part.
    """
    R = np.asarray(R, dtype=float)
    s = vee(R)
    sn = np.linalg.norm(s)
    c = 0.5 * (np.trace(R) - 1.0)
    th = np.arctan2(sn, c)
    if th < 1e-6:
        return s * (1.0 + th * th / 6.0)
    if th < np.pi - 1e-4:
        return s * (th / sn)
    B = 0.5 * (R + R.T) - c * np.eye(3)
    k = int(np.argmax(np.diag(B)))
    a = B[:, k] / np.sqrt(B[k, k] * (1.0 - c))
    a /= np.linalg.norm(a)
    if a @ s < 0.0:
        a = -a
    return th * a


def is_rotation(R, atol: float = 1e-10) -> bool:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    return bool(np.allclose(R.T @ R, np.eye(3), rtol=0, atol=atol)
                and abs(np.linalg.det(R) - 1.0) <= atol)


def orthonormalize(R, max_drift: float = 1e-6) -> np.ndarray:
    """Nearest proper rotation to ``R`` (polar projection through the SVD).

    Raises:
        NotARotation: if ``det R <= 0`` or ``R`` sits farther than
            ``max_drift`` (elementwise) from its projection.
    """
    M = np.asarray(R, dtype=float)
    if M.shape != (3, 3) or not np.all(np.isfinite(M)):
        raise NotARotation("expected a finite 3x3 matrix")
    if np.linalg.det(M) <= 0.0:
        raise NotARotation("determinant is not positive")
    U, _, Vt = np.linalg.svd(M)
    Q = U @ Vt
    drift = np.max(np.abs(Q - M))
    if drift > max_drift:
        raise NotARotation(f"drift {drift:.3e} from nearest rotation exceeds {max_drift:.1e}")
    return Q


def rotation_between(a, b) -> np.ndarray:
    """Minimal rotation taking unit vector ``a`` onto unit vector ``b``."""
    a, b = unit(a), unit(b)
    axis = cross3(a, b)
    n = np.linalg.norm(axis)
    if n < 1e-15:
        if a @ b > 0:
            return np.eye(3)
        # any perpendicular axis works for a half turn
        perp = cross3(a, X_AXIS if abs(a[0]) < 0.9 else Y_AXIS)
        return rot_axis_angle(unit(perp), np.pi)
    return rot_axis_angle(axis / n, np.arctan2(n, a @ b))


def angle_between_rotations(R1, R2) -> float:
    return float(np.linalg.norm(rot_log(np.asarray(R1).T @ np.asarray(R2))))


def wrap_angle(a):
    """Map angles to (-pi, pi]."""
    w = np.remainder(np.asarray(a, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    w = np.where(w == -np.pi, np.pi, w)
    return float(w) if np.ndim(w) == 0 else w
