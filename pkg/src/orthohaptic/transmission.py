"""
Rotary transmission from a base motor to the wrist along a parallelogram leg.

The shaft runs on the neutral fiber of the parallelogram through two
universal joints. A single joint bent by ``beta`` transfers

    tan(out - phase) = tan(in - phase) / cos(beta)

where ``phase`` is the input-yoke angle at which the yoke lies in the bend
plane. Two joints with equal bend, parallel end shafts and aligned yokes on
the intermediate shaft (the Z-configuration) cancel each other exactly, so
the wrist sees the base motor angle unchanged whatever the leg posture.
In terms of per-joint phases, aligned yokes mean the second joint's phase
is the first one's plus a quarter turn.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import BendTooLarge, MisalignedYokesWarning
from .geometry import DEFAULT_TOL, Tolerances, cross3, wrap_angle
from .orthoglide import OrthoglideParams, leg_state


@dataclass(frozen=True)
class UJointConfig:
    beta: float
    yoke_phase: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta >= 0.0):
            raise ValueError(f"bend angle must be >= 0, got {self.beta!r}")


@dataclass(frozen=True)
class TransmissionState:
    """Shaft line of one leg: the two universal joints it passes through."""

    leg: int
    beta: float
    joints: tuple

    @classmethod
    def z_config(cls, leg: int, beta: float, phase: float = 0.0, yoke_offset: float = 0.0):
        """Two joints of bend ``beta``; ``yoke_offset`` misphases the second one."""
        return cls(leg, beta, (UJointConfig(beta, phase),
                               UJointConfig(beta, phase + np.pi / 2 + yoke_offset)))

    def is_homokinetic(self, tol: Tolerances = DEFAULT_TOL) -> bool:
        j1, j2 = self.joints
        if abs(j1.beta - j2.beta) > tol.unit:
            return False
        if j1.beta == 0.0:
            return True
        # phases only matter modulo a half turn
        d = np.remainder(j2.yoke_phase - j1.yoke_phase, np.pi) - np.pi / 2
        return abs(d) <= tol.unit


def _check_bend(beta: float, tol: Tolerances):
    if not beta < np.pi / 2 - tol.singular:
        raise BendTooLarge(f"bend angle {np.degrees(beta):.9g} deg is at or beyond 90 deg")


def ujoint_output(theta_in, cfg: UJointConfig, tol: Tolerances = DEFAULT_TOL):
    """Output shaft angle of one universal joint; continuous and increasing.

    Works on scalars or arrays. The quadrant of ``atan2`` always matches the
    input's, so the result is unwrapped onto the input's turn.
    """
    _check_bend(cfg.beta, tol)
    if cfg.beta == 0.0:
        return theta_in
    x = np.asarray(theta_in, dtype=float) - cfg.yoke_phase
    y = np.arctan2(np.sin(x), np.cos(cfg.beta) * np.cos(x))
    out = cfg.yoke_phase + x + wrap_angle(y - x)
    return float(out) if np.ndim(out) == 0 else out


def ujoint_input(theta_out, cfg: UJointConfig, tol: Tolerances = DEFAULT_TOL):
    """Inverse of :func:`ujoint_output`."""
    _check_bend(cfg.beta, tol)
    if cfg.beta == 0.0:
        return theta_out
    y = np.asarray(theta_out, dtype=float) - cfg.yoke_phase
    x = np.arctan2(np.cos(cfg.beta) * np.sin(y), np.cos(y))
    out = cfg.yoke_phase + y + wrap_angle(x - y)
    return float(out) if np.ndim(out) == 0 else out


def ujoint_speed_ratio(theta_in, cfg: UJointConfig, tol: Tolerances = DEFAULT_TOL):
    """``d out / d in = cos b / (1 - sin^2 b cos^2(in - phase))``.

    Ranges over ``[cos b, 1/cos b]``: maximal when the input yoke is in the
    bend plane, minimal a quarter turn later.
    """
    _check_bend(cfg.beta, tol)
    x = np.asarray(theta_in, dtype=float) - cfg.yoke_phase
    sb = np.sin(cfg.beta)
    r = np.cos(cfg.beta) / (1.0 - sb * sb * np.cos(x) ** 2)
    return float(r) if np.ndim(r) == 0 else r


def _warn_if_misaligned(state: TransmissionState, tol: Tolerances):
    if not state.is_homokinetic(tol):
        warnings.warn(f"leg {state.leg}: universal joints are not in Z-configuration",
                      MisalignedYokesWarning, stacklevel=3)


def chain_output(theta_in, state: TransmissionState, tol: Tolerances = DEFAULT_TOL):
    """Angle delivered to the wrist by the two-joint shaft line.

    Equal to ``theta_in`` up to rounding in the Z-configuration. Otherwise a
    :class:`MisalignedYokesWarning` is emitted and the general composition
    is returned.
    """
    _warn_if_misaligned(state, tol)
    j1, j2 = state.joints
    return ujoint_output(ujoint_output(theta_in, j1, tol), j2, tol)


def chain_input(theta_out, state: TransmissionState, tol: Tolerances = DEFAULT_TOL):
    """Base motor angle producing ``theta_out`` at the wrist."""
    _warn_if_misaligned(state, tol)
    j1, j2 = state.joints
    return ujoint_input(ujoint_input(theta_out, j2, tol), j1, tol)


def chain_speed_ratio(theta_in, state: TransmissionState, tol: Tolerances = DEFAULT_TOL):
    j1, j2 = state.joints
    mid = ujoint_output(theta_in, j1, tol)
    return ujoint_speed_ratio(theta_in, j1, tol) * ujoint_speed_ratio(mid, j2, tol)


def bend_angle_from_leg(p, rho_i: float, leg: int, params: OrthoglideParams) -> float:
    """Angle between leg ``leg`` (1-based) and its prismatic axis.

    Reaches 90 deg on the leg's cylinder boundary; the joints themselves
    then refuse to transmit (:class:`BendTooLarge`).
    """
    i = leg - 1
    rho = np.zeros(3)
    rho[i] = rho_i
    st = leg_state(p, rho, params)
    # atan2 form keeps full precision near beta = 0
    sinb = np.linalg.norm(cross3(st.d[i], params.axes[i]))
    return float(np.arctan2(sinb, abs(st.c[i])))


def leg_transmission(p, rho, leg: int, params: OrthoglideParams) -> TransmissionState:
    """Z-configured shaft line of ``leg`` at the current platform position."""
    beta = bend_angle_from_leg(p, rho[leg - 1], leg, params)
    _check_bend(beta, params.tol)
    return TransmissionState.z_config(leg, beta)
