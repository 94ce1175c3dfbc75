"""
The six-dof device: Orthoglide stage, shaft transmissions and wrist.

Joint vector ``q = (rho, gamma)``: three prismatic values and three rotary
motor angles. For the 3T+3R device all three motors sit on the base and
drive the spherical wrist through the shaft lines of legs 1-3. For the
3T+2R+1R device legs 1 and 2 carry pitch and yaw, and ``gamma[2]`` is the
roll motor embedded in the wrist.

Position depends on ``rho`` only and orientation on ``gamma`` only, since
the Z-configured shaft lines deliver the motor angles unchanged whatever
the leg posture. The Jacobian is therefore reported as two 3x3 blocks plus
the (zero) coupling blocks; no mixed-unit 6x6 conditioning is formed.
"""

from dataclasses import dataclass, field

import numpy as np

from .geometry import Z_AXIS, vec3
from .orthoglide import OrthoglideParams, fk, ik, jacobian
from .transmission import chain_input, chain_output, chain_speed_ratio, leg_transmission
from .wrist import (
    DEFAULT_SPM,
    HYBRID,
    SphericalLegGeometry,
    WristVariant,
    wrist_angles,
    wrist_jacobian,
    wrist_rotation,
)


@dataclass(frozen=True, eq=False)
class DeviceParams:
    ortho: OrthoglideParams = field(default_factory=OrthoglideParams)
    variant: WristVariant = field(default_factory=WristVariant.hybrid)
    spm_geom: SphericalLegGeometry = DEFAULT_SPM
    ratios: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if len(self.ratios) != 3 or not all(np.isfinite(r) and r != 0 for r in self.ratios):
            raise ValueError("transmission ratios must be three finite non-zero numbers")

    @property
    def transmitted_legs(self) -> tuple:
        return (1, 2) if self.variant.tag == HYBRID else (1, 2, 3)

    @classmethod
    def hybrid(cls, ortho: OrthoglideParams = None, **kw):
        return cls(ortho or OrthoglideParams(), WristVariant.hybrid(**kw))

    @classmethod
    def spherical(cls, ortho: OrthoglideParams = None, **kw):
        return cls(ortho or OrthoglideParams(), WristVariant.spherical(**kw))


@dataclass(frozen=True, eq=False)
class JointVector:
    rho: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rho", vec3(self.rho))
        object.__setattr__(self, "gamma", vec3(self.gamma))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.rho, self.gamma])


@dataclass(frozen=True, eq=False)
class DevicePose:
    p: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", vec3(self.p))
        object.__setattr__(self, "R", np.asarray(self.R, dtype=float).reshape(3, 3))


@dataclass(frozen=True, eq=False)
class DeviceJacobian:
    """``J_t`` maps rho rates to platform velocity; ``J_r`` maps motor rates to
    angular velocity in the wrist mount frame; the coupling blocks are
    d(velocity)/d(gamma rates) and d(angular velocity)/d(rho rates)."""

    J_t: np.ndarray
    J_r: np.ndarray
    coupling_tr: np.ndarray
    coupling_rt: np.ndarray

    def conditioning(self) -> dict:
        return {"translation": float(np.linalg.cond(self.J_t)),
                "rotation": float(np.linalg.cond(self.J_r))}

    def full(self) -> np.ndarray:
        return np.block([[self.J_t, self.coupling_tr], [self.coupling_rt, self.J_r]])


def _wrist_inputs(p, rho, gamma, params: DeviceParams) -> np.ndarray:
    out = np.array(gamma, dtype=float)
    for leg in params.transmitted_legs:
        st = leg_transmission(p, rho, leg, params.ortho)
        out[leg - 1] = params.ratios[leg - 1] * chain_output(gamma[leg - 1], st, params.ortho.tol)
    return out


def device_fk(q: JointVector, params: DeviceParams, seed=None) -> DevicePose:
    """Pose of the stylus for joint values ``q``.

    Raises:
        NoAssembly: when the prismatic values do not close the legs.
        LimitViolation: when a bounded wrist joint leaves its range.
        BendTooLarge: when a shaft line cannot transmit.
    """
    p = fk(q.rho, params.ortho)
    a = _wrist_inputs(p, q.rho, q.gamma, params)
    Rw = wrist_rotation(a, params.variant, params.spm_geom, seed=seed)
    return DevicePose(p, params.variant.mount @ Rw)


def device_ik(pose: DevicePose, params: DeviceParams) -> JointVector:
    """Joint values for a stylus pose.

    Raises:
        OutsideCylinder, RangeLimit: position not reachable.
        OutOfRange: orientation beyond the wrist bounds.
        LegDegeneracy: orientation on a degenerate locus of the 3R wrist.
    """
    rho = ik(pose.p, params.ortho)
    Rw = params.variant.mount.T @ pose.R
    a = wrist_angles(Rw, params.variant, params.spm_geom)
    gamma = np.array(a, dtype=float)
    for leg in params.transmitted_legs:
        st = leg_transmission(pose.p, rho, leg, params.ortho)
        gamma[leg - 1] = chain_input(a[leg - 1] / params.ratios[leg - 1], st, params.ortho.tol)
    return JointVector(rho, gamma)


def device_jacobian(q: JointVector, params: DeviceParams) -> DeviceJacobian:
    p = fk(q.rho, params.ortho)
    J_t = jacobian(p, params.ortho)
    a = _wrist_inputs(p, q.rho, q.gamma, params)
    Rw = wrist_rotation(a, params.variant, params.spm_geom)
    rates = np.ones(3)
    for leg in params.transmitted_legs:
        st = leg_transmission(p, q.rho, leg, params.ortho)
        rates[leg - 1] = params.ratios[leg - 1] * chain_speed_ratio(q.gamma[leg - 1], st,
                                                                   params.ortho.tol)
    J_r = wrist_jacobian(a, Rw, params.variant, params.spm_geom) * rates[None, :]
    # position never reads gamma; the homokinetic shaft lines make the
    # orientation independent of rho
    Z = np.zeros((3, 3))
    return DeviceJacobian(J_t, J_r, Z, Z.copy())


def isotropic_home(params: DeviceParams) -> tuple:
    """Joint vector and pose at which both Jacobian blocks are the identity."""
    p = np.zeros(3)
    q = JointVector(ik(p, params.ortho, check_limits=False), np.zeros(3))
    return q, DevicePose(p, params.variant.mount.copy())


def home_axis(params: DeviceParams) -> np.ndarray:
    """Direction of the wrist's distinguished axis at home."""
    return params.variant.home_axis


def home_axis_tilt(params: DeviceParams) -> float:
    """Angle between the home wrist axis and the workspace z axis (rad)."""
    a = home_axis(params)
    return float(np.arctan2(np.linalg.norm(np.cross(a, Z_AXIS)), a @ Z_AXIS))

