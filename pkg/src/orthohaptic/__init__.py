"""Kinematics, workspace analysis and sizing for an Orthoglide-based six-dof haptic device."""

from .design import DesignResult, DesignSpec, evaluate_design, size_device
from .device import (
    DeviceJacobian,
    DeviceParams,
    DevicePose,
    JointVector,
    device_fk,
    device_ik,
    device_jacobian,
    home_axis,
    home_axis_tilt,
    isotropic_home,
)
from .errors import *  # noqa: F401,F403
from .geometry import DEFAULT_TOL, Tolerances
from .orthoglide import OrthoglideParams, amplification_factors, fk, ik, jacobian, singularity_report
from .transmission import (
    TransmissionState,
    UJointConfig,
    chain_input,
    chain_output,
    ujoint_input,
    ujoint_output,
    ujoint_speed_ratio,
)
from .workspace import CubeResult, WorkspaceSpec, conditioning_map, is_member, largest_cube
from .wrist import SphericalLegGeometry, WristVariant

__version__ = "0.1.0"
