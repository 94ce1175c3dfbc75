"""The assembled six-dof device in both wrist variants.

Run: python3 demos/06_haptic_device.py
"""

import math

import numpy as np

from orthohaptic import (
    DeviceParams,
    JointVector,
    device_fk,
    device_ik,
    device_jacobian,
    home_axis_tilt,
    ik,
    isotropic_home,
)

for params in (DeviceParams.hybrid(), DeviceParams.spherical()):
    tag = params.variant.tag
    q0, pose0 = isotropic_home(params)
    J = device_jacobian(q0, params)
    print(f"{tag}: home conditioning {J.conditioning()}, "
          f"home axis {np.round(params.variant.home_axis, 4)}, "
          f"tilt from z {math.degrees(home_axis_tilt(params)):.4f} deg")

    q = JointVector(ik([0.1, -0.05, 0.2], params.ortho), np.radians([15, -10, 20]))
    pose = device_fk(q, params)
    back = device_ik(pose, params)
    print(f"  round trip joint error {np.max(np.abs(back.as_array() - q.as_array())):.2e}")
    J = device_jacobian(q, params)
    print(f"  coupling blocks zero: {not J.coupling_tr.any() and not J.coupling_rt.any()}")
