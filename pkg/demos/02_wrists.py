"""The two wrists: a serial-roll 2R+1R wrist and a 3R spherical wrist.

Run: python3 demos/02_wrists.py
"""

import math

import numpy as np

from orthohaptic.errors import OutOfRange
from orthohaptic.geometry import rot_y
from orthohaptic.wrist import hybrid_fk, hybrid_ik, hybrid_jacobian, spm_fk, spm_ik, spm_jacobian

deg = math.radians

# Pitch and yaw are bounded to 45 degrees; roll is free.
R = hybrid_fk([deg(10), deg(20), deg(730)])
print("hybrid angles of a 730 deg roll (deg):", np.degrees(hybrid_ik(R)).round(6))
try:
    hybrid_ik(rot_y(deg(60)))
except OutOfRange as e:
    print("60 deg yaw rejected:", e)
print("hybrid Jacobian det at yaw 45 deg:", np.linalg.det(hybrid_jacobian([0, deg(45), 0])))

# The 3R wrist needs Newton iteration for its direct kinematics.
theta = np.radians([12.0, -7.0, 20.0])
R = spm_fk(theta)
print("\n3R wrist round trip error:", np.max(np.abs(spm_ik(R) - theta)))
print("3R Jacobian at home:\n", spm_jacobian(np.eye(3)))
print("3R Jacobian singular values here:", np.linalg.svd(spm_jacobian(R), compute_uv=False))
