"""Orthoglide translational stage: inverse and direct kinematics, isotropy.

Run: python3 demos/01_translational_stage.py
"""

import numpy as np

from orthohaptic import OrthoglideParams, amplification_factors, fk, ik, jacobian
from orthohaptic.orthoglide import singularity_report

params = OrthoglideParams(L=1.0, rho_min=0.1, rho_max=1.9)

# At home every leg is aligned with its slider, so the Jacobian is the identity.
print("home stroke:", ik([0, 0, 0], params))
print("home Jacobian:\n", jacobian([0, 0, 0], params))

# Moving along x lengthens leg 1 by the full displacement and tilts the others.
p = np.array([0.1, 0.0, 0.0])
rho = ik(p, params)
print("\nstroke for p = (0.1, 0, 0):", rho)
print("direct kinematics recovers p:", fk(rho, params))

# Velocity amplification degrades away from home.
for y in (0.0, 0.3, 0.6, 0.9):
    s = amplification_factors([0, y, 0], params)
    print(f"y = {y:.1f}: amplification factors {np.round(s, 4)}")

# Singular configurations are classified instead of raised.
t = float(1 / np.sqrt(6))
for q in ([0, 0, 0], [0.6, 0, 0.8], [t, t, t], [0, 1.2, 0]):
    print(q, "->", singularity_report(q, params))
