"""Workspace membership and the largest inscribed cube.

Run: python3 demos/04_workspace_cube.py
"""

import numpy as np

from orthohaptic import OrthoglideParams, WorkspaceSpec, conditioning_map, is_member, largest_cube

params = OrthoglideParams()
spec = WorkspaceSpec(params)

for p in ([0, 0, 0], [0, 1.2, 0], [0.5, 0.5, 0.5], [-0.5, -0.5, -0.5]):
    print(p, "->", is_member(p, spec))

cube = largest_cube(spec)
print(f"\nlargest cube: edge {cube.edge:.6f}, centre {np.round(cube.center, 6)}")

bounded = largest_cube(WorkspaceSpec(params, psi=2.0))
print(f"with amplification factors in [1/2, 2]: edge {bounded.edge:.6f}")

# Conditioning over a slice through the cube centre.
c = cube.center[0]
h = cube.edge / 2
m = conditioning_map(spec, [[c - h, c + h], [c - h, c + h], [c, c]], [9, 9, 1])
print("\ncondition number on the z = centre slice:")
print(np.round(m.kappa.reshape(9, 9), 2))
