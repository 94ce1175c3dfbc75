"""Sizing the leg length and stroke for a required cube.

The smallest leg length grows as the amplification bound tightens, and it
scales linearly with the required edge.

Run: python3 demos/05_design_sizing.py
"""

from orthohaptic import DesignSpec, size_device

for psi in (1.5, 2.0, 3.0):
    r = size_device(DesignSpec(required_edge=0.5, psi=psi))
    print(f"psi {psi}: L = {r.L:.4f}, stroke [{r.rho_min:.4f}, {r.rho_max:.4f}], "
          f"factors in [{r.worst_sigma[0]:.3f}, {r.worst_sigma[1]:.3f}]")

base = size_device(DesignSpec(0.5, 2.0)).L
for k in (0.5, 2, 10):
    print(f"edge x{k}: L ratio {size_device(DesignSpec(0.5 * k, 2.0)).L / base:.9f}")
