"""Rotary transmission through two universal joints.

A single joint bent by beta makes the output speed fluctuate between
cos(beta) and 1/cos(beta) per turn. Two joints in Z-configuration cancel
the fluctuation exactly; misphasing the second yoke doubles it instead.

Run: python3 demos/03_shaft_transmission.py
"""

import math
import warnings

import numpy as np

from orthohaptic.errors import MisalignedYokesWarning
from orthohaptic.transmission import (
    TransmissionState,
    UJointConfig,
    chain_output,
    ujoint_output,
    ujoint_speed_ratio,
)

beta = math.radians(30)
cfg = UJointConfig(beta)
th = np.radians(np.arange(0, 360, 15))
print(" in   out    ratio")
for a, b, r in zip(np.degrees(th), np.degrees(ujoint_output(th, cfg)), ujoint_speed_ratio(th, cfg)):
    print(f"{a:5.0f} {b:7.3f} {r:.5f}")

good = TransmissionState.z_config(1, math.radians(40))
bad = TransmissionState.z_config(1, math.radians(40), yoke_offset=math.pi / 2)
th = np.linspace(0, 2 * np.pi, 721)
print("\nZ-configuration max error:", np.max(np.abs(chain_output(th, good) - th)))
with warnings.catch_warnings():
    warnings.simplefilter("ignore", MisalignedYokesWarning)
    err = np.degrees(np.max(np.abs(chain_output(th, bad) - th)))
print(f"misphased yokes max error: {err:.2f} deg")
