"""Point limit first: b -> 0 at fixed hbar switches the detector off like b^3."""

import numpy as np

from unruh_packet.response import DetectorConfig, limit_sweep_point_first

base = DetectorConfig(m=1.0, hbar=1.0, a=1.0, b=0.1, omega=1 / (2 * np.pi), L=3 * np.pi)
table = limit_sweep_point_first(base, np.logspace(-1, -3, 5))
for c in table.cells:
    print(f"b={c.b:8.2e}  P={c.result.probability:.6e} +- {c.result.quad_err:.1e}")
print(f"fitted exponent {table.exponent:.4f} +- {table.exponent_err:.1e}")
print(f"extrapolated P(b=0) = {table.extrapolated:.2e} +- {table.extrapolated_err:.1e}")
