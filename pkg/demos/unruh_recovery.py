"""Classical limit first: hbar -> 0, then b -> 0, approaches the point-detector rate.

With a = 1 a width b = 1e-6 is point-like over the whole window because
a b exp(a L / 2) stays small. The window 3 pi / a holds one rung.
"""

import numpy as np

from unruh_packet.response import DetectorConfig, limit_sweep_classical_first, unruh_rate_closed_form

base = DetectorConfig(m=1.0, hbar=1.0, a=1.0, b=0.1, omega=1 / (2 * np.pi), L=3 * np.pi)
table = limit_sweep_classical_first(base, [1.0, 1e-6, 1e-13], [0.1, 1e-3, 1e-6])
for c in table.cells:
    print(f"hbar={c.hbar:8.1e} b={c.b:8.1e}  rate={c.result.rate:.6e}")
print(f"windowed point-detector rate {table.target:.6e}")
print(f"Planck rate for an infinite window {unruh_rate_closed_form(base.omega, base.a):.6e}")
