"""How an accelerated Gaussian packet spreads.

The width grows like b cosh(a tau) classically and like hbar sinh(a tau)/(m a b)
from the quantum term; the closed form is compared with a Crank-Nicolson run.
"""

import numpy as np

from unruh_packet.wavepacket import GridSpec, PacketConfig, density, evolve_density, pde_oracle_evolve

cfg = PacketConfig(m=1.0, hbar=1.0, b=0.5, z0=1.0, a=1.0)

print(f"{'a tau':>6} {'width':>10} {'centre':>10}")
for tau in np.linspace(0, 2, 5):
    p = evolve_density(cfg, tau)
    print(f"{tau:6.2f} {1 / p.alpha:10.4f} {p.z_c:10.4f}")

grid = GridSpec(-20.0, 22.0, 4001, 1e-3)
res = pde_oracle_evolve(cfg, grid, 1.0)
exact = density(cfg, res.z, 1.0)
print("PDE vs closed form at a tau = 1, sup-norm relative error:",
      f"{np.max(np.abs(res.density - exact)) / exact.max():.2e}")
