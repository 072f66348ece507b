"""Rungs of the residue ladder at one (u, p, r) and mean time T.

Every second rung is smaller by exp(-4 pi omega / a): the smearing weights
have period two in n, so the ratio is pure Boltzmann factor.
"""

import numpy as np

from unruh_packet.residues import ladder_terms, tolerance_ladder, u_pm
from unruh_packet.wavepacket import PacketConfig

cfg = PacketConfig(m=1.0, hbar=1.0, b=0.5, z0=1.0, a=1.0)
u, p, r, T = 0.3, 0.2, -0.4, 0.5
br = u_pm(u, p, r, T, cfg.a)
print(f"u+ = {br.u_plus:.6f}, u- = {br.u_minus:.6f}, product check "
      f"{br.u_plus * br.u_minus / (-(u * u + p * p + r * r) / 4):.15f}")
for ratio in (0.5, 1.0):
    N = tolerance_ladder(ratio, cfg.a)
    terms = ladder_terms(ratio, T, u, p, r, cfg, N)
    print(f"omega/a = {ratio}: {N} rungs")
    for n, v in enumerate(terms[:5], 1):
        print(f"  n={n}  |term| = {abs(v):.4e}")
    print(f"  |t3/t1| = {abs(terms[2] / terms[0]):.6e}, exp(-4 pi omega/a) = {np.exp(-4 * np.pi * ratio):.6e}")
