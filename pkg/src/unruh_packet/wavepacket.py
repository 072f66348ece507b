"""Gaussian wavepacket evolving under the inverted oscillator H = p^2/2m - m a^2 z^2/2.

The closed forms below are the harmonic-oscillator ones continued to
imaginary frequency ``i a``; ``a = 0`` gives free spreading and is also what
the transverse (x, y) packets use, with ``z0 = 0``.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from .errors import AccuracyError, SingularInputError


@dataclass(frozen=True)
class PacketConfig:
    m: float
    hbar: float
    b: float
    z0: float
    a: float

    def __post_init__(self):
        if not (self.m > 0 and self.hbar > 0 and self.b > 0):
            raise ValueError("m, hbar and b must be positive")
        if self.a < 0:
            raise ValueError("acceleration must be non-negative")

    def transverse(self):
        """Packet used for the x and y directions: no acceleration, centred at 0."""
        return replace(self, a=0.0, z0=0.0)


@dataclass(frozen=True)
class DensityParams:
    alpha: float
    z_c: float


def _sinh_over_a(a, tau):
    if a == 0:
        return np.asarray(tau, dtype=float) * 1.0
    return np.sinh(a * tau) / a


def beta(m, hbar, a, tau):
    """Kernel phase coefficient ``m a / (2 hbar sinh(a tau))``."""
    tau = np.asarray(tau)
    if np.any(tau == 0):
        raise SingularInputError("beta diverges at tau = 0")
    return m / (2.0 * hbar * _sinh_over_a(a, tau))


def kernel(z, zp, tau, m, hbar, a):
    """Propagator K(z, tau; zp, 0). Accepts complex positions.

    The square root takes the principal branch of ``beta / (i pi)``, which
    joins the free-particle kernel continuously as tau -> 0+.
    """
    if np.any(np.asarray(tau) <= 0):
        raise SingularInputError("kernel is singular at tau = 0")
    bt = beta(m, hbar, a, tau)
    c = np.cosh(a * tau)
    pref = np.sqrt(bt / (1j * np.pi))
    return pref * np.exp(1j * bt * ((zp * zp + z * z) * c - 2.0 * z * zp))


def inverse_width_sq(cfg, tau):
    """alpha**2 of the evolved density; finite and smooth through tau = 0."""
    c = np.cosh(cfg.a * tau)
    q = cfg.hbar * _sinh_over_a(cfg.a, tau) / (cfg.m * cfg.b)
    return 1.0 / (cfg.b ** 2 * c * c + q * q)


def evolve_density(cfg, tau):
    alpha = np.sqrt(inverse_width_sq(cfg, tau))
    return DensityParams(alpha, cfg.z0 * np.cosh(cfg.a * tau))


def density(cfg, z, tau):
    """|psi(z, tau)|^2 = alpha/sqrt(pi) exp(-alpha^2 (z - z_c)^2)."""
    d = evolve_density(cfg, tau)
    return d.alpha / np.sqrt(np.pi) * np.exp(-(d.alpha * (z - d.z_c)) ** 2)


def initial_amplitude(cfg, z):
    return (cfg.b * np.sqrt(np.pi)) ** -0.5 * np.exp(-((z - cfg.z0) ** 2) / (2 * cfg.b ** 2))


def evolve_amplitude(cfg, z, tau):
    """psi(z, tau): the kernel applied to the initial Gaussian, integrated exactly."""
    z = np.asarray(z, dtype=complex)
    if tau == 0:
        return initial_amplitude(cfg, z)
    bt = beta(cfg.m, cfg.hbar, cfg.a, tau)
    c = np.cosh(cfg.a * tau)
    b2 = cfg.b ** 2
    A = 1.0 / (2 * b2) - 1j * bt * c
    B = cfg.z0 / b2 - 2j * bt * z
    C = 1j * bt * c * z * z - cfg.z0 ** 2 / (2 * b2)
    norm = (cfg.b * np.sqrt(np.pi)) ** -0.5
    return norm * np.sqrt(bt / (1j * A)) * np.exp(B * B / (4 * A) + C)


@dataclass(frozen=True)
class GridSpec:
    z_min: float
    z_max: float
    n_points: int
    dt: float


@dataclass
class OracleResult:
    z: np.ndarray
    density: np.ndarray
    norm_drift: float
    steps: int


def _laplacian_bands(n, h):
    """Fourth-order central second difference, in solve_banded layout (2, 2)."""
    c = 1.0 / (12.0 * h * h)
    bands = np.zeros((5, n))
    bands[0, 2:] = -c
    bands[1, 1:] = 16 * c
    bands[2, :] = -30 * c
    bands[3, :-1] = 16 * c
    bands[4, :-2] = -c
    return bands


def _apply_bands(bands, psi):
    out = bands[2] * psi
    out[:-1] += bands[1, 1:] * psi[1:]
    out[:-2] += bands[0, 2:] * psi[2:]
    out[1:] += bands[3, :-1] * psi[:-1]
    out[2:] += bands[4, :-2] * psi[:-2]
    return out


def pde_oracle_evolve(cfg, grid, tau, boundary_tol=1e-12):
    """Evolve the initial packet numerically with Crank-Nicolson.

    Fourth-order finite differences with Dirichlet walls; the Crank-Nicolson
    map is the Cayley transform of a real symmetric matrix, hence unitary in
    exact arithmetic. Raises AccuracyError if the density at the walls exceeds
    ``boundary_tol`` times its peak at any recorded step.
    """
    z = np.linspace(grid.z_min, grid.z_max, grid.n_points)
    h = z[1] - z[0]
    n_steps = max(1, int(round(tau / grid.dt)))
    dt = tau / n_steps
    lap = _laplacian_bands(z.size, h)
    H = -(cfg.hbar ** 2) / (2 * cfg.m) * lap
    H[2] += -0.5 * cfg.m * cfg.a ** 2 * z * z
    k = 0.5j * dt / cfg.hbar
    lhs = k * H.astype(complex)
    lhs[2] += 1.0
    rhs = -k * H.astype(complex)
    rhs[2] += 1.0

    psi = initial_amplitude(cfg, z).astype(complex)
    norm0 = np.sum(np.abs(psi) ** 2) * h
    edge = 3
    for step in range(n_steps):
        psi = linalg.solve_banded((2, 2), lhs, _apply_bands(rhs, psi), check_finite=False)
        if step % 50 == 0 or step == n_steps - 1:
            rho = np.abs(psi) ** 2
            wall = max(rho[:edge].max(), rho[-edge:].max())
            if wall > boundary_tol * rho.max():
                raise AccuracyError(
                    f"density at grid boundary is {wall / rho.max():.2e} of peak at step {step}",
                    partial=rho,
                )
    rho = np.abs(psi) ** 2
    drift = abs(np.sum(rho) * h - norm0)
    return OracleResult(z, rho, drift, n_steps)
