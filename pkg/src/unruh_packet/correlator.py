"""Gaussian-smeared Wightman function G(t, T) of the massless scalar field.

Two routes are provided. ``correlator_reduced`` integrates the 3D form left
after the centre-of-mass Gaussians are integrated out; ``correlator_full_oracle``
samples all six detector coordinates and averages the bare Wightman function.
Their agreement is the check on the change of variables.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from . import kinematics, quad
from .errors import AccuracyError, SingularInputError
from .wavepacket import inverse_width_sq

REDUCED = "reduced3d"
ORACLE = "oracle6d"
TRUNCATION_SIGMAS = 8.0


@dataclass(frozen=True)
class SmearingWeights:
    alpha: float
    alpha_p: float
    gamma: float
    gamma_p: float

    def __post_init__(self):
        if min(self.alpha, self.alpha_p, self.gamma, self.gamma_p) <= 0:
            raise ValueError("smearing weights must be positive")

    @property
    def longitudinal(self):
        """Coefficient A of exp(-A u^2) after the v integral."""
        a2, ap2 = self.alpha ** 2, self.alpha_p ** 2
        return a2 * ap2 / (a2 + ap2)

    @property
    def transverse(self):
        """Coefficient B of exp(-B (p^2 + r^2)) after the q, s integrals."""
        g2, gp2 = self.gamma ** 2, self.gamma_p ** 2
        return g2 * gp2 / (g2 + gp2)

    @property
    def prefactor(self):
        a2, ap2 = self.alpha ** 2, self.alpha_p ** 2
        g2, gp2 = self.gamma ** 2, self.gamma_p ** 2
        return -(self.alpha * self.alpha_p * g2 * gp2 / (4 * np.pi ** 5)
                 * np.sqrt(np.pi / (a2 + ap2)) * np.pi / (g2 + gp2))


@dataclass(frozen=True)
class CorrelatorSample:
    value: complex
    err: float
    method: str


def smearing_weights(cfg, t, T):
    """Inverse widths of the four packets at tau = T + t/2 and tau' = T - t/2."""
    tau, taup = T + 0.5 * t, T - 0.5 * t
    tr = cfg.transverse()
    return SmearingWeights(
        float(np.sqrt(inverse_width_sq(cfg, tau))),
        float(np.sqrt(inverse_width_sq(cfg, taup))),
        float(np.sqrt(inverse_width_sq(tr, tau))),
        float(np.sqrt(inverse_width_sq(tr, taup))),
    )


def reduced_integrand(u, p, r, weights, D, Delta):
    denom = D - u * u - 2 * u * Delta - p * p - r * r
    if np.any(denom == 0):
        raise SingularInputError("light-cone denominator vanishes; use eps > 0")
    num = np.exp(-weights.longitudinal * u * u - weights.transverse * (p * p + r * r))
    return weights.prefactor * num / denom


_GL_X, _GL_W = np.polynomial.legendre.leggauss(32)


def shell_average(rho, A, B, Delta):
    """``int_{-1}^{1} exp(-A (rho c - Delta)^2 - B rho^2 (1 - c^2)) dc`` in closed form.

    This is the polar-angle integral of the reduced Gaussian over a sphere of
    radius ``rho`` centred at ``u = -Delta``. Uses erfcx / Dawson forms to keep
    every exponential argument non-positive.
    """
    rho = np.asarray(rho, dtype=float)
    kap = (A - B) * rho * rho
    lam = A * Delta * rho
    mu = A * Delta * Delta + B * rho * rho
    e_up = -A * (rho - Delta) ** 2
    e_dn = -A * (rho + Delta) ** 2
    out = np.empty_like(rho)

    small = (np.abs(kap) < 1e-2) & (np.abs(lam) < 8.0)
    if np.any(small):
        k, l, m = kap[small], lam[small], mu[small]
        c = _GL_X[:, None]
        out[small] = np.dot(_GL_W, np.exp(-k * c * c + 2 * l * c - m))

    flat = (~small) & (np.abs(kap) <= 1e-10 * np.maximum(1.0, np.abs(lam)))
    if np.any(flat):
        # kappa = 0: int exp(2 lam c - mu) dc, relative error O(kappa)
        out[flat] = (np.exp(e_up[flat]) - np.exp(e_dn[flat])) / (2 * lam[flat])
    small = small | flat

    pos = (~small) & (kap > 0)
    if np.any(pos):
        k, l, m = kap[pos], lam[pos], mu[pos]
        eu, ed = e_up[pos], e_dn[pos]
        sk = np.sqrt(k)
        c0 = l / k
        res = np.empty_like(k)
        hi = c0 >= 1
        lo = c0 <= -1
        mid = ~(hi | lo)
        res[hi] = (np.exp(eu[hi]) * special.erfcx((l[hi] - k[hi]) / sk[hi])
                   - np.exp(ed[hi]) * special.erfcx((l[hi] + k[hi]) / sk[hi]))
        res[lo] = (np.exp(ed[lo]) * special.erfcx((-l[lo] - k[lo]) / sk[lo])
                   - np.exp(eu[lo]) * special.erfcx((k[lo] - l[lo]) / sk[lo]))
        res[mid] = np.exp(l[mid] ** 2 / k[mid] - m[mid]) * (
            special.erf(sk[mid] * (1 - c0[mid])) + special.erf(sk[mid] * (1 + c0[mid])))
        out[pos] = 0.5 * np.sqrt(np.pi) / sk * res

    neg = (~small) & (kap <= 0)
    if np.any(neg):
        k, l = -kap[neg], lam[neg]
        sk = np.sqrt(k)
        c1 = -l / k
        out[neg] = (np.exp(e_up[neg]) * special.dawsn(sk * (1 - c1))
                    + np.exp(e_dn[neg]) * special.dawsn(sk * (1 + c1))) / sk
    return out


def _radial_integral(A, B, Delta, X2, sign_t, tol):
    """``int rho^2 g(rho) / (X2 - rho^2) d rho`` over the Gaussian support."""
    s = max(1.0 / np.sqrt(2 * A), 1.0 / np.sqrt(2 * B))
    lo = max(0.0, abs(Delta) - TRUNCATION_SIGMAS * s)
    hi = abs(Delta) + TRUNCATION_SIGMAS * s

    def h(rho):
        return rho * rho * shell_average(rho, A, B, Delta)

    X = np.sqrt(complex(X2))
    if X.imag == 0.0:
        # eps -> 0+ limit: the pole sits just below the real axis for t > 0
        X = complex(X.real, -np.copysign(1e-300, sign_t) if sign_t else 0.0)
    span = hi - lo
    x0 = X.real
    near = (lo - 0.05 * span < x0 < hi + 0.05 * span) and abs(X.imag) < 0.5 * span
    atol = 1e-300
    if not near or abs(X) < 1e-12 * span:
        pts = np.linspace(lo, hi, 9)
        res = quad.gk15_adaptive(lambda r: h(r) / (X2 - r * r), pts, rtol=tol, atol=atol)
        return res.value, res.err, res.flags
    x0 = min(max(x0, lo), hi)
    h0 = h(np.array([x0]))[0]
    pts = np.unique(np.concatenate([np.linspace(lo, hi, 9), [x0]]))
    sing = quad.gk15_adaptive(lambda r: (h(r) - h0) / (X - r), pts, rtol=tol, atol=atol)
    smooth = quad.gk15_adaptive(lambda r: h(r) / (X + r), pts, rtol=tol, atol=atol)
    logs = h0 * (np.log(X - lo) - np.log(X - hi))
    value = (sing.value + logs + smooth.value) / (2 * X)
    err = (sing.err + smooth.err) / abs(2 * X)
    return value, err, sing.flags | smooth.flags


def correlator_reduced(t, T, cfg, eps=0.0, tol=1e-8):
    """G(t, T) from the 3D reduced integral.

    Spherical coordinates are centred on ``u = -Delta`` so the light-cone
    surface of the denominator becomes the single radius ``|X|``,
    ``X^2 = D + Delta^2``. The two angles are done exactly and the radial
    integral by adaptive Gauss-Kronrod after subtracting the pole.
    """
    if cfg.a <= 0:
        raise ValueError("correlator requires a > 0")
    w = smearing_weights(cfg, t, T)
    D = complex(kinematics.interval_D(cfg.a, t, eps))
    Delta = float(kinematics.center_separation(cfg.a, cfg.z0, t, T))
    val, err, flags = _radial_integral(w.longitudinal, w.transverse, Delta, D + Delta ** 2,
                                       np.sign(t), tol)
    scale = w.prefactor * 2 * np.pi
    value = scale * val
    err = abs(scale) * err
    if quad.BUDGET_EXHAUSTED in flags:
        raise AccuracyError("reduced correlator did not converge",
                            partial=CorrelatorSample(value, err, REDUCED))
    return CorrelatorSample(complex(value), float(err), REDUCED)


def correlator_full_oracle(t, T, cfg, eps=0.0, n_samples=10 ** 6, seed=0):
    """G(t, T) by Monte Carlo over all six detector coordinates.

    Coordinates are drawn from the normalised packet densities; the bare
    Wightman function ``1/(4 pi^2 (dx^2 + dy^2 + dz^2 - (dx0 - i eps)^2))``
    is averaged.
    """
    if n_samples < 10 ** 4:
        raise ValueError("n_samples must be at least 1e4")
    w = smearing_weights(cfg, t, T)
    tau, taup = T + 0.5 * t, T - 0.5 * t
    zc = kinematics.classical_center(cfg.a, cfg.z0, tau)
    zcp = kinematics.classical_center(cfg.a, cfg.z0, taup)
    dx0 = kinematics.time_separation(cfg.a, t, T)
    # order: x, x', y, y', z, z'
    mean = [0, 0, 0, 0, zc, zcp]
    var = 0.5 / np.array([w.gamma, w.gamma_p, w.gamma, w.gamma_p, w.alpha, w.alpha_p]) ** 2
    shift = (dx0 - 1j * eps) ** 2

    def wightman(x):
        r2 = (x[:, 0] - x[:, 1]) ** 2 + (x[:, 2] - x[:, 3]) ** 2 + (x[:, 4] - x[:, 5]) ** 2
        return 1.0 / (4 * np.pi ** 2 * (r2 - shift))

    res = quad.mc_importance(wightman, mean, np.diag(var), n_samples, seed)
    return CorrelatorSample(complex(res.value), float(res.err), ORACLE)


def point_correlator(a, t, eps=0.0):
    """Unsmeared limit ``-1/(4 pi^2 D)``."""
    return -1.0 / (4 * np.pi ** 2 * kinematics.interval_D(a, t, eps))
