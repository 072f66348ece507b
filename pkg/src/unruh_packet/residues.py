"""Proper-time integral of the smeared correlator by residues.

With ``S = sinh(a t / 2)`` the reduced denominator factorises as
``(4/a^2)(S - u_plus)(S - u_minus)``. Closing the t contour in the lower half
plane picks up the ladder ``t = -2 pi i n / a + t_n`` for n = 1, 2, ...; every
rung carries the Boltzmann factor ``exp(-2 pi n omega / a)``.

The longitudinal widths are evaluated at the real pole proper times
``tau_n = T + t_n/2`` and ``tau'_n = T - t_n/2``; they are periodic under
``t -> t - 2 pi i / a``, so this is their value at the complex pole. The
transverse widths are the same expressions with the acceleration switched
off (``a -> 0`` everywhere, including ``aT``), which leaves the free packet
at proper time ``R/2``, ``R = sqrt(u^2 + p^2 + r^2)``, for both branches.
"""

from dataclasses import dataclass

import numpy as np

from . import correlator, kinematics, quad
from .errors import AccuracyError, SingularInputError

LADDER_CUTOFF = 1e-12


@dataclass(frozen=True)
class PoleBranch:
    u_plus: np.ndarray
    u_minus: np.ndarray


@dataclass(frozen=True)
class ResidueTerm:
    n: int
    t_n_plus: np.ndarray
    t_n_minus: np.ndarray
    delta_plus: np.ndarray
    delta_minus: np.ndarray
    alpha_pm: tuple
    alpha_p_pm: tuple
    beta_pm: tuple
    beta_p_pm: tuple
    gamma_pm: tuple
    gamma_p_pm: tuple


def u_pm(u, p, r, T, a):
    """Roots ``u_plus >= u_minus`` of the factorised denominator.

    The smaller-magnitude root comes from the product identity
    ``u_plus * u_minus = -(a^2/4)(u^2 + p^2 + r^2)`` to avoid cancellation.
    """
    u, p, r = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (u, p, r)))
    R2 = u * u + p * p + r * r
    if np.any(R2 == 0):
        raise SingularInputError("u = p = r = 0 is a degenerate pole configuration")
    us = u * np.sinh(a * T)
    root = np.sqrt(us * us + R2)
    prod = -0.25 * a * a * R2
    big = 0.5 * a * (us + np.copysign(root, us))
    small = prod / big
    up = np.where(us >= 0, big, small)
    um = np.where(us >= 0, small, big)
    return PoleBranch(up, um)


def pole_times(n, branch_value, a):
    """Real part ``(-1)^n (2/a) asinh(u)`` of the n-th pole of a branch."""
    if n < 1:
        raise ValueError("ladder index starts at 1")
    return (-1) ** n * 2.0 / a * np.arcsinh(branch_value)


def window_halfwidth(T, L):
    return L - 2 * abs(T - 0.5 * L)


def window_ladder(T, L, a):
    """Largest n whose pole lies inside the semicircle of the switching window."""
    return int(np.floor(window_halfwidth(T, L) * a / (2 * np.pi) + 1e-12))


def tolerance_ladder(omega, a, cutoff=LADDER_CUTOFF):
    """Rungs needed before exp(-2 pi n omega / a) drops below ``cutoff`` of the first."""
    x = 2 * np.pi * omega / a
    return 1 + int(np.ceil(-np.log(cutoff) / x))


def transverse_inverse_width_sq(u, p, r, cfg):
    """gamma^2 at a pole: ``1/(b^2 + (hbar R / (2 m b))^2)``, i.e. beta_0 = m/(hbar R)."""
    R2 = u * u + p * p + r * r
    return 1.0 / (cfg.b ** 2 + cfg.hbar ** 2 * R2 / (4 * cfg.m ** 2 * cfg.b ** 2))


def _rung_weights(n, us, u, p, r, T, cfg):
    a, m, hbar, b = cfg.a, cfg.m, cfg.hbar, cfg.b
    sgn = (-1) ** n
    sq = np.sqrt(1 + us * us)
    ch, sh = np.cosh(a * T), np.sinh(a * T)
    c_tau = sgn * sq * ch + us * sh
    c_taup = sgn * sq * ch - us * sh
    s_tau = sgn * sq * sh + us * ch
    s_taup = sgn * sq * sh - us * ch
    q = hbar / (m * a * b)
    inv_a2 = (b * c_tau) ** 2 + (q * s_tau) ** 2
    inv_ap2 = (b * c_taup) ** 2 + (q * s_taup) ** 2
    with np.errstate(divide="ignore"):
        beta = m * a / (2 * hbar * s_tau)
        beta_p = m * a / (2 * hbar * s_taup)
    t_n = pole_times(n, us, a)
    g2 = transverse_inverse_width_sq(u, p, r, cfg)
    gp2 = g2
    sigma = inv_a2 + inv_ap2
    trans = g2 * gp2 / (g2 + gp2)
    delta = (np.sqrt(np.pi / sigma) * np.pi * trans
             * np.exp(-u * u / sigma - trans * (p * p + r * r)))
    return dict(t=t_n, delta=delta, alpha=inv_a2 ** -0.5, alpha_p=inv_ap2 ** -0.5,
                beta=beta, beta_p=beta_p, gamma=np.sqrt(g2), gamma_p=np.sqrt(gp2))


def residue_weights(n, u, p, r, T, cfg, branch=None):
    """Weights of the n-th rung for both branches.

    ``delta`` depends on the longitudinal widths only through
    ``1/alpha^2 + 1/alpha'^2``, written here without the explicit beta
    division, so the locus where beta diverges is harmless; ``beta`` itself
    is reported as inf there.
    """
    if n < 1:
        raise ValueError("ladder index starts at 1")
    if branch is None:
        branch = u_pm(u, p, r, T, cfg.a)
    wp = _rung_weights(n, branch.u_plus, u, p, r, T, cfg)
    wm = _rung_weights(n, branch.u_minus, u, p, r, T, cfg)
    return ResidueTerm(
        n, wp["t"], wm["t"], wp["delta"], wm["delta"],
        (wp["alpha"], wm["alpha"]), (wp["alpha_p"], wm["alpha_p"]),
        (wp["beta"], wm["beta"]), (wp["beta_p"], wm["beta_p"]),
        (wp["gamma"], wm["gamma"]), (wp["gamma_p"], wm["gamma_p"]),
    )


def ladder_terms(omega, T, u, p, r, cfg, N):
    """Individual rungs n = 1..N of the residue sum, in ascending order."""
    a = cfg.a
    br = u_pm(u, p, r, T, a)
    up, um = br.u_plus, br.u_minus
    out = []
    for n in range(1, N + 1):
        w = residue_weights(n, u, p, r, T, cfg, branch=br)
        bracket = (w.delta_plus * np.exp(-1j * omega * w.t_n_plus) / np.sqrt(1 + up * up)
                   - w.delta_minus * np.exp(-1j * omega * w.t_n_minus) / np.sqrt(1 + um * um))
        out.append(1j * a / (4 * np.pi ** 4) * (-1) ** n
                   * np.exp(-2 * np.pi * n * omega / a) / (up - um) * bracket)
    return out


def inner_t_integral(omega, T, u, p, r, cfg, N):
    """Residue-sum value of the windowed t integral at fixed (u, p, r).

    The rung prefactor is ``i a / (4 pi^4)``: minus 2 pi i from the clockwise
    contour times the ``-a^2/(16 pi^5)`` of the integrand times ``2/a`` from
    the derivative of sinh at the pole.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    N = min(N, tolerance_ladder(omega, cfg.a))
    total = 0j
    for term in ladder_terms(omega, T, u, p, r, cfg, N):
        total = total + term
    return total


def t_integrand(t, omega, T, u, p, r, cfg, eps):
    """Integrand of the windowed t integral at fixed (u, p, r), vectorised in t."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t.shape, dtype=complex)
    for i, ti in enumerate(t):
        w = correlator.smearing_weights(cfg, ti, T)
        D = kinematics.interval_D(cfg.a, ti, eps)
        Delta = kinematics.center_separation(cfg.a, cfg.z0, ti, T)
        out[i] = np.exp(-1j * omega * ti) * correlator.reduced_integrand(u, p, r, w, D, Delta)
    return out


def direct_t_oracle(omega, T, u, p, r, cfg, eps, window, tol=1e-10, levels=3):
    """Real-axis quadrature of the t integral, Richardson-extrapolated in eps.

    The values at ``eps, eps/2, eps/4`` (``levels`` terms) are combined
    assuming an expansion in integer powers of eps.
    """
    if not eps > 0:
        raise ValueError("direct quadrature needs eps > 0")
    br = u_pm(u, p, r, T, cfg.a)
    hints = [2.0 / cfg.a * np.arcsinh(br.u_plus), 2.0 / cfg.a * np.arcsinh(br.u_minus)]
    vals = []
    errs = []
    for k in range(levels):
        e = eps / 2 ** k
        res = quad.oscillatory_1d(
            lambda t: t_integrand(t, omega, T, u, p, r, cfg, e),
            window, omega, pole_hints=hints, rtol=tol, atol=1e-300)
        if not res.converged:
            raise AccuracyError(f"t quadrature failed at eps={e}", partial=res)
        vals.append(res.value)
        errs.append(res.err)
    value, rich_err = quad.richardson(vals)
    return quad.QuadResult(complex(value), float(rich_err + max(errs)), len(vals), {quad.CONVERGED})
