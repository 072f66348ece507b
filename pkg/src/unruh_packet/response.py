"""Excitation probability of the extended detector and its two limit orderings.

All probabilities are per unit ``|<E|Q(0)|0>|^2``; multiply by the squared
monopole matrix element to get absolute numbers.
"""

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import quad
from .errors import AccuracyError
from .residues import residue_weights, tolerance_ladder, u_pm, window_ladder
from .wavepacket import PacketConfig


@dataclass(frozen=True)
class DetectorConfig:
    m: float = 1.0
    hbar: float = 1.0
    a: float = 1.0
    b: float = 0.5
    omega: float = 1.0
    L: float = 4 * np.pi
    z0: float = None

    def __post_init__(self):
        if self.z0 is None:
            object.__setattr__(self, "z0", 1.0 / self.a)
        for name in ("m", "hbar", "a", "b", "omega", "L", "z0"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not np.isclose(self.z0 * self.a, 1.0, rtol=1e-12):
            # the pole factorisation needs the packet centre on the observer's hyperbola
            raise ValueError("z0 must equal 1/a")

    @property
    def packet(self):
        return PacketConfig(self.m, self.hbar, self.b, self.z0, self.a)

    def as_dict(self):
        return {k: getattr(self, k) for k in ("m", "hbar", "a", "b", "omega", "L", "z0")}


@dataclass
class ResponseResult:
    probability: float
    rate: float
    quad_err: float
    ladder_truncation: int
    metadata: dict = field(default_factory=dict)
    flags: set = field(default_factory=set)


def _radial_range(cfg, T, decades=6.0):
    """Bounds of ln R for the rung integrand at mean time T.

    The integrand per unit ln R rises like R^3 below the smaller of the
    packet width and the pole scale ``exp(-aT)/a`` and falls at least like
    1/R^3 beyond the larger of the spread width and ``exp(aT)/a``; ``decades``
    of margin on each side leave tails well under any requested tolerance.
    """
    a = cfg.a
    ch, sh = np.cosh(a * T), np.sinh(a * T)
    q = cfg.hbar / (cfg.m * a * cfg.b)
    s_long = np.sqrt((cfg.b * ch) ** 2 + (q * sh) ** 2)
    lo = np.minimum(cfg.b, np.exp(-a * T) / a)
    hi = np.maximum(s_long, np.exp(a * T) / a)
    pad = decades * np.log(10.0)
    return np.log(lo) - pad, np.log(hi) + pad


def rung_density(n, T, u, rho, cfg):
    """Integrand of rung n over the positive octant, with p^2 + r^2 = rho^2.

    The factor ``1/(2 u sqrt(cosh^2 aT + (p^2+r^2)/u^2))`` is written as
    ``1/sqrt(u^2 cosh^2 aT + rho^2)`` (times the fold factor) so u -> 0 is
    regular. The normalisation ``2/pi^4`` collects the ``i a/(4 pi^4)`` rung
    prefactor, the 2 from pairing u with -u and the 4 from folding p and r.
    """
    a, w = cfg.a, cfg.omega
    zero = np.zeros_like(rho)
    br = u_pm(u, rho, zero, T, a)
    up, um = br.u_plus, br.u_minus
    rt = residue_weights(n, u, rho, zero, T, cfg.packet, branch=br)
    k = 2.0 * w / a
    bracket = (rt.delta_plus * np.sin(k * np.arcsinh(up)) / np.sqrt(1 + up * up)
               - rt.delta_minus * np.sin(k * np.arcsinh(um)) / np.sqrt(1 + um * um))
    ch = np.cosh(a * T)
    return (2.0 / np.pi ** 4 * np.exp(-2 * np.pi * n * w / a)
            / np.sqrt((u * ch) ** 2 + rho * rho) * bracket)


def _mapped(n, cfg, T, y, th):
    R = np.exp(y)
    u = R * np.cos(th)
    rho = R * np.sin(th)
    val = rung_density(n, T, u, rho, cfg)
    return 0.5 * np.pi * R ** 3 * np.sin(th) * val


def _unit_mapped(n, cfg, T, s, th):
    # ln R rescaled to [0, 1] separately at each T
    y0, y1 = _radial_range(cfg, T)
    return (y1 - y0) * _mapped(n, cfg, T, y0 + s * (y1 - y0), th)


def rung_at_time(n, T, cfg, tol=1e-7):
    """(u, p, r) integral of rung n at fixed mean time T."""
    y0, y1 = _radial_range(cfg, T)
    region = quad.QuadRegion((y0, 0.0), (y1, 0.5 * np.pi), rtol=tol, atol=1e-300)
    return quad.adaptive_nd(lambda x: _mapped(n, cfg, T, x[:, 0], x[:, 1]), region)


def transition_probability(cfg, tol=1e-5, n_max=None):
    """P(E) / |<E|Q(0)|0>|^2 from the residue ladder.

    Rung n contributes for mean times T in ``[pi n / a, L - pi n / a]``,
    where its pole fits inside the switching window; each rung is one 3D
    cubature over (T, radius, polar angle).
    """
    a = cfg.a
    N = min(window_ladder(0.5 * cfg.L, cfg.L, a), tolerance_ladder(cfg.omega, a))
    if n_max is not None:
        N = min(N, n_max)
    total = 0.0
    err = 0.0
    flags = set()
    start = time.perf_counter()
    for n in range(1, N + 1):
        lo, hi = np.pi * n / a, cfg.L - np.pi * n / a
        if hi <= lo:
            break
        region = quad.QuadRegion((lo, 0.0, 0.0), (hi, 1.0, 0.5 * np.pi), rtol=tol, atol=1e-300)
        res = quad.adaptive_nd(lambda x: _unit_mapped(n, cfg, x[:, 0], x[:, 1], x[:, 2]), region)
        total += res.value.real
        err += res.err
        flags |= res.flags - {quad.CONVERGED}
    meta = cfg.as_dict()
    meta["seconds"] = time.perf_counter() - start
    result = ResponseResult(total, total / cfg.L, err, N, meta, flags or {quad.CONVERGED})
    if quad.BUDGET_EXHAUSTED in flags:
        raise AccuracyError("transition probability did not converge", partial=result)
    return result


def unruh_rate_closed_form(omega, a, N=np.inf):
    """``(omega/2 pi) sum_{n=1}^N exp(-2 pi n omega / a)``; N = inf gives the Planck form."""
    x = 2 * np.pi * omega / a
    if np.isinf(N):
        return omega / (2 * np.pi) * np.exp(-x) / -np.expm1(-x)
    n = np.arange(1, int(N) + 1)
    return omega / (2 * np.pi) * np.sum(np.exp(-n * x))


def unruh_probability_closed_form(omega, a, L):
    """Point-detector probability over a window L with the window ladder rule.

    Rung n is present for a T-interval of length ``L - 2 pi n / a``.
    """
    x = 2 * np.pi * omega / a
    n = np.arange(1, int(np.floor(L * a / (2 * np.pi))) + 1)
    return omega / (2 * np.pi) * np.sum(np.exp(-n * x) * np.maximum(L - 2 * np.pi * n / a, 0.0))


@dataclass
class SweepCell:
    hbar: float
    b: float
    result: ResponseResult = None
    error: str = None


@dataclass
class SweepTable:
    cells: list
    target: float = None
    exponent: float = None
    exponent_err: float = None
    intercept: float = None
    extrapolated: float = None
    extrapolated_err: float = None


def _run_cell(cfg, tol):
    try:
        return SweepCell(cfg.hbar, cfg.b, transition_probability(cfg, tol))
    except AccuracyError as exc:
        return SweepCell(cfg.hbar, cfg.b, exc.partial, str(exc))


def limit_sweep_classical_first(base, hbar_grid, b_grid, tol=1e-5):
    """hbar -> 0 at fixed b, then b -> 0 at the smallest hbar.

    The (smallest hbar, base b) cell is computed once, at the end of the
    hbar stage.

    ``target`` is the point-detector probability per unit time for the same
    window, which the final cell should approach.
    """
    hbar_grid = sorted(hbar_grid, reverse=True)
    b_grid = sorted(b_grid, reverse=True)
    cells = [_run_cell(replace(base, hbar=h), tol) for h in hbar_grid]
    h_min = hbar_grid[-1]
    cells += [_run_cell(replace(base, hbar=h_min, b=b), tol) for b in b_grid if b != base.b]
    target = unruh_probability_closed_form(base.omega, base.a, base.L) / base.L
    return SweepTable(cells, target=target)


def fit_power_law(b, P, P_err=None):
    """Least-squares slope and intercept of log P against log b, with slope std error."""
    x, y = np.log(b), np.log(P)
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    dof = max(len(x) - 2, 1)
    resid = y - A @ coef
    s2 = float(resid @ resid) / dof
    cov = s2 * np.linalg.inv(A.T @ A)
    return coef[0], coef[1], float(np.sqrt(cov[0, 0]))


def extrapolate_to_zero(b, P, P_err, powers=(3, 5)):
    """Intercept of a weighted fit ``P = P0 + sum_k c_k b^k`` and its error.

    Weights are the quadrature errors; when the fit is worse than those
    errors allow (chi^2/dof > 1) the intercept error is inflated by
    sqrt(chi^2/dof).
    """
    b, P, P_err = (np.asarray(x, dtype=float) for x in (b, P, P_err))
    cols = [np.ones_like(b)] + [b ** k for k in powers]
    A = np.vstack(cols).T / P_err[:, None]
    y = P / P_err
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    cov = np.linalg.inv(A.T @ A)
    dof = len(b) - len(cols)
    chi2 = float(np.sum((A @ coef - y) ** 2))
    inflate = np.sqrt(chi2 / dof) if dof > 0 else 1.0
    return float(coef[0]), float(np.sqrt(cov[0, 0]) * max(inflate, 1.0))


def limit_sweep_point_first(base, b_grid, tol=1e-5):
    """b -> 0 at fixed hbar > 0 with a log-log fit of P(b).

    Cells whose probability is not resolved above their quadrature error are
    excluded from the fit. The b = 0 value comes from ``extrapolate_to_zero``
    with the leading b^3 term and its first b^2 correction.
    """
    b_grid = sorted(b_grid, reverse=True)
    cells = [_run_cell(replace(base, b=b), tol) for b in b_grid]
    good = [c for c in cells if c.error is None and c.result.probability > 3 * c.result.quad_err]
    table = SweepTable(cells)
    if len(good) >= 2:
        b = np.array([c.b for c in good])
        P = np.array([c.result.probability for c in good])
        err = np.array([max(c.result.quad_err, 1e-300) for c in good])
        table.exponent, table.intercept, table.exponent_err = fit_power_law(b, P)
        powers = (3, 5) if len(good) >= 4 else (3,)
        table.extrapolated, table.extrapolated_err = extrapolate_to_zero(b, P, err, powers)
    return table


@dataclass
class RateEstimate:
    rate: float
    offset: float
    relative_residual: float
    L: np.ndarray
    P: np.ndarray


def rate_per_unit_time(cfg, L_grid, tol=1e-5, max_residual=0.05, probabilities=None):
    """Large-L slope of P(L).

    Fits ``P = offset + rate * L`` on the grid; a relative residual above
    ``max_residual`` means P is not yet linear in L and raises.
    """
    L = np.asarray(sorted(L_grid), dtype=float)
    if probabilities is None:
        P = np.array([transition_probability(replace(cfg, L=l), tol).probability for l in L])
    else:
        P = np.asarray(probabilities, dtype=float)
    A = np.vstack([L, np.ones_like(L)]).T
    coef, *_ = np.linalg.lstsq(A, P, rcond=None)
    resid = np.max(np.abs(P - A @ coef)) / max(np.max(np.abs(P)), 1e-300)
    est = RateEstimate(float(coef[0]), float(coef[1]), float(resid), L, P)
    if len(L) > 2 and resid > max_residual:
        raise AccuracyError(f"P(L) not linear in L (relative residual {resid:.3g})", partial=est)
    return est


def planck_ladder(cfg, T, n_max, tol=1e-8):
    """Rung integrals at fixed T for n = 1..n_max and the fitted log-slope in n."""
    vals = np.array([rung_at_time(n, T, cfg, tol).value.real for n in range(1, n_max + 1)])
    n = np.arange(1, n_max + 1)
    slope = np.polyfit(n, np.log(np.abs(vals)), 1)[0]
    return vals, slope
