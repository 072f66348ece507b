"""Numerical engines: adaptive cubature, panelled 1D oscillatory quadrature,
Gaussian importance-sampled Monte Carlo and Richardson extrapolation.

Every routine returns a :class:`QuadResult`. Complex integrands are handled
by integrating real and imaginary parts on one subdivision tree.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

DEFAULT_RTOL = 1e-6
DEFAULT_ATOL = 1e-14

CONVERGED = "converged"
BUDGET_EXHAUSTED = "budget_exhausted"
SLIVER_EXCLUDED = "sliver_excluded"


@dataclass
class QuadRegion:
    """Axis-aligned integration box with its accuracy target."""

    lower: tuple
    upper: tuple
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    max_subdivisions: int = 10000

    def __post_init__(self):
        self.lower = tuple(float(x) for x in np.atleast_1d(self.lower))
        self.upper = tuple(float(x) for x in np.atleast_1d(self.upper))
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper bounds differ in dimension")
        if not (self.rtol > 0 or self.atol > 0):
            raise ValueError("tolerance must be positive")

    @property
    def ndim(self):
        return len(self.lower)


@dataclass
class QuadResult:
    value: complex
    err: float
    cells: int = 1
    flags: set = field(default_factory=lambda: {CONVERGED})

    @property
    def converged(self):
        return BUDGET_EXHAUSTED not in self.flags


def gaussian_bounds(center, inv_width, k=8.0):
    """Truncation interval for a weight ``exp(-inv_width**2 (x-center)**2)``.

    ``k`` counts standard deviations, ``1/(sqrt(2) inv_width)`` each, so the
    discarded tail is below ``exp(-k**2/2)`` relative to the peak.
    """
    sd = 1.0 / (np.sqrt(2.0) * np.asarray(inv_width, dtype=float))
    return center - k * sd, center + k * sd


def _as_pairs(values):
    values = np.asarray(values)
    return np.stack([values.real, values.imag], axis=-1).astype(float)


def adaptive_nd(integrand, region, rule=None):
    """Adaptive cubature of ``integrand`` over ``region``.

    ``integrand`` receives an ``(npoints, ndim)`` array and returns
    ``npoints`` real or complex values. The subdivision itself is delegated to
    :func:`scipy.integrate.cubature` (Gauss-Kronrod product rule in low
    dimension, Genz-Malik above three) which processes regions in a fixed
    order, so results are reproducible.
    """
    if rule is None:
        rule = "gk21" if region.ndim <= 3 else "genz-malik"

    def f(x):
        return _as_pairs(integrand(x))

    res = integrate.cubature(
        f,
        np.array(region.lower),
        np.array(region.upper),
        rule=rule,
        rtol=region.rtol,
        atol=region.atol,
        max_subdivisions=region.max_subdivisions,
    )
    est = res.estimate
    err = float(np.hypot(*res.error))
    flags = {CONVERGED} if res.status == "converged" else {BUDGET_EXHAUSTED}
    return QuadResult(complex(est[0], est[1]), err, len(res.regions), flags)


# Gauss-Kronrod 7/15 abscissae and weights on [-1, 1]
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk15(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(f(mid + half * _NODES), dtype=complex)
    k = half * np.dot(_WK, vals)
    g = half * np.dot(_WG_FULL, vals)
    return k, abs(k - g)


def gk15_adaptive(f, breakpoints, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL, max_cells=20000):
    """Globally adaptive Gauss-Kronrod over consecutive ``breakpoints``.

    ``f`` must accept a 1D array. The worst cell is bisected first; ties are
    broken by creation order so the reduction is deterministic.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    heap = []
    counter = 0
    total = 0j
    total_err = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        v, e = _gk15(f, a, b)
        heapq.heappush(heap, (-e, counter, a, b, v))
        counter += 1
        total += v
        total_err += e
    flags = {CONVERGED}
    while total_err > max(atol, rtol * abs(total)):
        if len(heap) >= max_cells:
            flags = {BUDGET_EXHAUSTED}
            break
        neg_e, _, a, b, v = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if not (a < m < b):
            # cannot split further at double precision
            flags = {SLIVER_EXCLUDED}
            heapq.heappush(heap, (neg_e, counter, a, b, v))
            break
        v1, e1 = _gk15(f, a, m)
        v2, e2 = _gk15(f, m, b)
        heapq.heappush(heap, (-e1, counter, a, m, v1))
        heapq.heappush(heap, (-e2, counter + 1, m, b, v2))
        counter += 2
        total += v1 + v2 - v
        total_err += e1 + e2 + neg_e
    # re-sum in interval order for a reproducible total
    cells = sorted(heap, key=lambda c: c[2])
    total = sum((c[4] for c in cells), 0j)
    total_err = float(sum(-c[0] for c in cells))
    return QuadResult(total, total_err, len(cells), flags)


def oscillatory_1d(integrand, window, omega, pole_hints=(), rtol=DEFAULT_RTOL,
                   atol=DEFAULT_ATOL, pole_grading=12, max_cells=20000):
    """Panel quadrature of a finite window for integrands oscillating at ``omega``.

    The window is cut into panels no wider than ``pi/(4 omega)``. Each hinted
    pole inside the window becomes a breakpoint surrounded by geometrically
    shrinking panels, after which global adaptive bisection takes over.
    """
    lo, hi = map(float, window)
    if not hi > lo:
        raise ValueError("window must be increasing")
    width = np.pi / (4.0 * omega) if omega > 0 else hi - lo
    n_panels = max(1, int(np.ceil((hi - lo) / width)))
    pts = list(np.linspace(lo, hi, n_panels + 1))
    span = hi - lo
    for h in np.atleast_1d(pole_hints):
        h = float(np.real(h))
        if not lo < h < hi:
            continue
        pts.append(h)
        d = min(width, span) / 2.0
        for _ in range(pole_grading):
            for q in (h - d, h + d):
                if lo < q < hi:
                    pts.append(q)
            d /= 4.0
    return gk15_adaptive(integrand, pts, rtol=rtol, atol=atol, max_cells=max_cells)


def mc_importance(integrand, mean, cov, n, seed, scale=1.0, batch=1 << 16):
    """Estimate ``scale * E[integrand(X)]`` with ``X ~ N(mean, cov)``.

    Samples are drawn in fixed-size batches from a seeded PCG64 stream and
    accumulated in batch order, so a given seed always gives the same bits.
    """
    mean = np.atleast_1d(np.asarray(mean, dtype=float))
    cov = np.atleast_2d(np.asarray(cov, dtype=float))
    rng = np.random.Generator(np.random.PCG64(seed))
    chol = np.linalg.cholesky(cov)
    s1 = 0j
    s2re = 0.0
    s2im = 0.0
    done = 0
    while done < n:
        k = min(batch, n - done)
        x = mean + rng.standard_normal((k, mean.size)) @ chol.T
        v = np.asarray(integrand(x), dtype=complex)
        s1 += v.sum()
        s2re += np.sum(v.real ** 2)
        s2im += np.sum(v.imag ** 2)
        done += k
    m = s1 / n
    var = (s2re / n - m.real ** 2) + (s2im / n - m.imag ** 2)
    stderr = np.sqrt(max(var, 0.0) / (n - 1))
    return QuadResult(scale * m, abs(scale) * stderr, n, {CONVERGED})


def richardson(values, ratio=2.0, orders=(1, 2, 3)):
    """Extrapolate ``values[k] = F(h / ratio**k)`` to ``h -> 0``.

    Assumes ``F(h) = F0 + c1 h**orders[0] + c2 h**orders[1] + ...`` and runs
    the Neville table. Returns the extrapolated value and the magnitude of the
    last correction as an error estimate.
    """
    table = [np.asarray(v, dtype=complex) for v in values]
    prev = table[-1]
    err = np.inf
    for j, p in enumerate(orders[: len(values) - 1]):
        f = ratio ** p
        table = [(f * table[i + 1] - table[i]) / (f - 1.0) for i in range(len(table) - 1)]
        err = abs(table[-1] - prev)
        prev = table[-1]
    return table[-1], err
