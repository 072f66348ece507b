"""Acceptance battery shared by ``--mode validate`` and the test suite.

Each check returns a ``Verdict``; ``run_battery`` runs them in order and
prints one line per criterion.
"""

import sys
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import correlator, quad, residues, response, wavepacket
from .errors import AccuracyError

TOTAL_BUDGET_SECONDS = 600.0


@dataclass
class Verdict:
    criterion: int
    name: str
    passed: bool
    summary: str
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return f"criterion {self.criterion} [{tag}] {self.name}: {self.summary} ({self.seconds:.1f} s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        v = fn(*args, **kwargs)
        v.seconds = time.perf_counter() - start
        return v
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


PROPAGATION_CFG = wavepacket.PacketConfig(m=1.0, hbar=1.0, b=0.5, z0=1.0, a=1.0)
PROPAGATION_GRID = wavepacket.GridSpec(-20.0, 22.0, 4001, 1e-3)


@_timed
def check_propagation(taus=(0.5, 1.0), cfg=PROPAGATION_CFG, grid=PROPAGATION_GRID):
    """Closed-form density against the Crank-Nicolson oracle, sup-norm relative error."""
    errs = {}
    start = time.perf_counter()
    for tau in taus:
        res = wavepacket.pde_oracle_evolve(cfg, grid, tau / cfg.a)
        exact = wavepacket.density(cfg, res.z, tau / cfg.a)
        errs[tau] = float(np.max(np.abs(res.density - exact)) / np.max(exact))
    elapsed = time.perf_counter() - start
    worst = max(errs.values())
    ok = worst < 1e-3 and elapsed < 60.0
    return Verdict(1, "packet propagation oracle", ok,
                   f"max sup-norm rel err {worst:.2e} (< 1e-3), oracle time {elapsed:.1f} s (< 60 s)",
                   details={"errors": errs, "oracle_seconds": elapsed})


REDUCTION_CFG = wavepacket.PacketConfig(m=1.0, hbar=1e-6, b=0.02, z0=1.0, a=1.0)
REDUCTION_POINTS = ((0.5, 0.3), (1.0, 1.0), (2.0, 0.2), (0.8, 0.6), (0.2, 0.2))


@_timed
def check_reduction(seed=0, n_samples=10 ** 6, eps=1e-9, cfg=REDUCTION_CFG, points=REDUCTION_POINTS):
    """Reduced 3D correlator against the 6D Monte Carlo at five (t, T) points."""
    rows = []
    ok = True
    for i, (t, T) in enumerate(points):
        red = correlator.correlator_reduced(t, T, cfg, eps=eps, tol=1e-10)
        mc = correlator.correlator_full_oracle(t, T, cfg, eps=eps, n_samples=n_samples, seed=seed + i)
        sigma = np.hypot(mc.err, red.err)
        z = abs(red.value - mc.value) / sigma
        rel = mc.err / abs(mc.value)
        ok &= bool(z < 3.0 and rel < 1e-2)
        rows.append((t, T, float(z), float(rel)))
    zmax = max(r[2] for r in rows)
    relmax = max(r[3] for r in rows)
    return Verdict(2, "Gaussian reduction vs 6D Monte Carlo", ok,
                   f"max |diff|/sigma {zmax:.2f} (< 3), max MC stderr/|G| {relmax:.1e} (< 1e-2)",
                   details={"rows": rows})


RESIDUE_CFG = wavepacket.PacketConfig(m=1.0, hbar=1.0, b=0.5, z0=1.0, a=1.0)


@_timed
def check_residues(seed=0, n_points=10, omega_ratios=(0.5, 1.0, 2.0), eps=1e-3, cfg=RESIDUE_CFG):
    """Residue ladder against eps-extrapolated direct t quadrature, plus the arc remainder.

    Points are drawn with (u, p, r) uniform in [-1, 1]^3 and T uniform in
    [pi/a, 3 pi/a], so the window ``L = 20 pi / a`` holds one to three rungs.
    The arc check compares direct quadratures over half-widths L and 2L.
    """
    a = cfg.a
    L = 20 * np.pi / a
    rng = np.random.default_rng(seed)
    worst = 0.0
    rows = []
    for wa in omega_ratios:
        omega = wa * a
        for _ in range(n_points):
            u, p, r = rng.uniform(-1, 1, 3)
            T = rng.uniform(np.pi / a, 3 * np.pi / a)
            W = residues.window_halfwidth(T, L)
            N = residues.window_ladder(T, L, a)
            res = residues.inner_t_integral(omega, T, u, p, r, cfg, N)
            try:
                direct = residues.direct_t_oracle(omega, T, u, p, r, cfg, eps, (-W, W), tol=1e-8).value
            except AccuracyError as exc:
                direct = exc.partial.value
            rel = abs(res - direct) / abs(direct)
            worst = max(worst, rel)
            rows.append((wa, u, p, r, T, complex(res), complex(direct), float(rel)))
    arc = 0.0
    for wa in omega_ratios:
        u, p, r = rng.uniform(-1, 1, 3)
        T = rng.uniform(np.pi / a, 3 * np.pi / a)
        v1 = residues.direct_t_oracle(wa * a, T, u, p, r, cfg, eps, (-L, L), tol=1e-8).value
        v2 = residues.direct_t_oracle(wa * a, T, u, p, r, cfg, eps, (-2 * L, 2 * L), tol=1e-8).value
        arc = max(arc, abs(v1 - v2) / abs(v2))
    ok = worst < 1e-3 and arc < 1e-3
    return Verdict(3, "residue sum vs direct t quadrature", ok,
                   f"max rel diff {worst:.2e} (< 1e-3), arc remainder {arc:.1e} (< 1e-3)",
                   details={"rows": rows, "arc": arc})


UNRUH_A = 1e-5


def unruh_base(omega_ratio, a=UNRUH_A):
    """Configuration for the classical-first sweep; see the decisions log for the scale choice."""
    return response.DetectorConfig(m=1e10, hbar=1.0, a=a, b=0.5, omega=omega_ratio * a, L=3 * np.pi / a)


@_timed
def check_unruh(omega_ratios=(1 / (2 * np.pi), 1 / np.pi), tol=1e-4):
    """hbar: 1 -> 1e-3, then b: 0.5 -> 1e-2; final rate and the Planck slope of the ladder."""
    hbar_grid = np.logspace(0, -3, 4)
    b_grid = np.logspace(np.log10(0.5), -2, 4)
    ok = True
    parts = []
    probs = []
    for wa in omega_ratios:
        base = unruh_base(wa)
        table = response.limit_sweep_classical_first(base, hbar_grid, b_grid, tol)
        final = table.cells[-1]
        probs += [(c.result.probability, c.result.quad_err) for c in table.cells if c.result]
        rate_err = abs(final.result.rate / table.target - 1) if final.error is None else np.inf
        cfg = replace(base, hbar=hbar_grid[-1], b=b_grid[-1])
        _, slope = response.planck_ladder(cfg, 0.5 * cfg.L, 3, tol=1e-9)
        expected = -2 * np.pi * wa
        slope_err = abs(slope / expected - 1)
        ok &= bool(rate_err < 1e-2 and slope_err < 2e-2)
        parts.append(f"w/a={wa:.4f}: rate dev {rate_err:.1e}, slope dev {slope_err:.1e}")
    return Verdict(4, "Unruh recovery, classical limit first", ok,
                   "; ".join(parts) + " (< 1e-2, < 2e-2)", details={"probabilities": probs})


def decoupling_base():
    return response.DetectorConfig(m=1.0, hbar=1.0, a=1.0, b=0.1, omega=1 / (2 * np.pi), L=3 * np.pi)


@_timed
def check_decoupling(tol=1e-6):
    """b: 1e-1 -> 1e-3 at hbar = 1; log-log exponent and the b = 0 extrapolation."""
    table = response.limit_sweep_point_first(decoupling_base(), np.logspace(-1, -3, 7), tol)
    probs = [(c.result.probability, c.result.quad_err) for c in table.cells if c.result]
    if table.exponent is None:
        return Verdict(5, "decoupling, point limit first", False, "fewer than two resolved cells",
                       details={"probabilities": probs})
    ok = abs(table.exponent - 3.0) <= 0.1 and abs(table.extrapolated) <= table.extrapolated_err
    return Verdict(5, "decoupling, point limit first", bool(ok),
                   f"exponent {table.exponent:.4f} +- {table.exponent_err:.1e} (3 +- 0.1), "
                   f"P(0) = {table.extrapolated:.2e} +- {table.extrapolated_err:.1e}",
                   details={"probabilities": probs, "exponent": table.exponent})


def _normalization_error():
    worst = 0.0
    for cfg, tau in ((PROPAGATION_CFG, 0.7), (PROPAGATION_CFG.transverse(), 2.0),
                     (wavepacket.PacketConfig(1.0, 1e-6, 0.01, 1.0, 1.0), 1.3)):
        d = wavepacket.evolve_density(cfg, tau)
        lo, hi = quad.gaussian_bounds(d.z_c, d.alpha, k=10)
        val = quad.gk15_adaptive(lambda z: wavepacket.density(cfg, z, tau),
                                 np.linspace(lo, hi, 5), rtol=1e-13, atol=1e-300).value
        worst = max(worst, abs(val - 1.0))
    return worst


def _semigroup_error(t1=0.4, t2=0.7, cfg=PROPAGATION_CFG):
    # propagate the packet evolved to t1 by the kernel for t2
    d = wavepacket.evolve_density(cfg, t1)
    lo, hi = d.z_c - 12 / d.alpha, d.z_c + 12 / d.alpha
    x, w = np.polynomial.legendre.leggauss(400)
    y = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * w
    psi1 = wavepacket.evolve_amplitude(cfg, y, t1)
    z = np.linspace(-2.0, 6.0, 17)
    comp = np.array([np.sum(w * wavepacket.kernel(zi, y, t2, cfg.m, cfg.hbar, cfg.a) * psi1) for zi in z])
    ref = wavepacket.evolve_amplitude(cfg, z, t1 + t2)
    return float(np.max(np.abs(comp - ref)) / np.max(np.abs(ref)))


def _hermiticity_error(seed, cfg=REDUCTION_CFG, n=20):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t, T in rng.uniform(0.2, 2.0, (n, 2)):
        g1 = correlator.correlator_reduced(t, T, cfg, eps=1e-6, tol=1e-10).value
        g2 = correlator.correlator_reduced(-t, T, cfg, eps=1e-6, tol=1e-10).value
        worst = max(worst, abs(np.conj(g1) - g2) / abs(g1))
    return worst


def _product_identity_error(seed, n=10 ** 4):
    rng = np.random.default_rng(seed)
    u, p, r = rng.uniform(-3, 3, (3, n))
    T = rng.uniform(-2, 2, n)
    a = rng.uniform(0.1, 3, n)
    br = residues.u_pm(u, p, r, T, a)
    target = -0.25 * a * a * (u * u + p * p + r * r)
    return float(np.max(np.abs(br.u_plus * br.u_minus / target - 1)))


@_timed
def check_invariants(seed=0, probabilities=None, elapsed_before=0.0):
    """Normalization, semigroup, Hermiticity, product identity, non-negativity, total runtime."""
    start = time.perf_counter()
    if probabilities is None:
        probabilities = []
        for cfg in (decoupling_base(), replace(decoupling_base(), b=0.01), unruh_base(1 / np.pi)):
            res = response.transition_probability(replace(cfg, hbar=cfg.hbar * 1e-3), tol=1e-4)
            probabilities.append((res.probability, res.quad_err))
    checks = {
        "normalization": (_normalization_error(), 1e-8),
        "semigroup": (_semigroup_error(), 1e-6),
        "hermiticity": (_hermiticity_error(seed), 1e-6),
        "product identity": (_product_identity_error(seed), 1e-12),
    }
    negative = sum(1 for P, e in probabilities if P < -e)
    total = elapsed_before + time.perf_counter() - start
    ok = all(v < lim for v, lim in checks.values()) and negative == 0 and total < TOTAL_BUDGET_SECONDS
    text = ", ".join(f"{k} {v:.1e}" for k, (v, _) in checks.items())
    return Verdict(6, "invariant battery", bool(ok),
                   f"{text}, negative P {negative}/{len(probabilities)}, battery {total:.0f} s (< 600 s)",
                   details={k: v for k, (v, _) in checks.items()})


def run_battery(seed=0, stream=sys.stdout):
    """Run criteria 1-6 in order; criterion 6 reuses the probabilities of 4 and 5."""
    start = time.perf_counter()
    verdicts = []

    def report(v):
        verdicts.append(v)
        if stream is not None:
            print(v.line(), file=stream, flush=True)

    report(check_propagation())
    report(check_reduction(seed=seed))
    report(check_residues(seed=seed))
    v4 = check_unruh()
    report(v4)
    v5 = check_decoupling()
    report(v5)
    probs = v4.details.get("probabilities", []) + v5.details.get("probabilities", [])
    report(check_invariants(seed=seed, probabilities=probs,
                            elapsed_before=time.perf_counter() - start))
    return verdicts
