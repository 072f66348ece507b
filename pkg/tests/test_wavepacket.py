import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unruh_packet import quad
from unruh_packet import wavepacket as W
from unruh_packet.errors import AccuracyError, SingularInputError

CFG = W.PacketConfig(m=1.0, hbar=1.0, b=0.5, z0=1.0, a=1.0)


def test_beta_examples():
    assert W.beta(1, 1, 1, np.arcsinh(1.0)) == pytest.approx(0.5, rel=1e-14)
    assert W.beta(2, 1, 0.0, 4.0) == pytest.approx(0.25, rel=1e-14)
    assert W.beta(2, 1, 1e-8, 4.0) == pytest.approx(0.25, rel=1e-12)


def test_beta_and_kernel_raise_at_zero_time():
    with pytest.raises(SingularInputError):
        W.beta(1, 1, 1, 0.0)
    with pytest.raises(SingularInputError):
        W.kernel(0.1, 0.2, 0.0, 1, 1, 1)


@settings(max_examples=50)
@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.05, 3))
def test_kernel_is_symmetric(z, zp, tau):
    assert W.kernel(z, zp, tau, 1.3, 0.7, 0.9) == pytest.approx(W.kernel(zp, z, tau, 1.3, 0.7, 0.9), rel=1e-12)


def test_kernel_modulus():
    m, hbar, a, tau = 1.0, 1.0, 1.0, 1.2
    k = W.kernel(0.3, -0.7, tau, m, hbar, a)
    assert abs(k) ** 2 == pytest.approx(m * a / (2 * np.pi * hbar * np.sinh(a * tau)), rel=1e-13)


def test_kernel_joins_free_kernel_for_small_a():
    z, zp, tau = 0.4, -0.2, 0.8
    free = np.sqrt(1 / (2j * np.pi * tau)) * np.exp(1j * (z - zp) ** 2 / (2 * tau))
    assert W.kernel(z, zp, tau, 1.0, 1.0, 1e-6) == pytest.approx(free, rel=1e-9)


@pytest.mark.parametrize("t1, t2", [(0.4, 0.7), (1.0, 0.3)])
def test_kernel_semigroup_on_evolved_packets(t1, t2):
    # K(t2) applied to psi(t1) must give psi(t1 + t2), phases included
    d = W.evolve_density(CFG, t1)
    lo, hi = d.z_c - 12 / d.alpha, d.z_c + 12 / d.alpha
    x, w = np.polynomial.legendre.leggauss(2000)
    y = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * w
    psi1 = W.evolve_amplitude(CFG, y, t1)
    z = np.linspace(-2, 6, 17)
    comp = np.array([np.sum(w * W.kernel(zi, y, t2, 1, 1, 1) * psi1) for zi in z])
    ref = W.evolve_amplitude(CFG, z, t1 + t2)
    assert np.max(np.abs(comp - ref)) / np.max(np.abs(ref)) < 1e-6


def test_density_initial_condition():
    d = W.evolve_density(CFG, 0.0)
    assert d.alpha == pytest.approx(1 / CFG.b, rel=1e-15)
    assert d.z_c == CFG.z0


def test_free_spreading_limit():
    cfg = W.PacketConfig(m=2.0, hbar=0.5, b=0.3, z0=0.0, a=0.0)
    tau = 1.7
    expected = 1 / (cfg.b * np.sqrt(1 + (cfg.hbar * tau / (cfg.m * cfg.b ** 2)) ** 2))
    assert W.evolve_density(cfg, tau).alpha == pytest.approx(expected, rel=1e-14)


def test_classical_width_limit():
    cfg = W.PacketConfig(m=1.0, hbar=1e-8, b=0.5, z0=1.0, a=1.0)
    assert W.evolve_density(cfg, 1.3).alpha == pytest.approx(1 / (0.5 * np.cosh(1.3)), rel=1e-12)


def test_density_continuous_through_zero():
    eps = 1e-7
    a0 = W.evolve_density(CFG, 0.0).alpha
    assert W.evolve_density(CFG, eps).alpha == pytest.approx(a0, rel=1e-10)
    assert W.evolve_density(CFG, -eps).alpha == pytest.approx(a0, rel=1e-10)


def test_amplitude_squares_to_density():
    rng = np.random.default_rng(5)
    z = rng.uniform(-2, 5, 100)
    tau = rng.uniform(0.05, 2.0, 100)
    for zi, ti in zip(z, tau):
        rho = W.density(CFG, zi, ti)
        psi2 = abs(W.evolve_amplitude(CFG, zi, ti)) ** 2
        assert psi2 == pytest.approx(rho, rel=1e-10, abs=1e-300)


def test_amplitude_at_zero_time_is_initial_packet():
    z = np.linspace(-1, 3, 9)
    assert np.allclose(W.evolve_amplitude(CFG, z, 0.0), W.initial_amplitude(CFG, z))


@pytest.mark.parametrize("cfg, tau", [(CFG, 0.8), (CFG.transverse(), 2.0)])
def test_amplitude_is_normalized(cfg, tau):
    d = W.evolve_density(cfg, tau)
    lo, hi = quad.gaussian_bounds(d.z_c, d.alpha, k=10)
    val = quad.gk15_adaptive(lambda z: np.abs(W.evolve_amplitude(cfg, z, tau)) ** 2,
                             np.linspace(lo, hi, 5), rtol=1e-13, atol=1e-300).value
    assert abs(val - 1.0) < 1e-8


@pytest.mark.parametrize("degree", [0, 1, 2, 3, 4])
def test_delta_function_limit(degree):
    coeffs = np.arange(1, degree + 2, dtype=float)
    f = np.polynomial.Polynomial(coeffs)
    zc = 0.7
    errs = []
    for alpha in (10.0, 20.0, 40.0):
        lo, hi = zc - 12 / alpha, zc + 12 / alpha
        rho = lambda z: alpha / np.sqrt(np.pi) * np.exp(-(alpha * (z - zc)) ** 2)
        val = quad.gk15_adaptive(lambda z: f(z) * rho(z), [lo, zc, hi], rtol=1e-13, atol=1e-300).value
        errs.append(abs(val - f(zc)))
    if degree < 2:
        assert max(errs) < 1e-12
    else:
        # O(alpha^-2): halving the width quarters the error
        assert errs[1] / errs[0] == pytest.approx(0.25, rel=0.1)


def test_classical_width_grows_and_peak_follows_center():
    cfg = W.PacketConfig(m=1.0, hbar=1e-9, b=0.3, z0=1.0, a=1.0)
    taus = np.linspace(0, 2, 9)
    widths = [1 / W.evolve_density(cfg, t).alpha for t in taus]
    assert np.all(np.diff(widths) > 0)
    z = np.linspace(-5, 10, 300001)
    for t in taus[1:]:
        peak = z[np.argmax(W.density(cfg, z, t))]
        assert abs(peak - np.cosh(t)) <= z[1] - z[0]


GRID = W.GridSpec(-20.0, 22.0, 4001, 1e-3)


def test_pde_oracle_matches_closed_form():
    res = W.pde_oracle_evolve(CFG, GRID, 0.5)
    exact = W.density(CFG, res.z, 0.5)
    assert np.max(np.abs(res.density - exact)) / exact.max() < 1e-3
    assert res.norm_drift < 1e-8


def test_pde_oracle_free_spreading():
    cfg = CFG.transverse()
    tau = 1.5
    res = W.pde_oracle_evolve(cfg, W.GridSpec(-25, 25, 5001, 1e-3), tau)
    h = res.z[1] - res.z[0]
    var = np.sum(res.z ** 2 * res.density) * h / (np.sum(res.density) * h)
    width = np.sqrt(2 * var)
    expected = cfg.b * np.sqrt(1 + (cfg.hbar * tau / (cfg.m * cfg.b ** 2)) ** 2)
    assert width == pytest.approx(expected, rel=1e-3)


def test_pde_oracle_center_follows_hyperbola():
    res = W.pde_oracle_evolve(CFG, GRID, 1.0)
    h = res.z[1] - res.z[0]
    assert abs(res.z[np.argmax(res.density)] - np.cosh(1.0)) <= h
    assert res.norm_drift < 1e-8


def test_pde_oracle_rejects_narrow_grid():
    with pytest.raises(AccuracyError):
        W.pde_oracle_evolve(CFG, W.GridSpec(-2.0, 4.0, 601, 1e-3), 1.0)


def test_packet_config_validation():
    with pytest.raises(ValueError):
        W.PacketConfig(m=0.0, hbar=1.0, b=1.0, z0=0.0, a=1.0)
    with pytest.raises(ValueError):
        W.PacketConfig(m=1.0, hbar=1.0, b=1.0, z0=0.0, a=-1.0)
    tr = CFG.transverse()
    assert tr.a == 0 and tr.z0 == 0 and tr.b == CFG.b
