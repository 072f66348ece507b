import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unruh_packet import kinematics as K

finite = dict(allow_nan=False, allow_infinity=False)


@pytest.mark.parametrize("a, tau, x0, x3", [
    (1.0, 0.0, 0.0, 1.0),
    (1.0, np.arcsinh(1.0), 1.0, np.sqrt(2.0)),
    (2.0, 0.0, 0.0, 0.5),
])
def test_rindler_examples(a, tau, x0, x3):
    assert K.rindler_to_minkowski(a, 0.0, tau) == pytest.approx((x0, x3), rel=1e-12, abs=1e-15)


def test_rindler_rejects_nonpositive_acceleration():
    with pytest.raises(ValueError):
        K.rindler_to_minkowski(0.0, 0.0, 1.0)


@settings(max_examples=100)
@given(st.floats(0.01, 10, **finite), st.floats(-3, 3, **finite))
def test_hyperbola_constraint(a, tau):
    x0, x3 = K.rindler_to_minkowski(a, 0.0, tau)
    # cancellation in x3 - x0 limits the error to a few ulps of x3^2
    assert abs((x3 - x0) * (x3 + x0) - a ** -2) <= 8 * np.finfo(float).eps * x3 * x3


@pytest.mark.parametrize("a, z0, tau, zc", [(1, 1, 0, 1), (1, 1, 1, np.cosh(1)), (0, 0.3, 7, 0.3)])
def test_classical_center(a, z0, tau, zc):
    assert K.classical_center(a, z0, tau) == pytest.approx(zc, rel=1e-14)


def test_interval_examples():
    assert K.interval_D(1.0, 0.0) == 0
    assert K.interval_D(2.0, 1.0).real == pytest.approx(np.sinh(1.0) ** 2, rel=1e-14)
    assert K.interval_D(1.0, 1e-4).real == pytest.approx(1e-8, rel=1e-8)


def test_interval_imaginary_part_is_negative_for_small_positive_t():
    assert K.interval_D(1.0, 0.3, 1e-3).imag < 0


@settings(max_examples=100)
@given(st.floats(0.01, 5, **finite), st.floats(-4, 4, **finite), st.floats(0, 0.5, **finite))
def test_interval_conjugation_symmetry(a, t, eps):
    lhs = np.conj(K.interval_D(a, t, eps))
    rhs = K.interval_D(a, -t, eps)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_small_acceleration_reduces_to_inertial_interval():
    t = np.linspace(-2, 2, 41)
    eps = 0.05
    D = K.interval_D(1e-6, t, eps)
    flat = (t - 1j * eps) ** 2
    # next series term is a^2 z^4 / 12
    assert np.max(np.abs(D - flat)) < 1e-11
    assert np.array_equal(K.interval_D(0.0, t, eps), flat)


@pytest.mark.parametrize("t, T, expected", [(0.0, 0.7, 0.0), (0.9, 0.0, 0.0),
                                            (1.0, 1.0, 2 * np.sinh(1) * np.sinh(0.5))])
def test_center_separation_examples(t, T, expected):
    assert K.center_separation(1.0, 1.0, t, T) == pytest.approx(expected, abs=1e-15)


@settings(max_examples=100)
@given(st.floats(0.1, 3, **finite), st.floats(-3, 3, **finite), st.floats(-3, 3, **finite))
def test_center_separation_is_odd_and_matches_difference(a, t, T):
    z0 = 1 / a
    d = K.center_separation(a, z0, t, T)
    assert K.center_separation(a, z0, -t, T) == -d
    assert K.center_separation(a, z0, t, -T) == -d
    direct = K.classical_center(a, z0, T + t / 2) - K.classical_center(a, z0, T - t / 2)
    assert d == pytest.approx(direct, rel=1e-9, abs=1e-9)


def test_trajectory_defaults_and_validation():
    cfg = K.TrajectoryConfig(a=2.0)
    assert cfg.z0 == 0.5
    with pytest.raises(ValueError):
        K.TrajectoryConfig(a=-1.0)
    with pytest.raises(ValueError):
        K.TrajectoryConfig(a=1.0, xi=0.3)


def test_interval_bundle():
    iv = K.interval(1.0, 1.0, 0.5, 0.2, eps=0.01)
    assert iv.D == pytest.approx(complex(K.interval_D(1.0, 0.5, 0.01)))
    assert iv.Delta == pytest.approx(2 * np.sinh(0.2) * np.sinh(0.25))
