"""Uniformly accelerated worldline and the interval functions of the correlator.

Natural units, c = 1. ``tau`` is the proper time along the xi = 0 hyperbola,
``t`` and ``T`` are the relative and mean proper times of a pair
(tau, tau') = (T + t/2, T - t/2).
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TrajectoryConfig:
    a: float
    z0: float = None
    xi: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"acceleration must be positive, got {self.a}")
        if self.z0 is None:
            object.__setattr__(self, "z0", 1.0 / self.a)
        if not self.z0 > 0:
            raise ValueError(f"z0 must be positive, got {self.z0}")
        if self.xi != 0.0:
            raise ValueError("only the xi = 0 worldline is supported")


@dataclass(frozen=True)
class IntervalValue:
    D: complex
    Delta: float
    eps: float = 0.0


def rindler_to_minkowski(a, xi, tau):
    """Map Rindler (xi, tau) to Minkowski (x0, x3)."""
    if not np.all(np.asarray(a) > 0):
        raise ValueError("acceleration must be positive")
    scale = np.exp(a * xi) / a
    return scale * np.sinh(a * tau), scale * np.cosh(a * tau)


def classical_center(a, z0, tau):
    return z0 * np.cosh(a * tau)


def interval_D(a, t, eps=0.0):
    """Squared proper interval ``(4/a**2) sinh**2(a (t - i eps) / 2)``.

    The regulator shifts the proper-time difference into the lower half
    plane; ``a = 0`` returns the inertial limit ``(t - i eps)**2``.
    """
    z = np.asarray(t, dtype=complex) - 1j * eps
    if np.all(a == 0):
        return z * z
    h = 2.0 / a * np.sinh(0.5 * a * z)
    return h * h


def center_separation(a, z0, t, T):
    """Difference of packet centres ``z_c(tau) - z_c(tau')``, in product form."""
    return 2.0 * z0 * np.sinh(a * T) * np.sinh(0.5 * a * t)


def time_separation(a, t, T):
    """Minkowski time difference ``x0_c(tau) - x0_c(tau')`` on the xi = 0 path."""
    return 2.0 / a * np.cosh(a * T) * np.sinh(0.5 * a * t)


def interval(a, z0, t, T, eps=0.0):
    return IntervalValue(complex(interval_D(a, t, eps)), float(center_separation(a, z0, t, T)), eps)
