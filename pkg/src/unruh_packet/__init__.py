"""Response of an extended, quantum-mechanically evolving accelerated detector.

Probabilities are reported per unit squared monopole matrix element
``|<E|Q(0)|0>|^2``; multiply by it for absolute numbers.
"""

__version__ = "0.1.0"

from .errors import AccuracyError, SingularInputError
from .kinematics import TrajectoryConfig, interval, interval_D
from .wavepacket import PacketConfig, evolve_density
from .correlator import correlator_full_oracle, correlator_reduced
from .residues import inner_t_integral, u_pm
from .response import (
    DetectorConfig,
    ResponseResult,
    limit_sweep_classical_first,
    limit_sweep_point_first,
    transition_probability,
    unruh_rate_closed_form,
)

__all__ = [
    "AccuracyError", "SingularInputError", "TrajectoryConfig", "interval", "interval_D",
    "PacketConfig", "evolve_density", "correlator_full_oracle", "correlator_reduced",
    "inner_t_integral", "u_pm", "DetectorConfig", "ResponseResult",
    "limit_sweep_classical_first", "limit_sweep_point_first", "transition_probability",
    "unruh_rate_closed_form",
]
