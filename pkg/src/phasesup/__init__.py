"""Superposition of quantum states with respect to phase states on the torus."""

from ._backend import backend_name
from .core import (
    DEFAULT_TOLERANCES,
    InvalidStateError,
    Tolerances,
    decoherence_channel,
    l2_coherence,
    make_phase_state,
    protocol_value,
    superposition_value,
    superposition_value_conjugated,
    tensor_state,
    theta_channel,
)
from .extremal import ExtremalResult, OptimizerConfig, extremize_mixed, s_max, s_min, smax_pure, smin_pure
from .moments import gradient, mean_superposition, moment_operators, second_moment

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCES",
    "ExtremalResult",
    "InvalidStateError",
    "OptimizerConfig",
    "Tolerances",
    "backend_name",
    "decoherence_channel",
    "extremize_mixed",
    "gradient",
    "l2_coherence",
    "make_phase_state",
    "mean_superposition",
    "moment_operators",
    "protocol_value",
    "s_max",
    "s_min",
    "second_moment",
    "smax_pure",
    "smin_pure",
    "superposition_value",
    "superposition_value_conjugated",
    "tensor_state",
    "theta_channel",
]
