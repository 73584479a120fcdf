"""Numerical certification of curvature identities and Z-tensor symmetry
conditions on (epsilon)-para-Sasakian 3-manifolds."""

__version__ = "0.1.0"

from .errors import ConfigError, EvaluationError, ParseError
from .geometry import MetricField, Tolerances, evaluate_geometry
from .paracontact import builtin_model, synthetic_point_model, to_frame

__all__ = [
    "ConfigError",
    "EvaluationError",
    "ParseError",
    "MetricField",
    "Tolerances",
    "evaluate_geometry",
    "builtin_model",
    "synthetic_point_model",
    "to_frame",
]
