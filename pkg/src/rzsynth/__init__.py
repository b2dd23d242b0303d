"""Clifford+T approximation of z-rotations with certified T-count lower bounds."""

from .exact import Circuit, exact_synthesize
from .regions import Angle, Disk, EpsilonRegion
from .rings import DOmega, DRoot2, ZOmega, ZRoot2, format_domega, parse_domega
from .synthesis import (
    SynthesisOptions,
    SynthesisResult,
    operator_error,
    synthesize,
    synthesize_phase8,
    synthesize_up_to_phase,
)

__all__ = [
    "Angle",
    "Circuit",
    "DOmega",
    "DRoot2",
    "Disk",
    "EpsilonRegion",
    "SynthesisOptions",
    "SynthesisResult",
    "ZOmega",
    "ZRoot2",
    "exact_synthesize",
    "format_domega",
    "operator_error",
    "parse_domega",
    "synthesize",
    "synthesize_phase8",
    "synthesize_up_to_phase",
]
