"""Equidistribution of point sequences on real elliptic curves."""

from .analytic import (
    PeriodData,
    classify_monotonicity,
    elliptic_log,
    real_period,
    series_coefficients,
    wp_eval,
)
from .ec_core import INFINITY, Curve, Point, add, classify_torsion, scalar_mul
from .equidist import Schedule, SequenceSpec, generate, mod1_suite, weyl_test
from .measures import ArcLengthMeasure, PushforwardMeasure, TwoComponentMeasure

__version__ = "0.1.0"

__all__ = [
    "ArcLengthMeasure",
    "Curve",
    "INFINITY",
    "PeriodData",
    "Point",
    "PushforwardMeasure",
    "Schedule",
    "SequenceSpec",
    "TwoComponentMeasure",
    "add",
    "classify_monotonicity",
    "classify_torsion",
    "elliptic_log",
    "generate",
    "mod1_suite",
    "real_period",
    "scalar_mul",
    "series_coefficients",
    "weyl_test",
    "wp_eval",
]
