"""Fast Leja points on intervals, unions of intervals and plane curves, with
potential-theoretic and interpolation diagnostics."""

from fastleja.core import generate, init_state, step, true_leja
from fastleja.domain import Interval, IntervalUnion, ParamCurve, parse_domain

__all__ = ["generate", "init_state", "step", "true_leja", "Interval", "IntervalUnion",
           "ParamCurve", "parse_domain"]
__version__ = "0.1.0"
