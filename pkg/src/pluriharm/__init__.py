"""Numerical toolkit for distortion, covering and quasiregularity bounds of pluriharmonic mappings."""

from .bounds import (BoundParams, RootResult, covering_radius, covering_radius_n1_closed_form,
                     distortion_lower, distortion_upper, growth_bound, jacobian_lower_bound,
                     qr_ball_radius, qr_constant_backward, qr_constant_forward, solve_kn,
                     starlike_lower_bound, starlike_r0)
from .extremal import ExtremalSpec, build_extremal
from .mapping import MapModel, PolynomialModel, ClosedFormModel, evaluate, identity_map
from .report import CheckEntry, VerificationReport
from .sampling import SampleConfig

__version__ = "0.1.0"

__all__ = [
    "BoundParams", "RootResult", "covering_radius", "covering_radius_n1_closed_form",
    "distortion_lower", "distortion_upper", "growth_bound", "jacobian_lower_bound",
    "qr_ball_radius", "qr_constant_backward", "qr_constant_forward", "solve_kn",
    "starlike_lower_bound", "starlike_r0", "ExtremalSpec", "build_extremal", "MapModel",
    "PolynomialModel", "ClosedFormModel", "evaluate", "identity_map", "CheckEntry",
    "VerificationReport", "SampleConfig",
]
