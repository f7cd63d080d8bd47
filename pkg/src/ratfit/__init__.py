import logging

from .config import EnvSettings, PathSettings
from .exceptions import (
    ConfigurationError,
    DegreeOverflowError,
    DomainError,
    InfeasibleRelaxationError,
    LCurveError,
    ModelFormatError,
    NonConvergenceError,
    RankDeficiencyError,
    RatfitException,
    SingularHessianError,
    UnderdeterminedFitError,
    UnknownFunctionError,
)
from .linfit import fit_polynomial, fit_rational_onb, fit_rational_reduced, reduce_degrees
from .logger import setup_logger
from .metrics import pole_points, test_error
from .models import RationalModel, load_model, save_model
from .multiindex import MultiIndex, MultiIndexOrder, alpha, compare_order, generate_order
from .objects import Box, FitReport, PoleMetrics, SampleSet, SipConfig
from .orthobasis import OrthonormalBasis, build_basis, evaluate_basis, evaluate_series
from .sipfit import fit_rational_polefree, minimize_denominator, multistart_budget, solve_relaxation

__all__ = [
    "PathSettings",
    "EnvSettings",
    "logger",
    "Box",
    "SampleSet",
    "FitReport",
    "PoleMetrics",
    "SipConfig",
    "MultiIndex",
    "MultiIndexOrder",
    "alpha",
    "compare_order",
    "generate_order",
    "OrthonormalBasis",
    "build_basis",
    "evaluate_basis",
    "evaluate_series",
    "RationalModel",
    "save_model",
    "load_model",
    "fit_rational_onb",
    "reduce_degrees",
    "fit_rational_reduced",
    "fit_polynomial",
    "solve_relaxation",
    "minimize_denominator",
    "multistart_budget",
    "fit_rational_polefree",
    "test_error",
    "pole_points",
    # Exceptions
    "RatfitException",
    "ConfigurationError",
    "DomainError",
    "DegreeOverflowError",
    "RankDeficiencyError",
    "UnderdeterminedFitError",
    "InfeasibleRelaxationError",
    "SingularHessianError",
    "NonConvergenceError",
    "UnknownFunctionError",
    "ModelFormatError",
    "LCurveError",
]

logger = setup_logger(logging.INFO)
