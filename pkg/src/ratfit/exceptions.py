class RatfitException(Exception):
    exit_code: int = 1


class ConfigurationError(RatfitException):
    exit_code = 2


class DomainError(RatfitException):
    exit_code = 3


class DegreeOverflowError(RatfitException):
    exit_code = 4


class RankDeficiencyError(RatfitException):
    """The sample points are not a set of linear independence for the requested degree."""

    exit_code = 5

    def __init__(self, column: int, ratio: float):
        super().__init__(f"Sample set is rank deficient: basis column {column} collapsed (relative norm {ratio:.3e})")
        self.column = column
        self.ratio = ratio


class UnderdeterminedFitError(RatfitException):
    exit_code = 6


class InfeasibleRelaxationError(RatfitException):
    exit_code = 7


class SingularHessianError(RatfitException):
    exit_code = 8


class NonConvergenceError(RatfitException):
    exit_code = 9


class UnknownFunctionError(RatfitException):
    exit_code = 10


class ModelFormatError(RatfitException):
    exit_code = 11


class LCurveError(RatfitException):
    exit_code = 12
