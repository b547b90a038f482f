"""Exception and warning types raised across the package.

The CLI maps each family onto an exit code: configuration problems exit
with 2, numerical-domain failures with 3 and cost-guard refusals with 4.
"""


class TileWignerError(Exception):
    """Base class for all package errors."""

    code = "ERROR"


class ConfigError(TileWignerError, ValueError):
    code = "CONFIG"


class CausalOverlapError(ConfigError):
    """Two tiles are not spacelike separated (or corridor <= 2*epsilon)."""

    code = "CAUSAL_OVERLAP"

    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = tuple(pairs)


class NumericalDomainError(TileWignerError, ArithmeticError):
    code = "NUMERICAL_DOMAIN"


class DegenerateModeError(NumericalDomainError):
    code = "DEGENERATE_MODE"


class InfraredDivergenceError(NumericalDomainError):
    code = "INFRARED_DIVERGENCE"


class NotGaussianError(NumericalDomainError):
    code = "NOT_GAUSSIAN"


class IllConditionedError(NumericalDomainError):
    code = "ILL_CONDITIONED"


class CutoffError(NumericalDomainError):
    code = "CUTOFF"


class OrderingDomainError(NumericalDomainError):
    code = "ORDERING_DOMAIN"


class NormalizationError(NumericalDomainError):
    code = "NORMALIZATION"


class CostGuardError(TileWignerError):
    code = "COST_GUARD"


class BandwidthWarning(RuntimeWarning):
    """The momentum grid truncates a non-negligible part of an integrand."""
