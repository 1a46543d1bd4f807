"""Exception types raised across the package."""


class PpcBenchError(Exception):
    """Base class for all package-specific errors."""


class NotPositiveDefinite(PpcBenchError):
    """Matrix could not be factored even at the largest jitter."""


class DimensionMismatch(PpcBenchError):
    """Array shapes are inconsistent with the operation."""


class DegenerateInput(PpcBenchError):
    """Input has zero variance where a correlation is required."""


class DegenerateData(PpcBenchError):
    """Training data cannot support the requested fit."""


class ZeroVariance(PpcBenchError):
    """A marginal variance is too small for correlations to be defined."""


class DegenerateTest(PpcBenchError):
    """A test-point variance is too small for information gains."""


class SingularBatch(PpcBenchError):
    """A batch covariance stayed singular after clamping and jitter."""


class SingularMatrix(PpcBenchError):
    """A correlation matrix passed to a divergence is singular."""


class AdaptationFailed(PpcBenchError):
    """HMC step-size adaptation never entered the acceptance window."""


class PoolExhausted(PpcBenchError):
    """An active-learning query asked for more points than the pool holds."""


class TooSmall(PpcBenchError):
    """Dataset is too small for the split protocol."""


class ParseError(PpcBenchError):
    """A dataset file could not be parsed; carries the offending line."""

    def __init__(self, message, line_number=None):
        super().__init__(message)
        self.line_number = line_number


class NonFiniteValue(ParseError):
    """A dataset file contains a non-finite value."""


class IdentityViolation(PpcBenchError):
    """The exact KL decomposition identity failed; implementation bug."""


class ConfigError(PpcBenchError):
    """Configuration is invalid; carries every problem found."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))
