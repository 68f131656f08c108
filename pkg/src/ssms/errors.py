"""Exception taxonomy shared by all modules.

Every exception carries a short machine-readable ``code`` so the command line
front end can emit a single diagnostic line and exit nonzero without pattern
matching on messages.
"""


class SsmsError(Exception):
    """Base class for all package errors."""

    code = "error"


class InvalidVertexError(SsmsError):
    code = "invalid-vertex"


class UnsupportedRealizationError(SsmsError):
    code = "unsupported-realization"


class ModelParameterError(SsmsError, ValueError):
    code = "invalid-parameter"


class MissingSpinError(SsmsError):
    code = "missing-spin"


class TooLargeError(SsmsError):
    code = "too-large"


class DegenerateSystemError(SsmsError):
    code = "degenerate-system"


class InfeasibleBoundaryError(SsmsError):
    code = "infeasible-boundary"


class NotSeparatingError(SsmsError):
    code = "not-separating"


class InfeasibleContextError(SsmsError):
    code = "infeasible-context"


class DimensionMismatchError(SsmsError):
    code = "dimension-mismatch"


class InvalidProbabilitiesError(SsmsError):
    code = "invalid-probabilities"


class BudgetExhaustedError(SsmsError):
    code = "budget-exhausted"


class InternalError(SsmsError):
    code = "internal-error"


class FiniteOnlyError(SsmsError):
    code = "finite-only"


class MissingRateError(SsmsError):
    code = "missing-rate"


class InsufficientSamplesError(SsmsError):
    code = "insufficient-samples"


class DegenerateSupportError(SsmsError):
    code = "degenerate-support"


class UnknownSuiteError(SsmsError):
    code = "unknown-suite"


class ConfigError(SsmsError):
    code = "config-error"
