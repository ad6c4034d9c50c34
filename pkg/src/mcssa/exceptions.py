"""Exception hierarchy for mcssa."""


class MCSSAError(Exception):
    """Base class for all errors raised by mcssa."""


class ParameterError(MCSSAError, ValueError):
    """A parameter lies outside its admissible domain."""


class DataError(MCSSAError, ValueError):
    """Input data are malformed (non-finite values, wrong shape, unparsable text)."""


class EstimationError(MCSSAError):
    """Noise parameters cannot be estimated from the given series."""


class ComputationError(MCSSAError):
    """A numerical routine failed."""


class RangeError(ParameterError):
    """No projection vectors fall inside the requested frequency range."""


class DegenerateSurrogateError(MCSSAError):
    """A surrogate row has zero spread and cannot be standardized."""


class SampleSizeError(ParameterError):
    """Too few surrogates to resolve the requested quantile level."""


class SearchFailure(MCSSAError):
    """The significance-level search could not reach its target.

    The levels tried so far are kept in ``trace`` as ``(level, estimate)`` pairs.
    """

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
