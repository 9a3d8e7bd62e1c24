"""Exception types shared across the package."""


class NmlRegretError(Exception):
    """Base class for all package errors."""


class BadParameter(NmlRegretError):
    """A constructor argument is outside its allowed range."""


class BadLocation(NmlRegretError):
    """An atom location falls outside the support of the base measure."""


class MeanDiverges(NmlRegretError):
    """The first (or second) moment integral of a tilted member is infinite."""


class OutOfMeanRange(NmlRegretError):
    """Requested mean value lies outside the closure of the mean range."""


class NoInteriorSolution(NmlRegretError):
    """Requested mean value sits on a boundary that no parameter attains."""


class TruncationOutsideDomain(NmlRegretError):
    """Truncation point does not lie inside the canonical domain."""


class BadBracket(NmlRegretError):
    """Root-finding bracket does not enclose a sign change."""


class TooFewSamples(NmlRegretError):
    """Limit extrapolation needs more samples than were supplied."""


class NonFiniteIntegrand(NmlRegretError):
    """Integrand returned NaN (or overflowed) strictly inside the interval."""


class IntegralInconclusive(NmlRegretError):
    """A quadrature verdict was Inconclusive where a number was required."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class ConvolutionUnavailable(NmlRegretError):
    """No n-fold convolution rule is registered for this family."""


class HypothesisNotMet(NmlRegretError):
    """Preconditions of a boundary test are violated for this family."""


class SupportMismatch(NmlRegretError):
    """Candidate dominating distribution is not supported where the family is."""


class NoConvergence(NmlRegretError):
    """Iterative optimisation hit its iteration cap before reaching tolerance."""
