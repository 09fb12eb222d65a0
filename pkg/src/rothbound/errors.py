"""Exception hierarchy shared by all rothbound modules."""


class RothboundError(Exception):
    """Base class for all library errors."""


class DomainError(RothboundError):
    """Argument outside the mathematical domain of the operation."""


class SizeLimit(RothboundError):
    """A combinatorial object exceeds the configured size bound."""


class PrecisionExhausted(RothboundError):
    """The refinement budget was exceeded before a decision was reached."""


class RamifiedUnsupported(RothboundError):
    """p-adic embedding requested at a prime with non-separable reduction."""


class HypothesisFailed(RothboundError):
    """A stated hypothesis of the inequality being checked does not hold."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


class SSViolated(HypothesisFailed):
    """The semi-stability condition required by the main evaluator fails."""


class DistanceZero(RothboundError):
    """A v-adic distance is exactly zero where positivity is required."""


class EqualPoints(RothboundError):
    """The two projective points coincide."""


class CoincidentPoints(DistanceZero):
    """Group element undefined: the two points coincide in C_v."""


class NotGenerating(RothboundError):
    """A coordinate does not generate the expected number field."""


class ZeroSection(RothboundError):
    """The section is identically zero."""


class ZeroForm(ZeroSection):
    """The binary form is identically zero."""


class ZeroSubspace(RothboundError):
    """The subspace is zero."""


class ProjectionClash(RothboundError):
    """Two points share a factor projection where distinctness is required."""


class DegenerateIntersection(RothboundError):
    """W1 and W2 intersect trivially; the inequality is not asserted."""


class DegreeMismatch(RothboundError):
    """Binary forms of unequal degree where equal degree is required."""


class InternalMismatch(RothboundError):
    """Two independent computations of the same quantity disagree (bug trap)."""


class NotRealQuadratic(RothboundError):
    """The polynomial does not define a real quadratic irrational > 0."""


class InputError(RothboundError):
    """Malformed configuration or input file."""
