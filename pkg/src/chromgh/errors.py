"""Exception types shared across the package."""


class ChromghError(Exception):
    """Base class for all chromgh errors."""


class MetricError(ChromghError):
    """A matrix failed metric-axiom validation."""


class AsymmetricMatrix(MetricError):
    pass


class NonzeroDiagonal(MetricError):
    pass


class ZeroOffDiagonal(MetricError):
    pass


class TriangleViolation(MetricError):
    """Carries the worst offending triple as (i, j, k): d[i,j] > d[i,k] + d[k,j]."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class EmptyRelation(ChromghError):
    pass


class MismatchedSpaces(ChromghError):
    pass


class EmptySubset(ChromghError):
    pass


class NotACorrespondence(ChromghError):
    pass


class IndexOutOfRange(ChromghError):
    pass


class UniverseMismatch(ChromghError):
    pass


class NotConstrained(ChromghError):
    """A map violates a color constraint.

    Attributes: direction ("forward"/"backward"), sigma (offending color set),
    witness (source index that maps outside the class).
    """

    def __init__(self, message, direction=None, sigma=None, witness=None):
        super().__init__(message)
        self.direction = direction
        self.sigma = sigma
        self.witness = witness


class EmptyColorClass(ChromghError):
    pass


class BudgetExceeded(ChromghError):
    """A search or enumeration hit its node/size budget.

    For GH searches `upper` is the best certified upper bound found so far and
    `lower` the best certified lower bound; exactness was NOT certified.
    """

    def __init__(self, message, upper=None, lower=None, nodes=None):
        super().__init__(message)
        self.upper = upper
        self.lower = lower
        self.nodes = nodes


class EmptySimplex(ChromghError):
    pass


class SizeBudget(ChromghError):
    pass


class NotASubcomplex(ChromghError):
    pass


class InsufficientDimension(ChromghError):
    pass


class DegreeMismatch(ChromghError):
    pass


class ParseError(ChromghError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class UnknownExample(ChromghError):
    pass


class BadParams(ChromghError):
    pass
