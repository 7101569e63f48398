class GhypError(Exception):
    """Base class for every error raised by the toolkit"""


class NumericsDomainError(GhypError, ValueError):
    """Argument outside the domain of a numerical kernel"""


class QuadratureError(GhypError):
    """Adaptive quadrature exhausted its subdivisions before meeting tolerance"""


class GraphFormatError(GhypError):
    """Malformed edge-list or partition input"""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyGraphError(GhypError):
    """Operation needs at least one edge"""


class CapacityError(GhypError):
    """Edge counts exceed the combinatorial capacity Xi of a dyad"""


class PartitionError(GhypError):
    """Partition does not match the vertices of the graph"""


class BracketingError(GhypError):
    """A root could not be bracketed (inconsistent Xi / m)"""


class NestingError(GhypError):
    """Null and alternative model kinds are not nested"""


class InfeasibleMomentsError(GhypError):
    """Sample moments cannot be matched by a Beta distribution on [0, M]"""


class DegenerateNullError(GhypError):
    """Null distribution has no spread or no usable upper bound"""


class SamplingError(GhypError):
    """The urn ran out of capacity before all edges were drawn"""


class ReplicateError(GhypError):
    """Failure inside one replicate of a batch"""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"replicate {index}: {cause}")


class UsageError(GhypError):
    """Invalid combination of options or an unknown name"""
