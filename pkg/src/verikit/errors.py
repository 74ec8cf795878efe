"""Exception types shared across the package."""


class VerikitError(Exception):
    """Base class for all package errors."""


class ResourceBudgetExceeded(VerikitError):
    """A deterministic construction or search ran past its configured budget.

    ``partial`` carries whatever was computed before the budget ran out.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NotTransitive(VerikitError):
    pass


class MembershipFailure(VerikitError):
    pass


class NotNormal(VerikitError):
    pass


class DimensionMismatch(VerikitError):
    pass


class HypothesisViolated(VerikitError):
    pass


class InvalidFrame(VerikitError):
    pass


class NotInKernel(VerikitError):
    pass


class OddIndexSum(VerikitError):
    pass


class IndexOutOfRange(VerikitError):
    pass


class InvalidTuple(VerikitError):
    pass


class DegreeOverflow(VerikitError):
    pass


class ContextDegreeExceeded(VerikitError):
    pass


class NotBranchPoint(VerikitError):
    pass


class DataFileMissing(VerikitError):
    pass


class OutOfScope(VerikitError):
    pass
