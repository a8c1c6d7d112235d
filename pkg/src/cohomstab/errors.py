"""Exception hierarchy shared across the package."""


class CohomstabError(Exception):
    """Base class for all package errors."""


class UnsupportedRing(CohomstabError):
    pass


class DimensionMismatch(CohomstabError):
    pass


class NoSolution(CohomstabError):
    """Raised by exact solvers when the system has no solution over the ring."""


class NonHomogeneousInput(CohomstabError):
    pass


class NotAssociative(CohomstabError):
    pass


class NoIdentity(CohomstabError):
    pass


class NoInverse(CohomstabError):
    pass


class NotASubgroup(CohomstabError):
    pass


class InvalidSubgroup(CohomstabError):
    pass


class NotElementaryAbelian(CohomstabError):
    pass


class RingMismatch(CohomstabError):
    pass


class GroupMismatch(CohomstabError):
    pass


class InvalidLattice(CohomstabError):
    pass


class ZeroClass(CohomstabError):
    pass


class StrategyUnavailable(CohomstabError):
    pass


class CapExceeded(CohomstabError):
    pass


class RangeExceeded(CohomstabError):
    pass


class LiftFailed(CohomstabError):
    pass


class ResolutionMismatch(CohomstabError):
    pass


class CapTooSmall(CohomstabError):
    pass


class PresentationMissing(CohomstabError):
    pass


class ModelMismatch(CohomstabError):
    pass
