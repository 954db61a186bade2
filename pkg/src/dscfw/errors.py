"""Exception hierarchy shared across the package."""


class DscfwError(Exception):
    """Base class for all package errors."""


class AsymmetricMatrix(DscfwError):
    pass


class NegativeEntry(DscfwError):
    pass


class NonzeroDiagonal(DscfwError):
    pass


class DimensionMismatch(DscfwError):
    pass


class TooSmall(DscfwError):
    pass


class EmptySupport(DscfwError):
    pass


class NotAscent(DscfwError):
    """Step requested although the halved gap is nonpositive."""


class ZeroDenominator(DscfwError):
    """Replicator update undefined: the quadratic form is zero."""


class BadInit(DscfwError):
    """Starting point invalid for the chosen solver (e.g. a vertex for
    replicator dynamics, where the denominator x'Ax is zero)."""


class EmptyCluster(DscfwError):
    pass


class NoClusters(DscfwError):
    pass


class LengthMismatch(DscfwError):
    pass


class EmptyOverlap(DscfwError):
    pass


class ZeroNormRow(DscfwError):
    pass


class HsvRangeError(DscfwError):
    pass


class TooManySeeds(DscfwError):
    pass


class PoolTooSmall(DscfwError):
    pass


class IdentityViolated(DscfwError):
    pass


class EmptyTrace(DscfwError):
    pass


class TooFewPoints(DscfwError):
    pass
