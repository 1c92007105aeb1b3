"""Exception hierarchy shared by all modules."""


class DynrError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(DynrError, ValueError):
    pass


class SingularFormError(DynrError):
    """The bilinear form is degenerate."""


class ParseError(DynrError, ValueError):
    pass


class DomainError(DynrError, ValueError):
    """A denominator vanishes, or omega lies outside the regular domain."""


class PoleError(DomainError):
    """Evaluation point too close to a pole of the canonical function."""


class RadiusError(DynrError, ValueError):
    """Spectral radius too large for the power-series back-end."""


class ClusterSeparationError(DynrError):
    pass


class SingularResolventError(DynrError):
    pass


class NotDiagonalizableError(DynrError):
    pass


class NotEigenvectorError(DynrError):
    pass
