"""Canonical dynamical r-matrices on self-dual Lie algebras and their verification."""

from .errors import (
    ClusterSeparationError, DimensionError, DomainError, DynrError, NotDiagonalizableError,
    NotEigenvectorError, ParseError, PoleError, RadiusError, SingularFormError,
    SingularResolventError,
)
from .holofun import CANONICAL, f_eval, f_jet
from .liealg import LieAlgebra, catalog, load_algebra, parse_algebra, validate
from .rmat import canonical_r, domain_check
from .ybe import cdybe_residual, equivariance_residual, mcdybe_tensor_residual

__version__ = "0.1.0"

__all__ = [
    "ClusterSeparationError", "DimensionError", "DomainError", "DynrError",
    "NotDiagonalizableError", "NotEigenvectorError", "ParseError", "PoleError", "RadiusError",
    "SingularFormError", "SingularResolventError", "CANONICAL", "f_eval", "f_jet", "LieAlgebra",
    "catalog", "load_algebra", "parse_algebra", "validate", "canonical_r", "domain_check",
    "cdybe_residual", "equivariance_residual", "mcdybe_tensor_residual",
]
