"""The canonical dynamical r-matrix ``R(omega) = f(ad omega)``.

Coordinate convention: the partial derivative with respect to the coordinate
``omega_j`` is the directional derivative along the dual basis element ``T^j``
(the form identifies the algebra with its dual).  With this choice the sum
``T_j (x) d/d omega_j`` equals ``T^j (x) nabla_{T_j}``, which is what the
gradient pairing and the tensor equation both use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import liealg
from .errors import DomainError, NotDiagonalizableError, NotEigenvectorError
from .holofun import (
    CANONICAL, DELTA_POLE, SERIES_RADIUS, HoloFunction, pole_distance, quot_shift, quot_sum,
)
from .matfun import (
    NODES, SpectralDecomposition, apply_fun_contour, apply_fun_spectral, apply_fun_taylor,
    canonical_poles, frechet, spectral_decompose, spectral_radius,
)

TOL_RESIDUAL = 1e-8
METHODS = ("spectral", "contour", "taylor")

__all__ = [
    "TOL_RESIDUAL", "METHODS", "RMatrixEval", "GradientPairing", "domain_check",
    "canonical_r", "r_operator", "fd_step", "directional_derivative", "derivative_stack",
    "gradient_pairing", "lemma3_oracle", "lemma4_oracle", "lemma5_oracle",
    "realness_check", "antisymmetry_residual", "eigen_check",
]


def _vec(a, v):
    v = np.asarray(v, dtype=complex)
    if v.shape != (a.dim,):
        raise liealg.DimensionError(f"expected {a.dim} coordinates, got shape {v.shape}")
    return v


def domain_check(a: liealg.LieAlgebra, omega, delta: float = DELTA_POLE) -> bool:
    """True iff no eigenvalue of ``ad omega`` is within ``delta`` of ``2 pi i k``, ``k != 0``."""
    T = liealg.ad(a, _vec(a, omega))
    return all(pole_distance(z) > delta for z in np.linalg.eigvals(T))


def _require_domain(a, omega, delta):
    if not domain_check(a, omega, delta):
        eigs = np.linalg.eigvals(liealg.ad(a, omega))
        raise DomainError(
            "ad omega has an eigenvalue near 2*pi*i*Z*: "
            + ", ".join(f"{z:.6g}" for z in eigs)
        )


def r_operator(T, method: str = "spectral", fun: HoloFunction = CANONICAL,
               nodes: int = NODES, sd: SpectralDecomposition | None = None) -> np.ndarray:
    """``fun(T)`` through one matrix-function back-end."""
    if method == "spectral":
        return apply_fun_spectral(sd if sd is not None else spectral_decompose(T, nodes=nodes),
                                  fun.jets)
    if method == "contour":
        return apply_fun_contour(fun.value, T, avoid=canonical_poles(T), nodes=nodes)
    if method == "taylor":
        if fun.series is None:
            raise ValueError(f"{fun.name} has no stored power series")
        return apply_fun_taylor(T, fun.series, SERIES_RADIUS)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


@dataclass
class RMatrixEval:
    """``R(omega)`` together with its covariant coefficients and spectral data."""

    algebra: liealg.LieAlgebra
    omega: np.ndarray
    R: np.ndarray
    method: str
    fun: HoloFunction = field(default=CANONICAL, repr=False)
    nodes: int = NODES
    _sd: SpectralDecomposition | None = field(default=None, repr=False)

    @property
    def rho(self) -> np.ndarray:
        """``rho[j, k] = <T_j, R T_k>``."""
        return self.algebra.B @ self.R

    @property
    def tensor(self) -> np.ndarray:
        """Contravariant components ``r^{ab}`` of ``r = rho_jk T^j (x) T^k``."""
        return self.R @ self.algebra.D

    @cached_property
    def spectral(self) -> SpectralDecomposition:
        if self._sd is None:
            self._sd = spectral_decompose(liealg.ad(self.algebra, self.omega), nodes=self.nodes)
        return self._sd

    def antisymmetry(self) -> float:
        return antisymmetry_residual(self.algebra, self.R)


def antisymmetry_residual(a, R) -> float:
    return float(np.max(np.abs(R + liealg.transpose_wrt_form(a, R))))


def canonical_r(a: liealg.LieAlgebra, omega, method: str = "spectral",
                fun: HoloFunction = CANONICAL, nodes: int = NODES,
                delta: float = DELTA_POLE) -> RMatrixEval:
    """Evaluate ``R(omega) = fun(ad omega)``; raises :class:`DomainError` off the domain."""
    omega = _vec(a, omega)
    _require_domain(a, omega, delta)
    T = liealg.ad(a, omega)
    sd = spectral_decompose(T, nodes=nodes) if method == "spectral" else None
    R = r_operator(T, method, fun, nodes, sd)
    return RMatrixEval(a, omega, R, method, fun, nodes, sd)


def fd_step(omega, S) -> float:
    return 1e-6 * (1 + np.linalg.norm(omega)) / (1 + np.linalg.norm(S))


def directional_derivative(a, omega, S, method: str = "frechet", fun: HoloFunction = CANONICAL,
                           r_method: str = "spectral", nodes: int = NODES,
                           delta: float = DELTA_POLE) -> np.ndarray:
    """``d/dt R(omega + t S)`` at 0, by the resolvent formula or a central difference."""
    omega, S = _vec(a, omega), _vec(a, S)
    _require_domain(a, omega, delta)
    if method == "frechet":
        T = liealg.ad(a, omega)
        return frechet(fun.value, T, liealg.ad(a, S), avoid=canonical_poles(T), nodes=nodes)
    if method == "fd":
        h = fd_step(omega, S)
        plus = canonical_r(a, omega + h * S, r_method, fun, nodes, delta).R
        minus = canonical_r(a, omega - h * S, r_method, fun, nodes, delta).R
        return (plus - minus) / (2 * h)
    raise ValueError(f"unknown derivative method {method!r}")


def derivative_stack(a, omega, fun: HoloFunction = CANONICAL, nodes: int = NODES) -> np.ndarray:
    """``out[m] = (nabla_{T_m} R)(omega)`` for every basis element, sharing resolvents."""
    T = liealg.ad(a, omega)
    return frechet(fun.value, T, a.ad_matrices, avoid=canonical_poles(T), nodes=nodes)


@dataclass(frozen=True)
class GradientPairing:
    """``<X, (nabla R)(omega) Y> = sum_j T^j <X, (nabla_{T_j} R)(omega) Y>``."""

    value: np.ndarray


def gradient_pairing(a, omega, X, Y, dR=None, fun: HoloFunction = CANONICAL,
                     delta: float = DELTA_POLE) -> GradientPairing:
    omega, X, Y = _vec(a, omega), _vec(a, X), _vec(a, Y)
    _require_domain(a, omega, delta)
    if dR is None:
        dR = derivative_stack(a, omega, fun)
    coeffs = np.einsum("a,ab,jbc,c->j", X, a.B, dR, Y)
    return GradientPairing(coeffs @ a.D)


# ---------------------------------------------------------------- closed forms

def eigen_check(a, omega, X, tol=TOL_RESIDUAL):
    """Eigenvalue of ``ad omega`` at ``X``, or :class:`NotEigenvectorError`."""
    T = liealg.ad(a, omega)
    X = _vec(a, X)
    i = int(np.argmax(np.abs(X)))
    lam = (T @ X)[i] / X[i]
    if np.max(np.abs(T @ X - lam * X)) > tol * max(1.0, np.max(np.abs(X))):
        raise NotEigenvectorError("vector is not an eigenvector of ad omega")
    return complex(lam)


def _require_diagonalizable(a, omega):
    sd = spectral_decompose(liealg.ad(a, omega))
    if any(nu > 1 for nu in sd.indices):
        raise NotDiagonalizableError("ad omega has a nontrivial Jordan block")
    return sd


def _closed_form(a, omega, X, Y, coeff):
    _require_diagonalizable(a, omega)
    lam, mu = eigen_check(a, omega, X), eigen_check(a, omega, Y)
    XY = liealg.bracket(a, X, Y)
    if np.max(np.abs(XY)) <= TOL_RESIDUAL * 1e-4:
        # [X, Y] = 0 whenever lam + mu is not an eigenvalue; skip possible poles
        return np.zeros(a.dim, dtype=complex), lam, mu
    return coeff(lam, mu) * XY, lam, mu


def lemma3_oracle(a, omega, X, Y) -> np.ndarray:
    """Closed form of the gradient pairing on eigenvectors ``X``, ``Y``."""
    val, _, _ = _closed_form(a, omega, X, Y, lambda lam, mu: -quot_sum(lam, mu))
    return val


def lemma4_oracle(a, omega, X, Y) -> np.ndarray:
    """Closed form of ``(nabla_X R)(omega) Y`` on eigenvectors ``X``, ``Y``."""
    val, _, _ = _closed_form(a, omega, X, Y, lambda lam, mu: quot_shift(lam, mu))
    return val


def lemma5_oracle(a, omega, X, Y) -> np.ndarray:
    """Closed form of ``(nabla_Y R)(omega) X`` on eigenvectors ``X``, ``Y``."""
    val, _, _ = _closed_form(a, omega, X, Y, lambda lam, mu: -quot_shift(mu, lam))
    return val


def realness_check(a, omega, X=None, method: str = "spectral",
                   delta: float = DELTA_POLE) -> float:
    """Largest imaginary part of ``R(omega) X`` for real ``omega`` (all basis ``X`` by default)."""
    if not a.is_real:
        raise ValueError("algebra has non-real structure constants or form")
    omega = _vec(a, omega)
    if np.any(omega.imag != 0):
        raise ValueError("omega must be real")
    R = canonical_r(a, omega.real, method, delta=delta).R
    if X is None:
        return float(np.max(np.abs(R.imag)))
    X = _vec(a, X)
    if np.any(X.imag != 0):
        raise ValueError("X must be real")
    return float(np.max(np.abs((R @ X).imag)))


def spectral_radius_ad(a, omega) -> float:
    return spectral_radius(liealg.ad(a, omega))
