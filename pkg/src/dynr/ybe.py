"""Residuals of the modified classical dynamical Yang-Baxter equation.

Two formulations are measured independently:

* operator form, for every basis pair ``(X, Y)``::

      1/4 [X,Y] + [RX,RY] - R([RX,Y] + [X,RY])
        + <X, (nabla R) Y> + (nabla_Y R) X - (nabla_X R) Y

* tensor form, on ``r = rho_jk T^j (x) T^k``::

      [r12,r13] + [r12,r23] + [r13,r23]
        + T^j_(1) nabla_j r23 - T^j_(2) nabla_j r13 + T^j_(3) nabla_j r12 - phi

Tensor conventions (contravariant components ``t^{abc}`` in the basis
``T_a (x) T_b (x) T_c``):

* ``[r12, r13]^{pbd} = r^{ab} r^{cd} f_ac^p``   (leg 1 of both factors bracketed)
* ``[r12, r23]^{apd} = r^{ab} r^{cd} f_bc^p``
* ``[r13, r23]^{acp} = r^{ab} r^{cd} f_bd^p``
* ``T^j_(1) nabla_j r23`` has components ``D^{ja} (nabla_{T_j} r)^{bc}``, and
  likewise for the other two legs;
* ``phi^{abc} = -1/4 f_jk^c D^{ja} D^{kb}``.

Reported tensors are lowered on every leg with the form.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import liealg
from .holofun import CANONICAL, DELTA_POLE, HoloFunction, addition_coefficient, f_eval
from .matfun import NODES
from .rmat import (
    TOL_RESIDUAL, _require_diagonalizable, _require_domain, canonical_r, derivative_stack, directional_derivative,
    domain_check, eigen_check, lemma3_oracle, lemma4_oracle, lemma5_oracle,
)

__all__ = [
    "ThreeTensor", "CdybeReport", "phi_tensor", "cdybe_terms", "cdybe_residual",
    "mcdybe_tensor", "mcdybe_tensor_residual", "equivariance_residual",
    "lemma_term_decomposition", "random_omegas",
]


@dataclass(frozen=True)
class ThreeTensor:
    """Covariant components ``t[j, k, l]`` of ``t_jkl T^j (x) T^k (x) T^l``."""

    algebra: liealg.LieAlgebra = field(repr=False)
    t: np.ndarray

    @classmethod
    def from_contravariant(cls, a, up):
        B = a.B
        return cls(a, np.einsum("abc,ap,bq,cr->pqr", up, B, B, B))

    @property
    def contravariant(self) -> np.ndarray:
        D = self.algebra.D
        return np.einsum("pqr,pa,qb,rc->abc", self.t, D, D, D)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.t))) if self.t.size else 0.0

    def antisymmetry_residual(self) -> float:
        up = self.contravariant
        res = 0.0
        for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)):
            res = max(res, float(np.max(np.abs(up + np.transpose(up, perm)))))
        return res

    def invariance_residual(self) -> float:
        """Max over ``T_m`` of the adjoint action summed over the three legs."""
        up = self.contravariant
        adm = self.algebra.ad_matrices
        act = (np.einsum("mxa,abc->mxbc", adm, up)
               + np.einsum("mxb,abc->maxc", adm, up)
               + np.einsum("mxc,abc->mabx", adm, up))
        return float(np.max(np.abs(act))) if act.size else 0.0


@dataclass
class CdybeReport:
    residuals: np.ndarray
    tol: float
    method: str
    fun: str = "f"
    seconds: float = 0.0

    @property
    def max(self) -> float:
        return float(np.max(self.residuals)) if self.residuals.size else 0.0

    @property
    def passed(self) -> bool:
        return self.max < self.tol


def phi_tensor(a: liealg.LieAlgebra) -> ThreeTensor:
    """``phi = -1/4 f_jk^l T^j (x) T^k (x) T_l`` with its last leg lowered."""
    return ThreeTensor(a, -0.25 * np.einsum("jkl,lm->jkm", a.C, a.B))


def _eval(a, omega, method, fun, nodes, delta):
    _require_domain(a, omega, delta)
    R = canonical_r(a, omega, method, fun, nodes, delta).R
    dR = derivative_stack(a, omega, fun, nodes)
    return R, dR


def cdybe_terms(a, R, dR) -> dict:
    """The seven operator-form terms for all basis pairs; each has shape ``(n, n, n)``.

    ``terms[name][j, k]`` is the coordinate vector for ``X = T_j``, ``Y = T_k``.
    """
    C = a.C
    # brackets of basis combinations: br(U, V)[j, k] = [U[:, j], V[:, k]]
    RX = R  # column j is R T_j
    t1 = 0.25 * C
    t2 = np.einsum("aj,bk,abl->jkl", RX, RX, C)
    inner = np.einsum("aj,akl->jkl", RX, C) + np.einsum("bk,jbl->jkl", RX, C)
    t34 = np.einsum("ml,jkl->jkm", R, inner)
    # <X, (nabla R) Y> = sum_m T^m <T_j, dR_m T_k>
    t5 = np.einsum("ja,mak,ml->jkl", a.B, dR, a.D)
    # (nabla_Y R) X with Y = T_k, X = T_j  ->  dR[k][:, j]
    t7 = np.einsum("klj->jkl", dR)
    # (nabla_X R) Y with X = T_j, Y = T_k  ->  dR[j][:, k]
    t6 = np.einsum("jlk->jkl", dR)
    return {"quarter": t1, "RX_RY": t2, "R_inner": t34, "gradient": t5,
            "nablaY_X": t7, "nablaX_Y": t6}


def cdybe_residual(a, omega, method: str = "spectral", fun: HoloFunction = CANONICAL,
                   tol: float = TOL_RESIDUAL, nodes: int = NODES,
                   delta: float = DELTA_POLE) -> CdybeReport:
    """Operator-form residual, max-norm per basis pair."""
    start = time.perf_counter()
    omega = np.asarray(omega, dtype=complex)
    R, dR = _eval(a, omega, method, fun, nodes, delta)
    t = cdybe_terms(a, R, dR)
    total = t["quarter"] + t["RX_RY"] - t["R_inner"] + t["gradient"] + t["nablaY_X"] - t["nablaX_Y"]
    res = np.max(np.abs(total), axis=2) if a.dim else np.zeros((0, 0))
    return CdybeReport(res, tol, method, fun.name, time.perf_counter() - start)


def mcdybe_tensor(a, omega, method: str = "spectral", fun: HoloFunction = CANONICAL,
                  nodes: int = NODES, delta: float = DELTA_POLE) -> ThreeTensor:
    """Left side minus right side of the tensor equation, as a covariant tensor."""
    omega = np.asarray(omega, dtype=complex)
    R, dR = _eval(a, omega, method, fun, nodes, delta)
    C, D = a.C, a.D
    r = R @ D
    dr = np.einsum("mab,bc->mac", dR, D)
    t = (np.einsum("ab,cd,acp->pbd", r, r, C)
         + np.einsum("ab,cd,bcp->apd", r, r, C)
         + np.einsum("ab,cd,bdp->acp", r, r, C))
    t += np.einsum("ja,jbc->abc", D, dr)
    t -= np.einsum("jb,jac->abc", D, dr)
    t += np.einsum("jc,jab->abc", D, dr)
    phi_up = -0.25 * np.einsum("jkc,ja,kb->abc", C, D, D)
    return ThreeTensor.from_contravariant(a, t - phi_up)


def mcdybe_tensor_residual(a, omega, method: str = "spectral", fun: HoloFunction = CANONICAL,
                           nodes: int = NODES, delta: float = DELTA_POLE) -> float:
    return mcdybe_tensor(a, omega, method, fun, nodes, delta).max_norm()


def equivariance_residual(a, omega, S, method: str = "spectral", fun: HoloFunction = CANONICAL,
                          nodes: int = NODES, delta: float = DELTA_POLE) -> float:
    """``|| (nabla_[S, omega] R)(omega) - [ad S, R(omega)] ||`` with the resolvent derivative."""
    omega = np.asarray(omega, dtype=complex)
    S = np.asarray(S, dtype=complex)
    R = canonical_r(a, omega, method, fun, nodes, delta).R
    lhs = directional_derivative(a, omega, liealg.bracket(a, S, omega), "frechet", fun,
                                 nodes=nodes, delta=delta)
    adS = liealg.ad(a, S)
    return float(np.max(np.abs(lhs - (adS @ R - R @ adS))))


def lemma_term_decomposition(a, omega, X, Y, tol: float = 1e-8) -> dict:
    """The seven operator-form terms on eigenvectors, directly and in closed form.

    Returns ``{"terms": {name: (direct, closed)}, "lam", "mu", "coefficient",
    "agree"}``, where ``coefficient`` is the scalar of the signed sum and
    ``agree`` says every pair matches within ``tol``.
    """
    omega = np.asarray(omega, dtype=complex)
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    _require_diagonalizable(a, omega)
    lam, mu = eigen_check(a, omega, X), eigen_check(a, omega, Y)
    R = canonical_r(a, omega).R
    dR = derivative_stack(a, omega)
    br = lambda u, v: liealg.bracket(a, u, v)  # noqa: E731
    XY = br(X, Y)
    RX, RY = R @ X, R @ Y
    grad = np.einsum("a,ab,jbc,c->j", X, a.B, dR, Y) @ a.D
    nabla_X = np.einsum("j,jab->ab", X, dR)
    nabla_Y = np.einsum("j,jab->ab", Y, dR)
    if np.max(np.abs(XY)) <= 1e-14:
        fl = fm = fs = 0.0
    else:
        fl, fm, fs = f_eval(lam), f_eval(mu), f_eval(lam + mu)
    terms = {
        "term1": (0.25 * XY, 0.25 * XY),
        "term2": (br(RX, RY), fl * fm * XY),
        "term3": (R @ br(RX, Y), fs * fl * XY),
        "term4": (R @ br(X, RY), fs * fm * XY),
        "term5": (grad, lemma3_oracle(a, omega, X, Y)),
        "term6": (nabla_X @ Y, lemma4_oracle(a, omega, X, Y)),
        "term7": (nabla_Y @ X, lemma5_oracle(a, omega, X, Y)),
    }
    agree = all(np.max(np.abs(d - c)) <= tol for d, c in terms.values())
    coeff = addition_coefficient(lam, mu) if np.max(np.abs(XY)) > 1e-14 else 0.0
    signed = {"term1": 1, "term2": 1, "term3": -1, "term4": -1, "term5": 1, "term6": -1, "term7": 1}
    total = sum(signed[k] * v[0] for k, v in terms.items())
    return {"terms": terms, "lam": lam, "mu": mu, "coefficient": coeff,
            "total": total, "agree": agree}


def random_omegas(a, count: int, seed: int, real: bool = True, delta: float = DELTA_POLE):
    """``count`` seeded draws with coordinates uniform in [-1, 1], redrawn off the domain."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        w = rng.uniform(-1, 1, a.dim)
        if not real:
            w = w + 1j * rng.uniform(-1, 1, a.dim)
        if domain_check(a, w, delta):
            out.append(np.asarray(w, dtype=complex))
    return out
