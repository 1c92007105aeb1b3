"""Holomorphic functions of square matrices.

Three independent back-ends:

* :func:`apply_fun_spectral` sums ``f^(k)(lam)/k! (T - lam)^k E_lam`` over the
  clusters of a :class:`SpectralDecomposition`;
* :func:`apply_fun_contour` integrates ``f(xi) (xi - T)^-1`` over circles with
  the periodic trapezoidal rule;
* :func:`apply_fun_taylor` sums the power series of ``f`` at 0.

Spectral projectors are resolvent contour integrals, not products of
eigenvectors, so defective matrices are handled without Jordan chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import ClusterSeparationError, RadiusError, SingularResolventError
from .holofun import DELTA_POLE, SERIES_RADIUS, SERIES_TERMS, f_eval, f_jet, taylor_coefficients

TOL_SPECTRAL = 1e-9
TOL_CLUSTER = 1e-6
NODES = 64
MAX_NODES = 1024
QUAD_TOL = 1e-10
COND_MAX = 1e12
# cluster tolerances tried in turn when a circle meets an ill-conditioned resolvent
CLUSTER_LADDER = (TOL_CLUSTER, 1e-5, 1e-4, 1e-3, 1e-2)
MAX_SERIES_TERMS = 32

__all__ = [
    "TOL_SPECTRAL", "TOL_CLUSTER", "NODES", "MAX_NODES", "Cluster",
    "SpectralDecomposition", "Contour", "spectral_decompose", "cluster_eigenvalues",
    "cluster_contours", "stable_contours", "apply_fun_spectral", "apply_fun_contour", "apply_fun_taylor",
    "frechet", "frechet_fd", "spectral_radius", "canonical_jets", "canonical_f",
    "canonical_poles",
]


@dataclass(frozen=True)
class Contour:
    """Positively oriented circle discretised with ``nodes`` trapezoidal points."""

    center: complex
    radius: float
    nodes: int = NODES

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("contour radius must be positive")
        if self.nodes < 16:
            raise ValueError("at least 16 quadrature nodes are required")

    def points(self, nodes=None):
        """Nodes ``xi_j`` and weights ``w_j`` such that ``sum w_j g(xi_j) ~ (1/2 pi i) int g``."""
        n = nodes or self.nodes
        theta = 2 * np.pi * np.arange(n) / n
        u = np.exp(1j * theta)
        xi = self.center + self.radius * u
        # d xi = i r u d theta; the 1/(2 pi i) cancels the i
        w = self.radius * u / n
        return xi, w

    def with_nodes(self, nodes):
        return Contour(self.center, self.radius, nodes)


@dataclass(frozen=True)
class Cluster:
    eigenvalue: complex
    index: int
    projector: np.ndarray
    nilpotent: np.ndarray
    members: tuple
    contour: Contour


@dataclass(frozen=True)
class SpectralDecomposition:
    operator: np.ndarray
    clusters: tuple

    @property
    def eigenvalues(self):
        return [c.eigenvalue for c in self.clusters]

    @property
    def indices(self):
        return [c.index for c in self.clusters]

    def residuals(self) -> dict:
        """Completeness, idempotence/orthogonality, nilpotency and reconstruction."""
        n = self.operator.shape[0]
        I = np.eye(n)
        total = sum(c.projector for c in self.clusters)
        orth = 0.0
        for i, a in enumerate(self.clusters):
            for j, b in enumerate(self.clusters):
                target = a.projector if i == j else 0.0
                orth = max(orth, np.max(np.abs(a.projector @ b.projector - target)))
        nil = max(
            np.max(np.abs(np.linalg.matrix_power(c.nilpotent, c.index) @ c.projector))
            for c in self.clusters
        )
        rebuilt = sum(c.eigenvalue * c.projector + c.nilpotent for c in self.clusters)
        return {
            "completeness": float(np.max(np.abs(total - I))),
            "idempotence": float(orth),
            "nilpotency": float(nil),
            "reconstruction": float(np.max(np.abs(rebuilt - self.operator))),
        }


def _norm(A):
    return float(np.linalg.norm(A, 2)) if A.size else 0.0


def cluster_eigenvalues(eigs, tol):
    """Group eigenvalues closer than ``tol`` (single linkage)."""
    eigs = list(eigs)
    groups = []
    unused = list(range(len(eigs)))
    while unused:
        stack = [unused.pop(0)]
        group = []
        while stack:
            i = stack.pop()
            group.append(i)
            near = [j for j in unused if abs(eigs[j] - eigs[i]) <= tol]
            for j in near:
                unused.remove(j)
            stack.extend(near)
        groups.append([eigs[i] for i in sorted(group)])
    return groups


def cluster_contours(T, avoid=(), nodes=NODES, tol_cluster=TOL_CLUSTER):
    """Eigenvalue clusters of ``T`` and one separating circle per cluster.

    Each radius is half the distance from the cluster centre to the nearest
    other cluster (or to a point of ``avoid``), but at least ``10 * tol_cluster``.
    """
    T = np.asarray(T, dtype=complex)
    scale = 1.0 + _norm(T)
    tol = tol_cluster * scale
    eigs = np.linalg.eigvals(T)
    groups = cluster_eigenvalues(eigs, tol)
    centers = [complex(np.mean(g)) for g in groups]
    spreads = [max(abs(e - c) for e in g) for g, c in zip(groups, centers)]
    out = []
    for i, (g, c, s) in enumerate(zip(groups, centers, spreads)):
        others = [abs(c - d) - sd for j, (d, sd) in enumerate(zip(centers, spreads)) if j != i]
        others += [abs(c - complex(p)) for p in avoid]
        if others:
            radius = max(0.5 * min(others), 10 * tol)
        else:
            radius = max(1.0, 2 * s, 10 * tol)
        if radius - s < 4 * tol or (others and min(others) - radius < 4 * tol):
            raise ClusterSeparationError(
                f"cluster at {c:.6g} (spread {s:.2g}) cannot be isolated: radius {radius:.2g}"
            )
        out.append((g, Contour(c, radius, nodes)))
    return out


def _well_conditioned(T, contour):
    xi, _ = contour.points()
    n = T.shape[0]
    sv = np.linalg.svd(xi[:, None, None] * np.eye(n) - T[None, :, :], compute_uv=False)
    return bool(np.all(sv[:, -1] * COND_MAX >= sv[:, 0]))


def stable_contours(T, avoid=(), nodes=NODES):
    """Cluster circles, merging nearby eigenvalues until every circle is well conditioned.

    Nearly coincident eigenvalues of a non-normal matrix make the resolvent on
    a small separating circle numerically singular; a coarser clustering puts
    them inside one larger circle instead.
    """
    T = np.asarray(T, dtype=complex)
    err = None
    for tol in CLUSTER_LADDER:
        try:
            pairs = cluster_contours(T, avoid, nodes, tol)
        except ClusterSeparationError as exc:
            err = exc
            continue
        if all(_well_conditioned(T, c) for _, c in pairs):
            return pairs
        err = SingularResolventError("no clustering gives well-conditioned resolvents")
    raise err


def _resolvents(T, xi):
    """Stack of ``(xi_j - T)^-1`` for all nodes at once."""
    n = T.shape[0]
    M = xi[:, None, None] * np.eye(n) - T[None, :, :]
    sv = np.linalg.svd(M, compute_uv=False)
    if np.any(sv[:, -1] * COND_MAX < sv[:, 0]):
        bad = xi[np.argmax(sv[:, 0] / np.maximum(sv[:, -1], 1e-300))]
        raise SingularResolventError(f"resolvent is numerically singular at xi = {bad}")
    return np.linalg.inv(M)


def _integrate(T, contour, weight, directions=None):
    """Adaptive trapezoidal integral of ``weight(xi) R(xi)`` over ``contour``.

    With ``directions`` (a stack of matrices ``S_m``) returns the stack of
    integrals of ``weight(xi) R(xi) S_m R(xi)`` instead.  The node count doubles
    until two successive results differ by less than ``QUAD_TOL``.
    """
    nodes = contour.nodes
    prev = None
    while True:
        xi, w = contour.points(nodes)
        R = _resolvents(T, xi)
        wf = w * np.array([weight(x) for x in xi], dtype=complex)
        if directions is None:
            acc = np.einsum("q,qab->ab", wf, R)
        else:
            RS = np.einsum("qab,mbc->qmac", R, directions)
            acc = np.einsum("q,qmac,qcd->mad", wf, RS, R)
        if prev is not None and np.max(np.abs(acc - prev)) < QUAD_TOL:
            return acc
        if nodes >= MAX_NODES:
            return acc
        prev = acc
        nodes *= 2


def spectral_decompose(T, tol_cluster=TOL_CLUSTER, tol_spectral=TOL_SPECTRAL,
                       nodes=NODES) -> SpectralDecomposition:
    """Clustered eigenvalues, contour projectors, indices and nilpotent parts."""
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValueError("operator must be square")
    n = T.shape[0]
    I = np.eye(n)
    clusters = []
    pairs = (cluster_contours(T, nodes=nodes, tol_cluster=tol_cluster)
             if tol_cluster != TOL_CLUSTER else stable_contours(T, nodes=nodes))
    for group, contour in pairs:
        if len(group) == n:
            E = I.astype(complex)
        else:
            E = _integrate(T, contour, lambda x: 1.0)
        # trace(T E) / trace(E) averages the cluster and is insensitive to the
        # O(eps^(1/nu)) splitting of defective eigenvalues
        lam = complex(np.trace(T @ E) / np.trace(E))
        if abs(lam - contour.center) > contour.radius:
            lam = contour.center
        Nil = (T - lam * I) @ E
        normE = _norm(E)
        nu, P = 1, Nil.copy()
        # a merged cluster of distinct eigenvalues has no exact index; the
        # series in Nil then runs until its powers are negligible
        while nu < max(n, MAX_SERIES_TERMS) and _norm(P) > tol_spectral * normE:
            P = P @ Nil
            nu += 1
        clusters.append(Cluster(lam, nu, E, Nil, tuple(group), contour))
    return SpectralDecomposition(T, tuple(clusters))


def canonical_jets(z, m):
    return f_jet(z, m).coeffs


def apply_fun_spectral(sd: SpectralDecomposition, jets=canonical_jets) -> np.ndarray:
    """``sum_lam sum_{k<nu} f^(k)(lam)/k! Nil^k E`` with ``jets(z, m)`` giving derivatives."""
    n = sd.operator.shape[0]
    out = np.zeros((n, n), dtype=complex)
    for c in sd.clusters:
        d = jets(c.eigenvalue, c.index - 1)
        P = c.projector.copy()
        for k in range(c.index):
            out += d[k] / factorial(k) * P
            P = c.nilpotent @ P
    return out


def _default_contours(T, avoid, nodes):
    return [c for _, c in stable_contours(T, avoid=avoid, nodes=nodes)]


def apply_fun_contour(f, T, contours=None, avoid=(), nodes=NODES) -> np.ndarray:
    """``(1/2 pi i) int f(xi) (xi - T)^-1 d xi`` over one or more circles.

    With ``contours=None`` one circle per eigenvalue cluster is used, kept away
    from the points in ``avoid`` (the singularities of ``f``).
    """
    T = np.asarray(T, dtype=complex)
    if contours is None:
        contours = _default_contours(T, avoid, nodes)
    elif isinstance(contours, Contour):
        contours = [contours]
    return sum(_integrate(T, c, f) for c in contours)


def frechet(f, T, S, contours=None, avoid=(), nodes=NODES) -> np.ndarray:
    """Directional derivative ``d/dt f(T + t S)`` at ``t = 0`` by the resolvent sandwich.

    ``S`` may also be a stack of directions of shape ``(m, n, n)``; the
    resolvents are then shared and a stack of derivatives is returned.
    """
    T = np.asarray(T, dtype=complex)
    S = np.asarray(S, dtype=complex)
    single = S.ndim == 2
    stack = S[None] if single else S
    if stack.shape[1:] != T.shape:
        raise ValueError("direction must have the shape of the operator")
    if contours is None:
        contours = _default_contours(T, avoid, nodes)
    elif isinstance(contours, Contour):
        contours = [contours]
    out = sum(_integrate(T, c, f, directions=stack) for c in contours)
    return out[0] if single else out


def frechet_fd(fun_of_matrix, T, S, h=1e-5):
    """Central difference ``(F(T + h S) - F(T - h S)) / 2h`` for a matrix map ``F``."""
    T = np.asarray(T, dtype=complex)
    S = np.asarray(S, dtype=complex)
    return (fun_of_matrix(T + h * S) - fun_of_matrix(T - h * S)) / (2 * h)


def spectral_radius(T) -> float:
    T = np.asarray(T, dtype=complex)
    return float(np.max(np.abs(np.linalg.eigvals(T)))) if T.size else 0.0


def apply_fun_taylor(T, coeffs=None, radius=SERIES_RADIUS) -> np.ndarray:
    """``sum c_k T^k`` over the stored power series (canonical ``f`` by default)."""
    T = np.asarray(T, dtype=complex)
    if coeffs is None:
        coeffs = taylor_coefficients(SERIES_TERMS)
    rho = spectral_radius(T)
    if rho >= radius:
        raise RadiusError(f"spectral radius {rho:.6g} >= {radius}")
    n = T.shape[0]
    out = np.zeros((n, n), dtype=complex)
    P = np.eye(n, dtype=complex)
    for k, c in enumerate(coeffs):
        if k:
            P = P @ T
            if not P.any():
                break
        if c:
            out += complex(c) * P
    return out


def canonical_f(z):
    return f_eval(z, DELTA_POLE)


def canonical_poles(T):
    """Poles ``2 pi i k`` of the canonical ``f`` that a contour around ``T`` could meet."""
    kmax = int(spectral_radius(T) / (2 * np.pi)) + 2
    return tuple(2j * np.pi * k for k in range(-kmax, kmax + 1) if k)
