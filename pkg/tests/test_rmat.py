import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynr import liealg, rmat
from dynr.errors import DomainError, NotDiagonalizableError, NotEigenvectorError
from dynr.holofun import f_eval, f_jet
from dynr.matfun import spectral_decompose
from dynr.ybe import random_omegas

H, E, F = np.eye(3)


def test_domain_check_examples():
    assert rmat.domain_check(liealg.abelian(3), [5, 7, 1])
    a = liealg.sl2()
    assert not rmat.domain_check(a, np.pi * 1j * H)
    assert rmat.domain_check(a, E)
    assert rmat.domain_check(a, 0.9 * np.pi * 1j * H)
    with pytest.raises(DomainError):
        rmat.canonical_r(a, np.pi * 1j * H)


def test_canonical_r_examples():
    assert not np.any(rmat.canonical_r(liealg.abelian(3), [1, 2, 3]).R)
    a = liealg.sl2()
    r = rmat.canonical_r(a, E)
    assert np.max(np.abs(r.R - liealg.ad(a, E) / 12)) < 1e-12
    R = rmat.canonical_r(a, 0.3 * H).R
    f6 = f_eval(0.6)
    assert np.max(np.abs(R - np.diag([0, f6, -f6]))) < 1e-15


def test_rho_and_tensor(rng):
    a = liealg.oscillator()
    r = rmat.canonical_r(a, rng.uniform(-1, 1, 4))
    assert np.allclose(r.rho, a.B @ r.R)
    assert np.allclose(r.tensor, r.R @ a.D)
    # covariant and contravariant coefficient matrices are both antisymmetric
    assert np.max(np.abs(r.rho + r.rho.T)) < 1e-12
    assert np.max(np.abs(r.tensor + r.tensor.T)) < 1e-12
    assert r.antisymmetry() < 1e-12
    assert r.spectral.operator.shape == (4, 4)


def test_methods_agree(sweep_algebra):
    for w in random_omegas(sweep_algebra, 5, 3):
        rs = rmat.canonical_r(sweep_algebra, w, "spectral").R
        rc = rmat.canonical_r(sweep_algebra, w, "contour").R
        assert np.max(np.abs(rs - rc)) < 1e-6
        if rmat.spectral_radius_ad(sweep_algebra, w) < 1:
            rt = rmat.canonical_r(sweep_algebra, w, "taylor").R
            assert np.max(np.abs(rs - rt)) < 1e-10
    with pytest.raises(ValueError):
        rmat.canonical_r(sweep_algebra, np.zeros(sweep_algebra.dim), "pade")


def test_r_preserves_generalized_eigenspaces(sweep_algebra):
    for w in random_omegas(sweep_algebra, 5, 4):
        r = rmat.canonical_r(sweep_algebra, w)
        for c in spectral_decompose(liealg.ad(sweep_algebra, w)).clusters:
            assert np.max(np.abs(r.R @ c.projector - c.projector @ r.R)) < rmat.TOL_RESIDUAL


def test_directional_derivative_examples(rng):
    b = liealg.abelian(3)
    assert not np.any(np.abs(rmat.directional_derivative(b, [1, 2, 3], [0, 1, 0])) > 1e-15)
    a = liealg.sl2()
    for _ in range(5):
        w, S = rng.uniform(-1, 1, 3), rng.uniform(-1, 1, 3)
        an = rmat.directional_derivative(a, w, S, "frechet")
        fd = rmat.directional_derivative(a, w, S, "fd")
        assert np.max(np.abs(an - fd)) < 1e-6
    w = rng.uniform(-1, 1, 3)
    assert np.max(np.abs(rmat.directional_derivative(a, w, liealg.bracket(a, w, w)))) < 1e-15
    with pytest.raises(ValueError):
        rmat.directional_derivative(a, w, w, "adjoint")


def test_derivative_stack_matches_single(rng):
    a = liealg.oscillator()
    w = rng.uniform(-1, 1, 4)
    stack = rmat.derivative_stack(a, w)
    for m in range(4):
        single = rmat.directional_derivative(a, w, a.basis(m))
        assert np.max(np.abs(stack[m] - single)) < 1e-12


def test_gradient_pairing_examples(rng):
    b = liealg.abelian(2)
    assert not np.any(rmat.gradient_pairing(b, [1, 1], [1, 0], [0, 1]).value)
    a = liealg.sl2()
    x = 0.35
    g = rmat.gradient_pairing(a, x * H, E, F).value
    assert np.max(np.abs(g - (-f_jet(2 * x, 1)[1] * H))) < 1e-10
    w, X, Y = (rng.uniform(-1, 1, 3) for _ in range(3))
    g1 = rmat.gradient_pairing(a, w, 2 * X, Y).value
    g2 = rmat.gradient_pairing(a, w, X, Y).value
    assert np.max(np.abs(g1 - 2 * g2)) < 1e-12


def test_gradient_pairing_coordinate_oracle(rng):
    # independent assembly: sum_j T^j <X, dR/d omega_j Y> by central differences
    a = liealg.oscillator()
    w, X, Y = (rng.uniform(-1, 1, 4) for _ in range(3))
    out = np.zeros(4, dtype=complex)
    for j in range(4):
        Tj = a.basis(j)
        dR = rmat.directional_derivative(a, w, Tj, "fd")
        out += a.D[j] * liealg.pairing(a, X, dR @ Y)
    assert np.max(np.abs(out - rmat.gradient_pairing(a, w, X, Y).value)) < 1e-7


def test_lemma_oracles_examples():
    a = liealg.sl2()
    x = 0.4
    w = x * H
    l4 = rmat.lemma4_oracle(a, w, E, H)
    assert np.max(np.abs(l4 - (-(f_eval(2 * x) / (2 * x)) * 2 * E))) < 1e-14
    direct = rmat.directional_derivative(a, w, E) @ H
    assert np.max(np.abs(direct - l4)) < 1e-10
    # lam + mu = 0: gradient pairing equals -f'(mu) [X, Y]
    l3 = rmat.lemma3_oracle(a, w, E, F)
    assert np.max(np.abs(l3 - (-f_jet(-2 * x, 1)[1] * H))) < 1e-8
    # lam = 0: (nabla_X R) Y = f'(mu) [X, Y]
    l4 = rmat.lemma4_oracle(a, w, H, E)
    assert np.max(np.abs(l4 - f_jet(2 * x, 1)[1] * 2 * E)) < 1e-8


def test_lemma_oracles_match_direct(rng):
    for name in ("sl2", "direct_sum(sl2,sl2)"):
        a = liealg.catalog(name)
        for _ in range(3):
            w = rng.uniform(-1, 1, a.dim)
            lam, V = np.linalg.eig(liealg.ad(a, w))
            dR = rmat.derivative_stack(a, w)
            for i in range(a.dim):
                for j in range(a.dim):
                    X, Y = V[:, i], V[:, j]
                    g = rmat.gradient_pairing(a, w, X, Y, dR=dR).value
                    assert np.max(np.abs(g - rmat.lemma3_oracle(a, w, X, Y))) < 1e-8
                    nx = np.einsum("j,jab->ab", X, dR) @ Y
                    assert np.max(np.abs(nx - rmat.lemma4_oracle(a, w, X, Y))) < 1e-8
                    ny = np.einsum("j,jab->ab", Y, dR) @ X
                    assert np.max(np.abs(ny - rmat.lemma5_oracle(a, w, X, Y))) < 1e-8


def test_lemma_preconditions():
    a = liealg.sl2()
    with pytest.raises(NotDiagonalizableError):
        rmat.lemma3_oracle(a, E, E, E)
    with pytest.raises(NotEigenvectorError):
        rmat.lemma4_oracle(a, 0.3 * H, E + F, H)


def test_realness_examples(rng):
    a = liealg.sl2()
    for _ in range(10):
        assert rmat.realness_check(a, rng.uniform(-1, 1, 3)) < 1e-10
    assert rmat.realness_check(a, E - F) < 1e-10
    assert np.allclose(sorted(np.linalg.eigvals(liealg.ad(a, E - F)).imag), [-2, 0, 2])
    assert rmat.realness_check(liealg.abelian(3), [1, 2, 3]) == 0
    assert rmat.realness_check(liealg.sl2_real(), rng.uniform(-1, 1, 3), H) < 1e-10
    with pytest.raises(ValueError):
        rmat.realness_check(a, [1j, 0, 0])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["sl2", "oscillator", "sl2_real"]),
       st.lists(st.floats(-1.5, 1.5, allow_nan=False), min_size=4, max_size=4))
def test_antisymmetry_property(name, xs):
    a = liealg.catalog(name)
    w = np.array(xs[:a.dim])
    assert rmat.antisymmetry_residual(a, rmat.canonical_r(a, w).R) < rmat.TOL_RESIDUAL
