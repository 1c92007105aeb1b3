from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynr import liealg
from dynr.errors import DimensionError, ParseError, SingularFormError

CATALOG = ["abelian(3)", "sl2", "sl2_real", "oscillator", "direct_sum(sl2,sl2)"]


def vec(a, **kw):
    v = np.zeros(a.dim, dtype=complex)
    for k, x in kw.items():
        v[a.index(k.replace("p", "+").replace("m", "-") if k in ("Ap", "Am") else k)] = x
    return v


def test_sl2_bracket_relations():
    a = liealg.sl2()
    H, E, F = np.eye(3)
    assert np.allclose(liealg.bracket(a, H, E), 2 * E)
    assert np.allclose(liealg.bracket(a, H, F), -2 * F)
    assert np.allclose(liealg.bracket(a, E, F), H)


def test_oscillator_bracket():
    a = liealg.oscillator()
    Ap, Am, C = a.basis(a.index("A+")), a.basis(a.index("A-")), a.basis(a.index("C"))
    assert np.allclose(liealg.bracket(a, Ap, Am), C)


@pytest.mark.parametrize("name", CATALOG)
def test_bracket_self_vanishes(name, rng):
    a = liealg.catalog(name)
    x = rng.normal(size=a.dim) + 1j * rng.normal(size=a.dim)
    assert np.max(np.abs(liealg.bracket(a, x, x))) < 1e-14


def test_ad_examples():
    a = liealg.sl2()
    assert np.allclose(liealg.ad(a, [1, 0, 0]), np.diag([0, 2, -2]))
    adE = liealg.ad(a, [0, 1, 0])
    H, E, F = np.eye(3)
    assert np.allclose(adE @ H, -2 * E)
    assert np.allclose(adE @ F, H)
    assert np.allclose(adE @ E, 0)
    assert np.any(adE @ adE)
    assert not np.any(adE @ adE @ adE)
    b = liealg.abelian(4)
    assert not np.any(liealg.ad(b, [1, 2, 3, 4]))


def test_dual_basis_examples():
    assert liealg.dual_basis(liealg.abelian(3)).matrix.tolist() == np.eye(3).tolist()
    a = liealg.sl2()
    # trace-form oracle for the stored Killing form
    adm = [liealg.ad(a, v) for v in np.eye(3)]
    K = np.array([[np.trace(x @ y) for y in adm] for x in adm])
    assert np.allclose(K, np.array(a.form, dtype=float))
    D = liealg.dual_basis(a)
    assert D.exact is not None
    assert D.exact[0, 0] == Fraction(1, 8)
    assert D.exact[1, 2] == D.exact[2, 1] == Fraction(1, 4)
    assert D.exact[0, 1] == 0


@pytest.mark.parametrize("name", CATALOG)
def test_duality_residual_zero(name):
    a = liealg.catalog(name)
    D = liealg.dual_basis(a).exact
    assert np.all(a.form.dot(D) == np.eye(a.dim, dtype=int))


def test_transpose_examples(rng):
    a = liealg.sl2()
    assert np.allclose(liealg.transpose_wrt_form(a, np.eye(3)), np.eye(3))
    w = rng.normal(size=3)
    T = liealg.ad(a, w)
    assert np.max(np.abs(liealg.transpose_wrt_form(a, T) + T)) < 1e-12
    b = liealg.abelian(3)
    A = rng.normal(size=(3, 3))
    assert np.allclose(liealg.transpose_wrt_form(b, A), A.T)


@pytest.mark.parametrize("name", CATALOG)
def test_validate_catalog(name):
    rep = liealg.validate(liealg.catalog(name))
    assert rep.passed
    assert rep.antisymmetry == rep.jacobi == rep.invariance == rep.form_symmetry == 0


def test_validate_detects_perturbation():
    a = liealg.sl2()
    f = np.array(a.structure, dtype=complex)
    # [H, E] = 2E + eps H; Jacobi on (H, E, F) becomes 2 eps F
    f[0, 1, 0] += 1e-3
    f[1, 0, 0] -= 1e-3
    bad = liealg.LieAlgebra(f, np.array(a.form, dtype=complex), a.labels, "bad")
    rep = liealg.validate(bad)
    assert rep.jacobi >= 1e-4
    assert not rep.passed


def test_catalog_examples():
    a = liealg.catalog("abelian", 3)
    assert a.dim == 3 and not np.any(a.C) and np.all(a.B == np.eye(3))
    assert liealg.catalog("abelian(5)").dim == 5
    d = liealg.catalog("direct_sum(sl2,oscillator)")
    assert d.dim == 7 and liealg.validate(d).passed
    with pytest.raises(KeyError):
        liealg.catalog("so5")
    with pytest.raises(ValueError):
        liealg.catalog("sl2(3)")


def test_killing_form_oscillator_degenerate():
    # the oscillator is not semisimple: its Killing form is singular
    K = liealg.killing_form(liealg.oscillator().structure)
    assert np.linalg.matrix_rank(np.array(K, dtype=float)) < 4


def test_dimension_errors():
    a = liealg.sl2()
    with pytest.raises(DimensionError):
        liealg.bracket(a, [1, 0], [0, 1, 0])
    with pytest.raises(DimensionError):
        liealg.ad(a, [1, 0, 0, 0])


def test_singular_form_rejected():
    f = np.zeros((2, 2, 2), dtype=complex)
    with pytest.raises(SingularFormError):
        liealg.dual_basis(liealg.LieAlgebra(f, np.zeros((2, 2), dtype=complex)))


SL2_FILE = """
dim 3   # sl2 in (H,E,F)
form 1 1 8
form 2 3 4
bracket 1 2 2 2
bracket 1 3 3 -2
bracket 2 3 1 1
"""


def test_parse_matches_catalog():
    a = liealg.parse_algebra(SL2_FILE, "sl2file")
    b = liealg.sl2()
    assert a.exact
    assert np.all(a.structure == b.structure)
    assert np.all(a.form == b.form)
    assert liealg.validate(a).passed


def test_parse_complex_values():
    a = liealg.parse_algebra("dim 1\nform 1 1 2+1i\n")
    assert not a.exact
    assert a.B[0, 0] == 2 + 1j


def test_load_algebra(tmp_path):
    p = tmp_path / "alg.txt"
    p.write_text(SL2_FILE, encoding="utf-8")
    assert liealg.load_algebra(p).name == "alg"
    with pytest.raises(ParseError):
        liealg.load_algebra(tmp_path / "missing.txt")


@pytest.mark.parametrize("text", [
    "",
    "form 1 1 1",
    "dim 2\nbracket 1 2 1 1\nbracket 2 1 1 1\n",
    "dim 2\nbracket 1 1 2 1\n",
    "dim 2\nform 1 3 1\n",
    "dim 2\nform 1 1 x\n",
    "dim 2\nfrob 1 1 1\n",
    "dim 2\nbracket 1 2 1\n",
])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        liealg.parse_algebra(text)


def test_parse_accepts_consistent_duplicate():
    a = liealg.parse_algebra("dim 2\nform 1 1 1\nform 2 2 1\nbracket 1 2 1 0\nbracket 2 1 1 0\n")
    assert a.dim == 2


small = st.floats(-2, 2, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CATALOG), st.lists(small, min_size=21, max_size=21))
def test_form_invariance_property(name, xs):
    a = liealg.catalog(name)
    n = a.dim
    x, y, z = (np.array(xs[i * 7:i * 7 + n]) for i in range(3))
    lhs = liealg.pairing(a, liealg.bracket(a, x, y), z) + liealg.pairing(a, y, liealg.bracket(a, x, z))
    assert abs(lhs) < 1e-12 * max(1.0, np.max(np.abs(np.concatenate([x, y, z]))) ** 3 * 10)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CATALOG), st.lists(small, min_size=36, max_size=36))
def test_transpose_properties(name, xs):
    a = liealg.catalog(name)
    n = a.dim
    w = np.array(xs[:n])
    T = liealg.ad(a, w)
    assert np.max(np.abs(liealg.transpose_wrt_form(a, T) + T)) < 1e-12
    A = np.array(xs[:n * n]).reshape(n, n)
    At = liealg.transpose_wrt_form(a, A)
    assert np.max(np.abs(liealg.transpose_wrt_form(a, At) - A)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(CATALOG), st.lists(small, min_size=12, max_size=12))
def test_ad_is_homomorphism(name, xs):
    a = liealg.catalog(name)
    n = a.dim
    x, y = np.array(xs[:n]), np.array(xs[6:6 + n])
    lhs = liealg.ad(a, liealg.bracket(a, x, y))
    X, Y = liealg.ad(a, x), liealg.ad(a, y)
    assert np.max(np.abs(lhs - (X @ Y - Y @ X))) < 1e-12
