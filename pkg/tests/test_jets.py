import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynr.jets import BiSeries, series_div, series_mul, taylor_to_derivatives, derivatives_to_taylor

coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(coef, min_size=5, max_size=5), st.lists(coef, min_size=5, max_size=5))
def test_series_mul_matches_polynomial_product(a, b):
    full = np.convolve(a, b)[:5]
    assert np.allclose(series_mul(a, b), full)


@settings(max_examples=50, deadline=None)
@given(st.lists(coef, min_size=6, max_size=6), st.lists(coef, min_size=6, max_size=6))
def test_series_div_inverts_mul(a, b):
    b = list(b)
    b[0] = 1 + abs(b[0])
    assert np.allclose(series_mul(series_div(a, b), b), a, atol=1e-9)


def test_taylor_derivative_roundtrip():
    d = np.array([1, 2, 3, 4, 5], dtype=complex)
    assert np.allclose(taylor_to_derivatives(derivatives_to_taylor(d)), d)


def _rand(rng, K, L):
    return BiSeries(rng.normal(size=(K + 1, L + 1)) + 1j * rng.normal(size=(K + 1, L + 1)))


def test_bi_mul_div(rng):
    a, b = _rand(rng, 4, 3), _rand(rng, 4, 3)
    b.c[0, 0] = 3.0
    q = a / b
    assert np.allclose((q * b).c, a.c)
    assert np.allclose((a + 2).c[0, 0], a.c[0, 0] + 2)
    assert np.allclose((2 - a).c, (-(a - 2)).c)
    with pytest.raises(ZeroDivisionError):
        a / BiSeries.linear(0, 0, 1, 1, 4, 3)


def test_bi_mul_polynomial_oracle(rng):
    a, b = _rand(rng, 3, 3), _rand(rng, 3, 3)
    full = np.zeros((7, 7), dtype=complex)
    for i in range(4):
        for j in range(4):
            full[i:i + 4, j:j + 4] += a.c[i, j] * b.c
    assert np.allclose((a * b).c, full[:4, :4])


def test_exact_divisions(rng):
    K = L = 5
    q = _rand(rng, K, L)
    hx = BiSeries.linear(0, 0, 1, 0, K, L)
    hy = BiSeries.linear(0, 0, 0, 1, K, L)
    assert np.allclose((q * hx).exact_div_x().c, q.c[:-1, :])
    assert np.allclose((q * hy).exact_div_y().c, q.c[:, :-1])
    s = (q * (hx + hy)).exact_div_sum()
    for a in range(K):
        for b in range(L):
            if a + b < K:
                assert s.c[a, b] == pytest.approx(q.c[a, b])


def test_in_sum_lift():
    t = np.array([1, 2, 3, 4, 5], dtype=complex)
    s = BiSeries.in_sum(t, 2, 2)
    # (hx + hy)^2 coefficient 3 spreads as 3, 6, 3
    assert s.c[2, 0] == 3 and s.c[1, 1] == 6 and s.c[0, 2] == 3
    assert s.c[2, 2] == 5 * 6


def test_partials_and_truncate(rng):
    a = _rand(rng, 3, 3)
    p = a.truncate(2, 1).partials()
    assert p.shape == (3, 2)
    assert p[2, 1] == pytest.approx(a.c[2, 1] * 2)
    with pytest.raises(ValueError):
        a + _rand(rng, 2, 2)
