"""The canonical function ``f(z) = coth(z/2)/2 - 1/z`` and its jets.

``f`` is odd, holomorphic away from ``2*pi*i*k`` (``k != 0``) and has the
Bernoulli expansion ``f(z) = sum_{n>=1} B_{2n} z^(2n-1) / (2n)!``, convergent
for ``|z| < 2*pi``.  Inside ``SERIES_RADIUS`` values and derivatives come from
that series; outside, from truncated Taylor arithmetic on ``coth`` and ``1/z``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from .errors import DomainError, PoleError
from .jets import BiSeries, derivatives_to_taylor, series_div, taylor_to_derivatives

SERIES_RADIUS = 1.0
SERIES_TERMS = 24
# derivatives from the closed form cancel badly near 0 (order 9 loses ~7 digits
# at |z| = 1), so jets use the series on a wider disk than values do
JET_SERIES_RADIUS = 1.75
DELTA_POLE = 1e-6
TWO_PI = 2.0 * math.pi

__all__ = [
    "SERIES_RADIUS", "SERIES_TERMS", "JET_SERIES_RADIUS", "DELTA_POLE", "Jet", "BiJet",
    "bernoulli_numbers", "taylor_coefficients", "f_eval", "f_jet",
    "addition_residual", "addition_coefficient", "quot_sum", "quot_shift", "ode_series_solve",
    "bijet_eval", "BIJET_EXPRESSIONS", "pole_distance", "HoloFunction", "CANONICAL", "LINEAR",
]


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple:
    """Exact ``B_0 .. B_n`` by the Akiyama-Tanigawa algorithm (``B_1 = +1/2``)."""
    out = []
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def taylor_coefficients(nterms: int = SERIES_TERMS) -> tuple:
    """Exact Taylor coefficients ``c_0 .. c_{2*nterms-1}`` of ``f`` at 0."""
    B = bernoulli_numbers(2 * nterms)
    c = [Fraction(0)] * (2 * nterms)
    for n in range(1, nterms + 1):
        c[2 * n - 1] = B[2 * n] / factorial(2 * n)
    return tuple(c)


@lru_cache(maxsize=None)
def _float_coeffs(nterms: int) -> np.ndarray:
    return np.array([float(c) for c in taylor_coefficients(nterms)])


def pole_distance(z: complex) -> float:
    """Distance from ``z`` to the nearest pole ``2*pi*i*k``, ``k != 0``."""
    z = complex(z)
    k = round(z.imag / TWO_PI)
    ks = {k} if k != 0 else {1, -1}
    return min(abs(z - 2j * math.pi * kk) for kk in ks)


def _check_pole(z: complex, delta: float):
    if pole_distance(z) <= delta:
        raise PoleError(f"{z} lies within {delta:g} of a pole of f")


def _f_series(z: complex, nterms: int = SERIES_TERMS) -> complex:
    c = _float_coeffs(nterms)
    z2 = z * z
    acc = 0.0
    for k in range(len(c) - 1, 0, -2):
        acc = acc * z2 + c[k]
    return acc * z


def _f_direct(z: complex) -> complex:
    return 0.5 / cmath.tanh(0.5 * z) - 1.0 / z


def f_eval(z: complex, delta: float = DELTA_POLE) -> complex:
    """``coth(z/2)/2 - 1/z`` with the removable singularity at 0 filled in."""
    z = complex(z)
    _check_pole(z, delta)
    if abs(z) < SERIES_RADIUS:
        return _f_series(z)
    return _f_direct(z)


@dataclass(frozen=True)
class Jet:
    """Value and derivatives ``f(z), f'(z), ..., f^(m)(z)``."""

    point: complex
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return len(self.coeffs)

    @property
    def taylor(self) -> np.ndarray:
        return derivatives_to_taylor(self.coeffs)


def _taylor_series_branch(z: complex, m: int, nterms: int) -> np.ndarray:
    """Taylor coefficients at ``z`` re-expanded from the series at 0."""
    c = _float_coeffs(nterms)
    N = len(c)
    out = np.zeros(m + 1, dtype=complex)
    # powers z^p for p < N
    zp = np.ones(N, dtype=complex)
    for p in range(1, N):
        zp[p] = zp[p - 1] * z
    for k in range(m + 1):
        out[k] = sum(c[n] * comb(n, k) * zp[n - k] for n in range(max(k, 1), N))
    return out


def _taylor_direct_branch(z: complex, m: int) -> np.ndarray:
    """Taylor coefficients at ``z`` from ``coth((z+h)/2)/2 - 1/(z+h)``."""
    t = cmath.tanh(0.5 * z)
    # cosh((z+h)/2) and sinh((z+h)/2), both divided by cosh(z/2)
    ch = np.array([(1.0 if k % 2 == 0 else t) / (2.0 ** k * factorial(k)) for k in range(m + 1)],
                  dtype=complex)
    sh = np.array([(t if k % 2 == 0 else 1.0) / (2.0 ** k * factorial(k)) for k in range(m + 1)],
                  dtype=complex)
    coth = series_div(ch, sh)
    inv = np.array([(-1) ** k / z ** (k + 1) for k in range(m + 1)], dtype=complex)
    return 0.5 * coth - inv


def f_jet(z: complex, m: int, delta: float = DELTA_POLE, nterms: int = SERIES_TERMS) -> Jet:
    """Derivatives of ``f`` at ``z`` through order ``m``."""
    if m < 0:
        raise ValueError("jet order must be non-negative")
    z = complex(z)
    _check_pole(z, delta)
    if abs(z) < JET_SERIES_RADIUS:
        taylor = _taylor_series_branch(z, m, nterms)
    else:
        taylor = _taylor_direct_branch(z, m)
    return Jet(z, tuple(complex(v) for v in taylor_to_derivatives(taylor)))


def _near_zero(value, delta, what):
    if abs(value) <= delta:
        raise DomainError(f"{what} = {value} is within {delta:g} of zero")


def addition_residual(x: complex, y: complex, f=f_eval, delta: float = DELTA_POLE) -> complex:
    """Left-hand side of the addition formula; zero for the canonical ``f``."""
    x, y = complex(x), complex(y)
    _near_zero(x, delta, "x")
    _near_zero(y, delta, "y")
    _near_zero(x + y, delta, "x + y")
    fx, fy, fs = f(x), f(y), f(x + y)
    # grouped so that swapping x and y gives a bitwise-identical result
    return (0.25 + fx * fy - fs * (fx + fy)
            - ((fs - fy) / x + (fs - fx) / y) - (fx + fy) / (x + y))


_SMALL_DENOM = 1e-5


def quot_sum(lam: complex, mu: complex) -> complex:
    """``(f(lam) + f(mu)) / (lam + mu)``, continuous across ``lam + mu = 0``."""
    s = complex(lam) + complex(mu)
    if abs(s) < _SMALL_DENOM:
        # f(lam) = -f(mu - s): difference quotient expanded to third order
        j = f_jet(mu, 3)
        return j[1] - s * j[2] / 2 + s * s * j[3] / 6
    return (f_eval(lam) + f_eval(mu)) / s


def quot_shift(lam: complex, mu: complex) -> complex:
    """``(f(lam + mu) - f(mu)) / lam``, continuous across ``lam = 0``."""
    lam = complex(lam)
    if abs(lam) < _SMALL_DENOM:
        j = f_jet(mu, 3)
        return j[1] + lam * j[2] / 2 + lam * lam * j[3] / 6
    return (f_eval(lam + mu) - f_eval(mu)) / lam


def addition_coefficient(lam: complex, mu: complex) -> complex:
    """The addition-formula expression with removable denominators filled by limits.

    This is the scalar multiplying ``[X, Y]`` once all seven terms of the
    operator equation are reduced on eigenvectors ``X``, ``Y`` with eigenvalues
    ``lam``, ``mu``.
    """
    lam, mu = complex(lam), complex(mu)
    fl, fm, fs = f_eval(lam), f_eval(mu), f_eval(lam + mu)
    return (0.25 + fl * fm - fs * (fl + fm)
            - quot_sum(lam, mu) - quot_shift(mu, lam) - quot_shift(lam, mu))


def ode_series_solve(order: int, odd_only: bool = False) -> list:
    """Solve ``f' + 2 f / x + f^2 = 1/4``, ``f(0) = 0``, as an exact power series.

    Returns ``[a_1, ..., a_order]`` for ``f = sum a_n x^n``.  The coefficient of
    ``x^(n-1)`` gives ``(n + 2) a_n = [n == 1]/4 - sum_{i+j=n-1} a_i a_j``.  With
    ``odd_only`` the even coefficients are pinned to zero instead of solved for.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    a = [Fraction(0)] * (order + 1)
    for n in range(1, order + 1):
        if odd_only and n % 2 == 0:
            continue
        rhs = Fraction(1, 4) if n == 1 else Fraction(0)
        rhs -= sum((a[i] * a[n - 1 - i] for i in range(1, n - 1)), Fraction(0))
        a[n] = rhs / (n + 2)
    return a[1:]


# ---------------------------------------------------------------- bivariate jets

@dataclass(frozen=True)
class BiJet:
    """Mixed partials ``coeffs[a, b] = d^(a+b) g / dx^a dy^b`` at ``point``."""

    point: tuple
    coeffs: np.ndarray

    @property
    def orders(self):
        K, L = self.coeffs.shape
        return K - 1, L - 1


BIJET_EXPRESSIONS = (
    "quarter",
    "f(x)f(y)",
    "f(x+y)f(x)",
    "f(x+y)f(y)",
    "(f(x)+f(y))/(x+y)",
    "(f(x+y)-f(y))/x",
    "(f(x+y)-f(x))/y",
)

_LIMIT_ZERO = 1e-14


def bijet_eval(expr: str, x: complex, y: complex, k: int, l: int,
               delta: float = DELTA_POLE) -> BiJet:
    """Mixed partials through ``(k, l)`` of one addition-formula expression.

    The quotient expressions are evaluated on their excluded set (``x + y = 0``,
    ``x = 0`` or ``y = 0``) through the removable-singularity expansion; points
    closer than ``delta`` to that set but not on it raise :class:`DomainError`.
    """
    if expr not in BIJET_EXPRESSIONS:
        raise ValueError(f"unknown expression {expr!r}")
    x, y = complex(x), complex(y)
    P = k + l + 1
    K = L = P

    def fx():
        return BiSeries.in_x(f_jet(x, K, delta).taylor, K, L)

    def fy():
        return BiSeries.in_y(f_jet(y, L, delta).taylor, K, L)

    def fs():
        return BiSeries.in_sum(f_jet(x + y, K + L, delta).taylor, K, L)

    if expr == "quarter":
        s = BiSeries.constant(0.25, K, L)
    elif expr == "f(x)f(y)":
        s = fx() * fy()
    elif expr == "f(x+y)f(x)":
        s = fs() * fx()
    elif expr == "f(x+y)f(y)":
        s = fs() * fy()
    elif expr == "(f(x)+f(y))/(x+y)":
        s = _quotient(fx() + fy(), x + y, BiSeries.linear(x, y, 1, 1, K, L), "sum", delta)
    elif expr == "(f(x+y)-f(y))/x":
        s = _quotient(fs() - fy(), x, BiSeries.linear(x, y, 1, 0, K, L), "x", delta)
    else:
        s = _quotient(fs() - fx(), y, BiSeries.linear(x, y, 0, 1, K, L), "y", delta)
    return BiJet((x, y), s.truncate(k, l).partials())


def _quotient(num: BiSeries, den_value, den: BiSeries, kind: str, delta: float) -> BiSeries:
    if abs(den_value) > max(_LIMIT_ZERO, delta):
        return num / den
    if abs(den_value) > _LIMIT_ZERO:
        raise DomainError(f"denominator {den_value} within {delta:g} of zero")
    if abs(num.c[0, 0]) > 1e-10:
        raise DomainError("numerator does not vanish on the excluded set")
    if kind == "x":
        return num.exact_div_x()
    if kind == "y":
        return num.exact_div_y()
    return num.exact_div_sum()


# ---------------------------------------------------------------- function objects

@dataclass(frozen=True)
class HoloFunction:
    """A scalar holomorphic function packaged for the matrix back-ends.

    ``value(z)`` evaluates, ``jets(z, m)`` returns ``[g(z), ..., g^(m)(z)]`` and
    ``series`` holds Taylor coefficients at 0 (``None`` if unavailable).
    """

    name: str
    value: object
    jets: object
    series: tuple | None = None

    def __call__(self, z):
        return self.value(z)

    def scaled(self, c: float) -> "HoloFunction":
        return HoloFunction(
            f"{c:g}*{self.name}",
            lambda z: c * self.value(z),
            lambda z, m: tuple(c * v for v in self.jets(z, m)),
            None if self.series is None else tuple(c * v for v in self.series),
        )


CANONICAL = HoloFunction(
    "f", f_eval, lambda z, m: f_jet(z, m).coeffs, taylor_coefficients(SERIES_TERMS)
)

# first Bernoulli term only: odd and entire, but violates the addition formula
LINEAR = HoloFunction(
    "z/12",
    lambda z: complex(z) / 12,
    lambda z, m: tuple([complex(z) / 12, 1 / 12] + [0.0] * (m - 1))[: m + 1],
    (Fraction(0), Fraction(1, 12)),
)
