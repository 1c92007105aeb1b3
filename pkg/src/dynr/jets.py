"""Truncated Taylor arithmetic in one and two variables.

Series are stored as Taylor coefficients (``c[k] = g^(k)(z0) / k!``), never as
derivatives, so products are plain truncated convolutions.
"""

from __future__ import annotations

from math import comb, factorial

import numpy as np


def series_mul(a, b):
    """Truncated product of two univariate coefficient arrays of equal length."""
    n = len(a)
    return np.convolve(a, b)[:n]


def series_div(num, den):
    """Truncated quotient ``num / den``; requires ``den[0] != 0``."""
    num = np.asarray(num, dtype=complex)
    den = np.asarray(den, dtype=complex)
    if den[0] == 0:
        raise ZeroDivisionError("leading coefficient of the divisor vanishes")
    n = len(num)
    q = np.zeros(n, dtype=complex)
    for k in range(n):
        acc = num[k]
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * q[k - i]
        q[k] = acc / den[0]
    return q


def taylor_to_derivatives(c):
    return np.array([c[k] * factorial(k) for k in range(len(c))], dtype=complex)


def derivatives_to_taylor(d):
    return np.array([d[k] / factorial(k) for k in range(len(d))], dtype=complex)


class BiSeries:
    """Bivariate truncated Taylor series ``sum c[a, b] hx^a hy^b``.

    Truncation is rectangular: ``a <= K`` and ``b <= L``.  Rectangular truncation
    is closed under products and quotients, so no coefficient is ever polluted by
    a dropped term.
    """

    __slots__ = ("c",)

    def __init__(self, c):
        self.c = np.asarray(c, dtype=complex)

    @property
    def orders(self):
        K, L = self.c.shape
        return K - 1, L - 1

    @classmethod
    def constant(cls, value, K, L):
        c = np.zeros((K + 1, L + 1), dtype=complex)
        c[0, 0] = value
        return cls(c)

    @classmethod
    def in_x(cls, taylor, K, L):
        """Lift a univariate series in ``hx``."""
        c = np.zeros((K + 1, L + 1), dtype=complex)
        c[:, 0] = np.asarray(taylor)[: K + 1]
        return cls(c)

    @classmethod
    def in_y(cls, taylor, K, L):
        c = np.zeros((K + 1, L + 1), dtype=complex)
        c[0, :] = np.asarray(taylor)[: L + 1]
        return cls(c)

    @classmethod
    def in_sum(cls, taylor, K, L):
        """Lift a univariate series in ``hx + hy``; needs ``K + L + 1`` coefficients."""
        c = np.zeros((K + 1, L + 1), dtype=complex)
        for a in range(K + 1):
            for b in range(L + 1):
                c[a, b] = taylor[a + b] * comb(a + b, a)
        return cls(c)

    @classmethod
    def linear(cls, x0, y0, cx, cy, K, L):
        """The affine function ``cx * x + cy * y`` expanded at ``(x0, y0)``."""
        c = np.zeros((K + 1, L + 1), dtype=complex)
        c[0, 0] = cx * x0 + cy * y0
        if K >= 1:
            c[1, 0] = cx
        if L >= 1:
            c[0, 1] = cy
        return cls(c)

    def _coerce(self, other):
        if isinstance(other, BiSeries):
            if other.c.shape != self.c.shape:
                raise ValueError("truncation orders differ")
            return other
        return BiSeries.constant(other, *self.orders)

    def __add__(self, other):
        return BiSeries(self.c + self._coerce(other).c)

    __radd__ = __add__

    def __sub__(self, other):
        return BiSeries(self.c - self._coerce(other).c)

    def __rsub__(self, other):
        return BiSeries(self._coerce(other).c - self.c)

    def __neg__(self):
        return BiSeries(-self.c)

    def __mul__(self, other):
        if not isinstance(other, BiSeries):
            return BiSeries(self.c * other)
        other = self._coerce(other)
        K, L = self.orders
        out = np.zeros_like(self.c)
        a, b = self.c, other.c
        for i in range(K + 1):
            for j in range(L + 1):
                # out[i:, j:] += a[i, j] * b[:K+1-i, :L+1-j]
                if a[i, j] != 0:
                    out[i:, j:] += a[i, j] * b[: K + 1 - i, : L + 1 - j]
        return BiSeries(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, BiSeries):
            return BiSeries(self.c / other)
        d = self._coerce(other).c
        if d[0, 0] == 0:
            raise ZeroDivisionError("leading coefficient of the divisor vanishes")
        K, L = self.orders
        q = np.zeros_like(self.c)
        for a in range(K + 1):
            for b in range(L + 1):
                acc = self.c[a, b]
                for i in range(a + 1):
                    for j in range(b + 1):
                        if (i or j) and d[i, j] != 0:
                            acc -= d[i, j] * q[a - i, b - j]
                q[a, b] = acc / d[0, 0]
        return BiSeries(q)

    def exact_div_x(self):
        """Quotient by ``hx`` of a series vanishing on ``hx = 0``; loses one x-order."""
        return BiSeries(self.c[1:, :])

    def exact_div_y(self):
        return BiSeries(self.c[:, 1:])

    def exact_div_sum(self):
        """Quotient by ``hx + hy`` of a series vanishing on ``hx + hy = 0``.

        Uses ``N[a, b] = Q[a-1, b] + Q[a, b-1]``.  Only ``Q[a, b]`` with
        ``a + b < L`` is reliable (it needs ``N`` up to y-order ``a + b + 1``);
        callers pad the source and truncate.
        """
        K, L = self.orders
        n = self.c
        q = np.zeros((K + 1, L), dtype=complex)
        for a in range(K + 1):
            for b in range(L):
                q[a, b] = n[a, b + 1] - (q[a - 1, b + 1] if a >= 1 and b + 1 < L else 0)
        return BiSeries(q)

    def truncate(self, K, L):
        return BiSeries(self.c[: K + 1, : L + 1].copy())

    def partials(self):
        """Mixed partials ``d^(a+b) / dx^a dy^b`` at the expansion point."""
        K, L = self.orders
        fa = np.array([factorial(a) for a in range(K + 1)], dtype=float)
        fb = np.array([factorial(b) for b in range(L + 1)], dtype=float)
        return self.c * np.outer(fa, fb)
