"""Exact combinatorial identities and derivative identities of ``f``.

The binomial identities are checked in exact rational arithmetic.  The
derivative identities compare mixed partials from bivariate jet arithmetic
(left side) with closed forms built from univariate jets (right side).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .errors import DomainError
from .holofun import DELTA_POLE, addition_residual, bijet_eval, f_jet

MAX_ORDER = 4
MAX_SWEEP_ORDER = 10
TOL_IDENTITY = 1e-8
TOL_C1 = 1e-12
POINTS_PER_IDENTITY = 20
CONTINUITY_DISTANCE = 1e-3
# at distance 1e-3 an order-n partial of a difference quotient loses about
# eps * n! / 1e-3^(n+1); beyond total order 2 that exceeds 1e-4 in double precision
CONTINUITY_MAX_ORDER = 2
# sample box and denominator floor for the analytic checks
POINT_RADIUS = 2.0
MIN_DENOM = 0.7

B_NAMES = ("b1", "b2", "b3", "b4")
D_NAMES = ("d1", "d2", "d3", "d4", "d5", "d5lim", "d6", "d6lim", "d7", "d7lim")

__all__ = [
    "IdentityCase", "check_b", "check_c1", "check_additional", "check_d", "identity_sweep",
    "b_tuples", "sample_points", "continuity_gap", "B_RHS", "D_RHS", "MAX_ORDER", "TOL_IDENTITY",
]


@dataclass(frozen=True)
class IdentityCase:
    name: str
    params: tuple
    points: tuple
    lhs: object
    rhs: object
    residual: object
    tol: float = 0.0
    exact: bool = False

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.residual == 0
        return abs(self.residual) < self.tol

    def as_dict(self) -> dict:
        def enc(v):
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, complex):
                return [v.real, v.imag]
            return v
        return {"name": self.name, "params": list(self.params),
                "points": [enc(complex(p)) for p in self.points],
                "lhs": enc(self.lhs), "rhs": enc(self.rhs), "residual": enc(self.residual),
                "tol": self.tol, "pass": self.passed}


# ---------------------------------------------------------------- b identities

def _b1_lhs(k, l):
    return sum((Fraction((-1) ** n * comb(k, n), n + l + 1) for n in range(k + 1)), Fraction(0))


def _b1_rhs(k, l):
    return Fraction(factorial(k) * factorial(l), factorial(k + l + 1))


def _b2_lhs(k, n):
    return Fraction(sum(comb(n - a, n - k) for a in range(k + 1)))


def _b2_rhs(k, n):
    return Fraction(comb(n + 1, k))


def _b34_lhs(k, l, m, upper):
    return Fraction(sum((-1) ** j * comb(m, j) * comb(k + l - j, k) for j in range(upper + 1)))


def _b34_rhs(k, l, m):
    return Fraction(0) if k < m else Fraction(comb(k + l - m, l))


def _b_pre(which, p):
    if any(not isinstance(v, (int, np.integer)) or v < 0 for v in p):
        raise ValueError(f"b{which}: parameters must be non-negative integers, got {p}")
    if which == 1 and len(p) == 2:
        return
    if which == 2 and len(p) == 2 and p[0] <= p[1]:
        return
    if which == 3 and len(p) == 3 and p[2] <= p[1]:
        return
    if which == 4 and len(p) == 3 and p[1] < p[2] <= p[0] + p[1]:
        return
    raise ValueError(f"b{which}: parameters {p} outside the admissible range")


B_LHS = {
    "b1": _b1_lhs,
    "b2": _b2_lhs,
    "b3": lambda k, l, m: _b34_lhs(k, l, m, m),
    "b4": lambda k, l, m: _b34_lhs(k, l, m, l),
}
B_RHS = {"b1": _b1_rhs, "b2": _b2_rhs, "b3": _b34_rhs, "b4": _b34_rhs}


def check_b(which: int, params, rhs=None) -> IdentityCase:
    """Exact check of one binomial identity.

    ``params`` is ``(k, l)`` for b1, ``(k, n)`` for b2 and ``(k, l, m)`` for b3, b4.
    ``rhs`` replaces the closed form (used for negative controls).
    """
    which = int(which)
    if which not in (1, 2, 3, 4):
        raise ValueError(f"unknown b-identity {which}")
    params = tuple(int(v) for v in params)
    _b_pre(which, params)
    name = f"b{which}"
    lhs = B_LHS[name](*params)
    r = (rhs or B_RHS[name])(*params)
    return IdentityCase(name, params, (), lhs, r, lhs - r, 0.0, exact=True)


def b_tuples(which: int, max_order: int):
    """Every admissible parameter tuple with all entries at most ``max_order``."""
    N = range(max_order + 1)
    if which == 1:
        return [(k, l) for k in N for l in N]
    if which == 2:
        return [(k, n) for n in N for k in range(n + 1)]
    if which == 3:
        return [(k, l, m) for k in N for l in N for m in range(l + 1)]
    if which == 4:
        return [(k, l, m) for k in N for l in N for m in range(l + 1, min(k + l, max_order) + 1)]
    raise ValueError(f"unknown b-identity {which}")


# ---------------------------------------------------------------- c relations

def check_c1(x: complex, k: int = 0, which: str = "parity",
             delta: float = DELTA_POLE) -> IdentityCase:
    """Parity of ``f^(k)`` or the Riccati relation ``f' + 2f/x + f^2 = 1/4`` at ``x``.

    At ``x = 0`` exactly the Riccati relation is taken in its limit ``3 f'(0) = 1/4``.
    """
    x = complex(x)
    if which == "parity":
        lhs = f_jet(-x, k, delta)[k]
        rhs = (-1) ** (k + 1) * f_jet(x, k, delta)[k]
        return IdentityCase("c1_parity", (k,), (x,), lhs, rhs, abs(lhs - rhs), TOL_C1)
    if which == "ode":
        j = f_jet(x, 1, delta)
        if x == 0:
            lhs = 3 * j[1]
        elif abs(x) <= delta:
            raise DomainError(f"x = {x} within {delta:g} of zero")
        else:
            lhs = j[1] + 2 * j[0] / x + j[0] ** 2
        return IdentityCase("c1_ode", (), (x,), lhs, 0.25, abs(lhs - 0.25), TOL_C1)
    raise ValueError(f"unknown c1 relation {which!r}")


def check_additional(x: complex, y: complex, delta: float = DELTA_POLE) -> IdentityCase:
    r = addition_residual(x, y, delta=delta)
    return IdentityCase("additional", (), (complex(x), complex(y)), r, 0.0, abs(r), TOL_C1)


# ---------------------------------------------------------------- d identities

_EXPR = {
    "d1": "quarter", "d2": "f(x)f(y)", "d3": "f(x+y)f(x)", "d4": "f(x+y)f(y)",
    "d5": "(f(x)+f(y))/(x+y)", "d5lim": "(f(x)+f(y))/(x+y)",
    "d6": "(f(x+y)-f(y))/x", "d6lim": "(f(x+y)-f(y))/x",
    "d7": "(f(x+y)-f(x))/y", "d7lim": "(f(x+y)-f(x))/y",
}


def _d1(k, l, x, y, delta):
    return 0.25 if k == 0 and l == 0 else 0.0


def _d2(k, l, x, y, delta):
    return f_jet(x, k, delta)[k] * f_jet(y, l, delta)[l]


def _d3(k, l, x, y, delta):
    js, jx = f_jet(x + y, k + l, delta), f_jet(x, k, delta)
    return sum(comb(k, i) * js[l + i] * jx[k - i] for i in range(k + 1))


def _d4(k, l, x, y, delta):
    js, jy = f_jet(x + y, k + l, delta), f_jet(y, l, delta)
    return sum(comb(l, i) * js[k + i] * jy[l - i] for i in range(l + 1))


def _d5(k, l, x, y, delta):
    s = x + y
    jx, jy = f_jet(x, k, delta), f_jet(y, l, delta)
    sign = (-1) ** (k + l)
    out = sum(comb(l, a) * factorial(k + l - a) * (-1) ** a * jy[a] / s ** (k + l + 1 - a)
              for a in range(l + 1))
    out += sum(comb(k, b) * factorial(k + l - b) * (-1) ** b * jx[b] / s ** (k + l + 1 - b)
               for b in range(k + 1))
    return sign * out


def _d5lim(k, l, x, y, delta):
    c = Fraction(factorial(k) * factorial(l), factorial(k + l + 1))
    return (-1) ** k * float(c) * f_jet(y, k + l + 1, delta)[k + l + 1]


def _d6(k, l, x, y, delta):
    js, jy = f_jet(x + y, k + l, delta), f_jet(y, l, delta)
    out = -sum(factorial(k) // factorial(k - m) * (-1) ** (m + 1) * js[k + l - m] / x ** (m + 1)
               for m in range(k + 1))
    return out - (-1) ** k * factorial(k) * jy[l] / x ** (k + 1)


def _d6lim(k, l, x, y, delta):
    return f_jet(y, k + l + 1, delta)[k + l + 1] / (k + 1)


def _d7(k, l, x, y, delta):
    js, jx = f_jet(x + y, k + l, delta), f_jet(x, k, delta)
    out = -sum(factorial(l) // factorial(l - m) * (-1) ** (m + 1) * js[k + l - m] / y ** (m + 1)
               for m in range(l + 1))
    return out - (-1) ** l * factorial(l) * jx[k] / y ** (l + 1)


def _d7lim(k, l, x, y, delta):
    return f_jet(x, k + l + 1, delta)[k + l + 1] / (l + 1)


D_RHS = {"d1": _d1, "d2": _d2, "d3": _d3, "d4": _d4, "d5": _d5, "d5lim": _d5lim,
         "d6": _d6, "d6lim": _d6lim, "d7": _d7, "d7lim": _d7lim}


def _d_pre(name, x, y, delta):
    def gap(v, what):
        if abs(v) <= delta:
            raise DomainError(f"{name}: {what} = {v} within {delta:g} of zero")
    if name == "d5":
        gap(x + y, "x + y")
    elif name == "d6":
        gap(x, "x")
    elif name == "d7":
        gap(y, "y")
    elif name == "d5lim" and x + y != 0:
        raise DomainError("d5lim is evaluated on x + y = 0")
    elif name == "d6lim" and x != 0:
        raise DomainError("d6lim is evaluated on x = 0")
    elif name == "d7lim" and y != 0:
        raise DomainError("d7lim is evaluated on y = 0")


def check_d(which, k: int, l: int, x: complex, y: complex, rhs=None,
            tol: float = TOL_IDENTITY, delta: float = DELTA_POLE,
            max_order: int = MAX_ORDER) -> IdentityCase:
    """Mixed partial ``d^(k+l)/dx^k dy^l`` of one expression against its closed form.

    ``which`` is ``1..7`` or ``"5lim"``, ``"6lim"``, ``"7lim"`` (a leading ``d`` is accepted).
    """
    name = str(which)
    name = name if name.startswith("d") else "d" + name
    if name not in D_RHS:
        raise ValueError(f"unknown d-identity {which!r}")
    k, l = int(k), int(l)
    if k < 0 or l < 0:
        raise ValueError("orders must be non-negative")
    if max(k, l) > max_order:
        raise ValueError(f"order ({k}, {l}) exceeds the cap {max_order}")
    x, y = complex(x), complex(y)
    _d_pre(name, x, y, delta)
    lhs = complex(bijet_eval(_EXPR[name], x, y, k, l, delta).coeffs[k, l])
    r = complex((rhs or D_RHS[name])(k, l, x, y, delta))
    return IdentityCase(name, (k, l), (x, y), lhs, r, abs(lhs - r), tol)


_OFFSET = {
    "d5": lambda y, e: (-y + e, y),
    "d6": lambda y, e: (e, y),
    "d7": lambda y, e: (y, e),
}


def continuity_gap(name: str, k: int, l: int, point: complex,
                   distance: float = CONTINUITY_DISTANCE) -> float:
    """Largest gap between the limit form and the generic form (both sides) near the excluded set.

    ``name`` is ``d5``, ``d6`` or ``d7``; ``point`` is the free coordinate on the
    excluded set (``y`` for d5 and d6, ``x`` for d7).
    """
    if name not in _OFFSET:
        raise ValueError("continuity is defined for d5, d6 and d7")
    if k + l > CONTINUITY_MAX_ORDER:
        raise ValueError(f"total order {k + l} exceeds {CONTINUITY_MAX_ORDER}: "
                         "double precision cannot resolve the gap")
    shift = _OFFSET[name]
    lim = check_d(name + "lim", k, l, *shift(complex(point), 0j)).lhs
    near = check_d(name, k, l, *shift(complex(point), distance))
    return max(abs(lim - near.lhs), abs(lim - near.rhs))


def _rand_c(rng, radius):
    while True:
        z = complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius))
        if abs(z) <= radius:
            return z


def sample_points(name: str, count: int, rng, radius: float = POINT_RADIUS,
                  min_denom: float = MIN_DENOM):
    """Seeded points for one analytic identity, on the limit set for the ``lim`` variants.

    Generic points keep ``x``, ``y`` and ``x + y`` at least ``min_denom`` from zero so
    the absolute tolerance stays meaningful at the top jet order.
    """
    pts = []
    while len(pts) < count:
        x, y = _rand_c(rng, radius), _rand_c(rng, radius)
        if name == "d5lim":
            x = -y
        elif name == "d6lim":
            x = 0j
        elif name == "d7lim":
            y = 0j
        if name in ("d5lim", "d6lim", "d7lim"):
            if min(abs(v) for v in (x, y) if v != 0) < min_denom:
                continue
        elif min(abs(x), abs(y), abs(x + y)) < min_denom:
            continue
        pts.append((x, y))
    return pts


def identity_sweep(max_order: int = MAX_SWEEP_ORDER, seed: int = 0,
                   points: int = POINTS_PER_IDENTITY, overrides: dict | None = None,
                   names=None) -> list:
    """Run every identity; failures are returned as entries, never raised.

    ``overrides`` maps an identity name to a replacement closed form, which is
    how a corrupted right-hand side is injected as a negative control.  ``names``
    restricts the sweep to a subset.
    """
    if not 0 <= max_order <= MAX_SWEEP_ORDER:
        raise ValueError(f"max_order must lie in [0, {MAX_SWEEP_ORDER}]")
    overrides = overrides or {}
    wanted = set(names) if names is not None else None
    keep = lambda n: wanted is None or n in wanted  # noqa: E731
    rng = np.random.default_rng(seed)
    out = []
    for i, name in enumerate(B_NAMES, start=1):
        if keep(name):
            out.extend(check_b(i, p, overrides.get(name)) for p in b_tuples(i, max_order))
    dmax = min(max_order, MAX_ORDER)
    if keep("c1_parity"):
        for x in (_rand_c(rng, POINT_RADIUS) for _ in range(points)):
            out.extend(check_c1(x, k, "parity") for k in range(dmax + 1))
    if keep("c1_ode"):
        out.extend(check_c1(x, 0, "ode") for x, _ in sample_points("d6", points, rng))
    if keep("additional"):
        out.extend(check_additional(x, y) for x, y in sample_points("d5", points, rng))
    for name in D_NAMES:
        if not keep(name):
            continue
        pts = sample_points(name, points, rng)
        for k in range(dmax + 1):
            for l in range(dmax + 1):
                out.extend(check_d(name, k, l, x, y, overrides.get(name)) for x, y in pts)
    return out


@dataclass
class SweepSummary:
    cases: list = field(default_factory=list)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c.passed]

    def by_name(self) -> dict:
        out = {}
        for c in self.cases:
            total, bad, worst = out.get(c.name, (0, 0, 0.0))
            res = 0.0 if c.exact else float(abs(c.residual))
            out[c.name] = (total + 1, bad + (not c.passed), max(worst, res))
        return out
