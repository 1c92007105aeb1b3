import mpmath
import numpy as np
import pytest

from dynr import liealg

mpmath.mp.dps = 40

SWEEP = ("abelian(3)", "sl2", "oscillator", "direct_sum(sl2,sl2)")


def mp_f(z):
    z = mpmath.mpc(z)
    return mpmath.coth(z / 2) / 2 - 1 / z


def mp_deriv(z, k):
    """k-th derivative of f by high-precision numerical differentiation."""
    return complex(mpmath.diff(mp_f, mpmath.mpc(z), k))


def mp_partial(g, x, y, k, l):
    return complex(mpmath.diff(g, (mpmath.mpc(x), mpmath.mpc(y)), (k, l)))


@pytest.fixture(params=SWEEP)
def sweep_algebra(request):
    return liealg.catalog(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
