import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zigzag.special import (
    LogFactorialTable,
    assoc_laguerre,
    log_factorial,
    same_parity,
    sqrt_ratio_factorials,
    step,
)


def laguerre_series(n, k, x):
    """Exact rational value of the explicit finite series."""
    x = Fraction(x)
    return sum(
        Fraction((-1) ** i * math.comb(n + k, n - i)) * x**i / math.factorial(i) for i in range(n + 1)
    )


def test_laguerre_examples():
    assert assoc_laguerre(0, 5, 3.7) == 1.0
    assert assoc_laguerre(1, 0, 2.0) == -1.0
    assert float(assoc_laguerre(4, 2, 0.5)) == pytest.approx(float(laguerre_series(4, 2, 0.5)), rel=1e-14)


def test_laguerre_matches_series_on_grid():
    worst = 0.0
    for n in range(0, 31, 3):
        for k in range(0, 31, 5):
            for x in (0.0, 0.25, 1.5, 7.0, 19.5, 50.0):
                exact = laguerre_series(n, k, x)
                got = assoc_laguerre(n, k, x)
                scale = max(abs(float(exact)), 1e-300)
                # relative error against the largest series term guards against near-roots
                terms = max(abs(float(math.comb(n + k, n - i) * Fraction(x) ** i / math.factorial(i)))
                            for i in range(n + 1))
                worst = max(worst, abs(float(got) - float(exact)) / max(scale, 1e-16 * terms))
    assert worst < 1e-10


@pytest.mark.parametrize("n", [0, 1, 5, 17, 30])
@pytest.mark.parametrize("k", [0, 2, 9, 30])
def test_laguerre_at_zero_is_binomial(n, k):
    assert assoc_laguerre(n, k, 0.0) == pytest.approx(math.comb(n + k, n), rel=1e-14)


def test_laguerre_negative_order_and_broadcast():
    # L_3^(-2)(x) from the series with k = -2
    x = 1.3
    exact = sum((-1) ** i * math.comb(1, 3 - i) * x**i / math.factorial(i) for i in range(4))
    assert assoc_laguerre(3, -2, x) == pytest.approx(exact, abs=1e-14)
    vals = assoc_laguerre(2, np.array([0, 1, 2]), np.array([0.5, 0.5, 0.5]))
    assert vals.shape == (3,)


def test_step_and_parity():
    assert (step(0), step(-1), step(7)) == (1, 0, 1)
    assert (same_parity(3, 5), same_parity(2, 5), same_parity(0, 0)) == (1, 0, 1)


@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_parity_symmetric_and_step_monotone(m, k):
    assert same_parity(m, k) == same_parity(k, m)
    lo, hi = sorted((m, k))
    assert step(lo) <= step(hi)


def test_log_factorial_table():
    t = LogFactorialTable(300)
    assert t[0] == 0.0
    n = np.arange(1, 301)
    diff = t[n] - t[n - 1]
    # measured in units of the larger table entry, the precision the difference is formed at
    assert np.max(np.abs(diff - np.log(n)) / np.spacing(t[n])) <= 2
    assert np.allclose(t[n], [math.lgamma(k + 1.0) for k in n], rtol=1e-14, atol=0)
    with pytest.raises(IndexError):
        t[301]
    with pytest.raises(IndexError):
        t[-1]


def test_log_factorial_grows_on_demand():
    assert log_factorial(3000) == pytest.approx(math.lgamma(3001.0), rel=1e-15)


def test_sqrt_ratio_examples():
    assert sqrt_ratio_factorials(5, 5) == 1.0
    assert sqrt_ratio_factorials(4, 2) == math.sqrt(12)
    v = sqrt_ratio_factorials(170, 5)
    assert math.isfinite(v)
    with mpmath.workdps(60):
        exact = mpmath.sqrt(mpmath.factorial(170) / mpmath.factorial(5))
    assert v == float(exact)


@given(st.integers(0, 300), st.integers(0, 300))
def test_sqrt_ratio_within_eight_ulps(a, b):
    with mpmath.workdps(80):
        exact = float(mpmath.sqrt(mpmath.factorial(a) / mpmath.factorial(b)))
    got = sqrt_ratio_factorials(a, b)
    assert abs(got - exact) <= 8 * math.ulp(exact)


def test_sqrt_ratio_range_errors():
    with pytest.raises(IndexError):
        sqrt_ratio_factorials(2000, 3, n_max=1024)
    with pytest.raises(ValueError):
        sqrt_ratio_factorials(-1, 3)
