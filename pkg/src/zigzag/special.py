"""Special-function kernels used by the closed-form amplitudes.

Everything that carries a factorial is assembled in log space so that
matrix elements for indices of a few hundred stay finite.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = [
    "LogFactorialTable",
    "log_factorial",
    "assoc_laguerre",
    "assoc_laguerre_scaled",
    "step",
    "same_parity",
    "sqrt_ratio_factorials",
]


def _prefix_log_sums(n_max):
    """``ln(n!)`` for ``n = 0..n_max`` as rounded double-double running sums.

    Each entry is the sum carried in two words and rounded once, so
    consecutive entries differ from ``ln(n)`` by about one unit in the
    last place of the entry.
    """
    out = [0.0]
    hi = lo = 0.0
    for n in range(1, n_max + 1):
        x = math.log(n)
        s = hi + x
        b = s - hi
        lo += (hi - (s - b)) + (x - b)
        hi = s + lo
        lo -= hi - s
        out.append(hi)
    return out


class LogFactorialTable:
    """Precomputed ``ln(n!)`` for ``0 <= n <= n_max``.

    Indexing with an integer array returns the matching values; indices
    outside ``[0, n_max]`` raise ``IndexError``.
    """

    def __init__(self, n_max=1024):
        if n_max < 0:
            raise ValueError(f"n_max must be >= 0, got {n_max}")
        self.n_max = int(n_max)
        self.values = np.array(_prefix_log_sums(self.n_max))
        self.values.setflags(write=False)

    def __getitem__(self, n):
        idx = np.asarray(n)
        if idx.size and (idx.min() < 0 or idx.max() > self.n_max):
            raise IndexError(f"log-factorial index out of table range [0, {self.n_max}]: {n!r}")
        return self.values[idx]

    def __len__(self):
        return self.n_max + 1

    def grown(self, n_max):
        """Return ``self`` if it covers ``n_max``, else a larger table."""
        if n_max <= self.n_max:
            return self
        return LogFactorialTable(max(n_max, 2 * self.n_max))


_TABLE = LogFactorialTable(1024)


def log_factorial(n):
    """``ln(n!)`` from the module-level table, grown on demand."""
    global _TABLE
    top = int(np.max(n)) if np.size(n) else 0
    if top > _TABLE.n_max:
        _TABLE = _TABLE.grown(top)
    return _TABLE[n]


def assoc_laguerre(n, k, x):
    """Associated Laguerre polynomial ``L_n^{(k)}(x)`` by upward recurrence.

    ``k`` and ``x`` broadcast against each other; ``k`` may be any integer
    with ``k >= -n``.

    Examples
    --------
    >>> float(assoc_laguerre(1, 0, 2.0))
    -1.0
    """
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    mant, logscale = assoc_laguerre_scaled(n, k, x)
    return mant * np.exp(logscale)


def assoc_laguerre_scaled(n, k, x):
    """Scaled recurrence for ``L_n^{(k)}(x)``.

    Returns ``(mantissa, log_scale)`` with ``L = mantissa * exp(log_scale)``
    so that large orders do not overflow.
    """
    k = np.asarray(k, dtype=float)
    x = np.asarray(x, dtype=float)
    k, x = np.broadcast_arrays(k, x)
    prev = np.zeros(k.shape)
    cur = np.ones(k.shape)
    logscale = np.zeros(k.shape)
    for j in range(1, n + 1):
        nxt = ((2 * j - 1 + k - x) * cur - (j - 1 + k) * prev) / j
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e150
        if np.any(big):
            s = np.where(big, np.abs(cur), 1.0)
            cur = cur / s
            prev = prev / s
            logscale = logscale + np.log(s)
    return cur, logscale


def step(x):
    """Unit step that is 1 at the origin: 0 for ``x < 0``, else 1."""
    return 1 if x >= 0 else 0


def same_parity(m, k):
    """1 if ``m`` and ``k`` have the same parity, else 0.

    Stands in for ``cos^2((m - k) pi / 2)`` without floating trigonometry.
    """
    return 1 if (int(m) - int(k)) % 2 == 0 else 0


def sqrt_ratio_factorials(a, b, n_max=None):
    """``sqrt(a! / b!)`` correctly rounded to double precision.

    The factorial quotient is formed exactly with Python integers and the
    square root taken with ``math.isqrt`` on a scaled integer, so there is
    no overflow for arguments whose factorials exceed the float range.
    ``n_max`` (defaults to the shared log-factorial table size) bounds the
    accepted arguments.
    """
    a, b = int(a), int(b)
    if n_max is None:
        n_max = _TABLE.n_max
    if a < 0 or b < 0:
        raise ValueError(f"factorial arguments must be >= 0, got ({a}, {b})")
    if a > n_max or b > n_max:
        raise IndexError(f"factorial argument exceeds table range {n_max}: ({a}, {b})")
    if a == b:
        return 1.0
    hi, lo = max(a, b), min(a, b)
    q = math.prod(range(lo + 1, hi + 1))
    # 64 extra bits below the leading bit of sqrt(q)
    shift = max(0, 64 - q.bit_length() // 2)
    root = Fraction(math.isqrt(q << (2 * shift)), 1 << shift)
    return float(root) if a > b else float(1 / root)
