"""Closed-form field amplitudes of the zigzag array.

The propagator is split into a displacement and an su(1,1) squeeze,

    Psi_{n,m}(Z) = exp(-nu/2) sum_k S_{m,k}(Z) <k|D(-eta)|n>,

with ``S`` the matrix elements of ``exp(2 i alpha2 H Z)``,
``H = K+ + (lam/alpha2) K0 + K-``. All scalar coefficients depend on
``gamma = sqrt(4 alpha2**2 - lam**2)`` only through ``cosh(gamma Z)`` and
``sinh(gamma Z)/gamma``, which are real for real parameters in every
regime. They are evaluated from ``gamma**2`` directly so the critical point
needs no special casing beyond the removable singularities handled here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfScopeError, RegimeDispatchError, SingularPointError
from .lattice import CRITICAL_RTOL, LatticeParams, Regime, classify_regime
from .special import assoc_laguerre_scaled, log_factorial

__all__ = [
    "ScalarFrame",
    "DisentangleFns",
    "AmplitudeRow",
    "scalar_frame",
    "eval_eta",
    "eval_eta_critical",
    "eval_nu",
    "eval_g1_g0",
    "disentangle",
    "displacement_element",
    "displacement_column",
    "squeeze_element",
    "squeeze_table",
    "critical_amplitude_direct",
    "amplitude",
    "amplitude_map",
    "dsn_distribution",
    "TAIL_RTOL",
]

#: relative size of the k-sum tail below which the sum is cut
TAIL_RTOL = 1e-14
#: consecutive small tail terms required before cutting
TAIL_RUN = 5
#: maximum Z step when continuing the logarithm of w(Z) from Z = 0
UNWRAP_STEP = 0.05


# ---------------------------------------------------------------------------
# Scalar building blocks (even functions of gamma)
# ---------------------------------------------------------------------------


def _cosh_sinhc(gamma_sq, Z):
    """``cosh(gamma Z)`` and ``sinh(gamma Z)/gamma`` from ``gamma**2``."""
    Z = np.asarray(Z, dtype=float)
    if gamma_sq > 0:
        g = math.sqrt(gamma_sq)
        return np.cosh(g * Z), np.sinh(g * Z) / g
    if gamma_sq < 0:
        g = math.sqrt(-gamma_sq)
        return np.cos(g * Z), np.sin(g * Z) / g
    return np.ones_like(Z), Z.copy()


def _series(x, coeffs):
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + c
    return out


# 1/(2k+2)! and 1/(2k+3)! for k = 0..6
_COSH_M1 = [1.0 / math.factorial(2 * k + 2) for k in range(7)]
_SINH_M1 = [1.0 / math.factorial(2 * k + 3) for k in range(7)]


def _coshm1_over(gamma_sq, Z):
    """``(cosh(gamma Z) - 1) / gamma**2``; tends to ``Z**2/2`` at gamma = 0."""
    Z = np.asarray(Z, dtype=float)
    x = gamma_sq * Z * Z
    small = np.abs(x) < 0.1
    out = np.empty_like(Z)
    out[small] = Z[small] ** 2 * _series(x[small], _COSH_M1)
    big = ~small
    if np.any(big):
        g = math.sqrt(abs(gamma_sq))
        zb = Z[big]
        if gamma_sq > 0:
            out[big] = 2.0 * np.sinh(0.5 * g * zb) ** 2 / gamma_sq
        else:
            out[big] = 2.0 * np.sin(0.5 * g * zb) ** 2 / (-gamma_sq)
    return out


def _sinhc_m_z_over(gamma_sq, Z):
    """``(sinh(gamma Z)/gamma - Z) / gamma**2``; tends to ``Z**3/6``."""
    Z = np.asarray(Z, dtype=float)
    x = gamma_sq * Z * Z
    small = np.abs(x) < 0.1
    out = np.empty_like(Z)
    out[small] = Z[small] ** 3 * _series(x[small], _SINH_M1)
    big = ~small
    if np.any(big):
        _, s = _cosh_sinhc(gamma_sq, Z[big])
        out[big] = (s - Z[big]) / gamma_sq
    return out


def _check_beta(params):
    if params.alpha1 != 0 and params.alpha2 != 0 and params.beta_singular:
        raise OutOfScopeError("alpha2", "lambda + 2*alpha2 = 0 with alpha1 != 0 is not supported")


def _eta_any(params, regime, Z):
    # alpha1/(lam+2a2) * 2 sinh^2(gZ/2) = alpha1 (2 a2 - lam) (cosh gZ - 1)/g^2
    _check_beta(params)
    a1 = params.alpha1
    _, s = _cosh_sinhc(regime.gamma_sq, Z)
    re = a1 * (2 * params.alpha2 - params.lam) * _coshm1_over(regime.gamma_sq, Z)
    return re - 1j * a1 * s


def _nu_any(params, regime, Z):
    # i lam Z + 2 i a1^2 (Z - s)/(lam + 2 a2) with (Z - s) = -g^2 (...)
    _check_beta(params)
    a1, a2, lam = params.alpha1, params.alpha2, params.lam
    Z = np.asarray(Z, dtype=float)
    tail = _sinhc_m_z_over(regime.gamma_sq, Z)
    return 1j * lam * Z - 2j * a1 * a1 * (2 * a2 - lam) * tail


def _w(params, regime, Z):
    c, s = _cosh_sinhc(regime.gamma_sq, Z)
    return c - 1j * params.lam * s


def _log_w(params, regime, Z):
    """Logarithm of ``w(Z) = cosh(gZ) - i lam sinh(gZ)/g`` continued from Z=0.

    The phase is unwrapped along ``[0, Z]`` with steps small enough that it
    moves by less than one radian per step, so each Z is independent of any
    other evaluation.
    """
    Z = np.atleast_1d(np.asarray(Z, dtype=float))
    rate = abs(params.lam) + math.sqrt(abs(regime.gamma_sq)) + 2 * abs(params.alpha2)
    if regime.gamma_sq < 0 and params.lam > 0:
        rate = max(rate, -regime.gamma_sq / params.lam)
    h = min(UNWRAP_STEP, 1.0 / rate) if rate > 0 else UNWRAP_STEP
    out = np.empty(Z.shape, dtype=complex)
    for i, z in enumerate(Z):
        n = max(1, int(math.ceil(abs(z) / h)))
        path = np.linspace(0.0, z, n + 1)
        w = _w(params, regime, path)
        if np.any(np.abs(w) == 0):
            raise SingularPointError("w(Z) vanishes on the continuation path", z)
        phase = np.unwrap(np.angle(w))[-1]
        out[i] = math.log(abs(w[-1])) + 1j * phase
    return out


def _g1(params, regime, Z):
    c, s = _cosh_sinhc(regime.gamma_sq, Z)
    w = c - 1j * params.lam * s
    if np.any(np.abs(w) == 0):
        raise SingularPointError("denominator of g1 vanishes", Z)
    return 2j * params.alpha2 * s / w


def _as_output(x, Z):
    return complex(x[()]) if np.ndim(Z) == 0 else x


# ---------------------------------------------------------------------------
# Public scalar evaluators
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalarFrame:
    """Scalar coefficients of the closed form at one distance.

    ``beta`` is NaN where it is undefined (``lam = alpha2 = 0`` with
    ``alpha1 != 0``); the other coefficients stay finite there.
    """

    Z: float
    beta: float
    eta: complex
    nu: complex
    g1: complex
    g0: complex
    gamma: complex


def scalar_frame(params: LatticeParams, Z: float) -> ScalarFrame:
    regime = classify_regime(params)
    Z = float(Z)
    if params.alpha1 == 0:
        beta = 0.0
    elif params.beta_singular:
        beta = math.nan
    else:
        beta = params.alpha1 / (params.lam + 2 * params.alpha2)
    eta = complex(_eta_any(params, regime, Z)[()])
    nu = complex(_nu_any(params, regime, Z)[()])
    g1 = complex(_g1(params, regime, Z)[()])
    g0 = complex(-2.0 * _log_w(params, regime, Z)[0])
    return ScalarFrame(Z, beta, eta, nu, g1, g0, regime.gamma)


def eval_eta(params: LatticeParams, Z):
    """Displacement ``eta(Z)`` generated by the squeeze on the frame shift.

    Only defined away from the critical point; use
    :func:`eval_eta_critical` there.
    """
    regime = classify_regime(params)
    if regime.is_critical:
        raise RegimeDispatchError("eval_eta is undefined at gamma = 0; use eval_eta_critical")
    return _as_output(_eta_any(params, regime, Z), Z)


def eval_eta_critical(params: LatticeParams, Z):
    """``gamma -> 0`` limit of :func:`eval_eta`, equal to ``-i alpha1 Z``."""
    regime = classify_regime(params)
    if not regime.is_critical:
        raise RegimeDispatchError(f"eval_eta_critical called in the {regime.kind.value} regime")
    Z = np.asarray(Z, dtype=float)
    return _as_output(-1j * params.alpha1 * Z + 0j, Z)


def eval_nu(params: LatticeParams, Z):
    """Global phase exponent ``nu(Z)``; the amplitude carries ``exp(-nu/2)``.

    Purely imaginary for real parameters, reducing to ``i lam Z`` when
    ``alpha1 = 0`` and at the critical point.
    """
    regime = classify_regime(params)
    return _as_output(_nu_any(params, regime, Z), Z)


def eval_g1_g0(params: LatticeParams, Z):
    """Coefficients of the normal-ordered squeeze ``exp(g1 K+) exp(g0 K0) exp(g1 K-)``.

    ``g0 = -2 log w`` uses the logarithm continued from ``Z = 0``.
    """
    regime = classify_regime(params)
    if regime.is_critical:
        raise RegimeDispatchError("eval_g1_g0 requires gamma != 0; the critical branch has its own prefactors")
    g1 = _g1(params, regime, Z)
    g0 = -2.0 * _log_w(params, regime, Z)
    if np.ndim(Z) == 0:
        return complex(g1[()]), complex(g0[0])
    return g1, g0


@dataclass(frozen=True)
class DisentangleFns:
    f: complex
    g: complex
    h: complex


def disentangle(chi: float, eta_rate: float, Z: float, *, tol: float = CRITICAL_RTOL) -> DisentangleFns:
    """Disentangling functions of ``exp(i eta_rate Z (K+ + chi K0 + K-))``.

    Returns ``f, g, h`` with the operator equal to
    ``exp(i f K+) exp(i g K0) exp(i h K-)``; ``h = f``. The ``chi = +-2``
    branch is selected within a relative band ``tol``.
    """
    chi, eta_rate, Z = float(chi), float(eta_rate), float(Z)
    if abs(chi * chi - 4.0) <= tol * max(1.0, chi * chi):
        sgn = 1.0 if chi > 0 else -1.0
        x = eta_rate * Z
        den = 1.0 - sgn * 1j * x
        f = x / den
        g = sgn * math.pi + 2j * cmath.log(sgn * 1j + x)
        return DisentangleFns(f, g, f)
    q = cmath.sqrt(chi * chi - 4.0)
    theta = 0.5 * eta_rate * Z * q
    sn, cs = cmath.sin(theta), cmath.cos(theta)
    # 2i / (chi + i q cot theta), multiplied through by sin(theta)
    den = chi * sn + 1j * q * cs
    if abs(den) == 0:
        raise SingularPointError("cotangent pole in f", Z)
    f = 2j * sn / den
    u = cs - 1j * (chi / q) * sn
    if u == 0:
        raise SingularPointError("logarithm argument of g vanishes", Z)
    g = -1j * cmath.log(u**-2)
    return DisentangleFns(f, g, f)


# ---------------------------------------------------------------------------
# Matrix elements
# ---------------------------------------------------------------------------


def displacement_element(m: int, n: int, eta: complex) -> complex:
    """``<m| exp(eta a+ - eta* a) |n>`` via associated Laguerre polynomials."""
    m, n = int(m), int(n)
    if m < 0 or n < 0:
        raise ValueError(f"indices must be >= 0, got ({m}, {n})")
    eta = complex(eta)
    if eta == 0:
        return 1.0 + 0j if m == n else 0j
    x = abs(eta) ** 2
    if m >= n:
        base, lo, hi = eta, n, m
    else:
        base, lo, hi = -eta.conjugate(), m, n
    mant, lscale = assoc_laguerre_scaled(lo, hi - lo, x)
    if mant == 0:
        return 0j
    logmag = -0.5 * x + 0.5 * (log_factorial(lo) - log_factorial(hi)) + (hi - lo) * math.log(abs(base))
    phase = cmath.exp(1j * (hi - lo) * cmath.phase(base))
    return complex(math.copysign(1.0, mant) * math.exp(logmag + lscale + math.log(abs(mant))) * phase)


def displacement_column(n: int, xi, K: int):
    """Column ``d_{k,n}(xi)`` for ``k = 0..K-1``, batched over ``xi``.

    ``xi`` may be a scalar or a 1-D array; the result has shape
    ``xi.shape + (K,)``.
    """
    xi = np.asarray(xi, dtype=complex)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    out = np.zeros(xi.shape + (K,), dtype=complex)
    x = np.abs(xi) ** 2
    zero = x == 0
    if np.any(zero) and n < K:
        out[zero, n] = 1.0
    nz = ~zero
    if not np.any(nz) or K == 0:
        return out[0] if scalar else out
    xin, xn = xi[nz], x[nz]
    logx = np.log(xn)
    lf = log_factorial(np.arange(max(K, n + 1)))
    res = np.zeros((xin.size, K), dtype=complex)

    # k >= n: sqrt(n!/k!) xi^(k-n) L_n^(k-n)(|xi|^2)
    ks = np.arange(n, K)
    if ks.size:
        order = ks - n
        mant, lsc = assoc_laguerre_scaled(n, order[None, :], xn[:, None])
        logmag = -0.5 * xn[:, None] + 0.5 * (lf[n] - lf[ks])[None, :] + order[None, :] * 0.5 * logx[:, None]
        ph = np.exp(1j * order[None, :] * np.angle(xin)[:, None])
        res[:, n:K] = _signed_exp(mant, lsc + logmag) * ph

    # k < n: sqrt(k!/n!) (-xi*)^(n-k) L_k^(n-k)(|xi|^2), degree varies with k
    kl = np.arange(0, min(n, K))
    if kl.size:
        order = (n - kl).astype(float)
        mant = np.empty((xin.size, kl.size))
        lsc = np.empty((xin.size, kl.size))
        prev = np.zeros((xin.size, kl.size))
        cur = np.ones((xin.size, kl.size))
        scale = np.zeros((xin.size, kl.size))
        mant[:, 0], lsc[:, 0] = cur[:, 0], scale[:, 0]
        for j in range(1, kl.size):
            nxt = ((2 * j - 1 + order[None, :] - xn[:, None]) * cur - (j - 1 + order[None, :]) * prev) / j
            prev, cur = cur, nxt
            big = np.abs(cur) > 1e150
            if np.any(big):
                s = np.where(big, np.abs(cur), 1.0)
                cur, prev, scale = cur / s, prev / s, scale + np.log(s)
            mant[:, j], lsc[:, j] = cur[:, j], scale[:, j]
        base = -np.conj(xin)
        logmag = -0.5 * xn[:, None] + 0.5 * (lf[kl] - lf[n])[None, :] + order[None, :] * 0.5 * logx[:, None]
        ph = np.exp(1j * order[None, :] * np.angle(base)[:, None])
        res[:, : kl.size] = _signed_exp(mant, lsc + logmag) * ph

    out[nz] = res
    return out[0] if scalar else out


def _signed_exp(mant, logmag):
    with np.errstate(divide="ignore"):
        return np.sign(mant) * np.exp(logmag + np.log(np.abs(mant)))


def squeeze_element(m: int, k: int, g1: complex, g0: complex) -> complex:
    """``<m| exp(g1 K+) exp(g0 K0) exp(g1 K-) |k>`` as a finite j-sum.

    Only ``j <= min(m, k)`` with ``j`` of the parity of ``m`` and ``k``
    contribute; elements with ``m + k`` odd vanish. Each term is assembled
    in log space. The sum alternates in sign, so for indices beyond about
    60 (depending on ``|g1|``) :func:`squeeze_table` is the accurate route.
    """
    m, k = int(m), int(k)
    if m < 0 or k < 0:
        raise ValueError(f"indices must be >= 0, got ({m}, {k})")
    if (m + k) % 2:
        return 0j
    g1, g0 = complex(g1), complex(g0)
    if g1 == 0:
        return complex(np.exp(g0 / 4 + g0 * m / 2)) if m == k else 0j
    js = np.arange(min(m, k) % 2, min(m, k) + 1, 2)
    pm, pk = (m - js) // 2, (k - js) // 2
    log_half = cmath.log(g1 / 2)
    logt = (
        0.5 * (log_factorial(m) + log_factorial(k))
        - log_factorial(pm)
        - log_factorial(pk)
        - log_factorial(js)
        + (pm + pk) * log_half
        + g0 / 4
        + js * (g0 / 2)
    )
    return complex(np.sum(np.exp(logt)))


def squeeze_table(g1, g0=None, n_rows=1, n_cols=1, *, seed=None):
    """Matrix ``S[m, k]`` of the squeeze propagator for ``m < n_rows, k < n_cols``.

    Built from the contiguous relation of the j-sum,

        sqrt(m+1) S[m+1, k] = sqrt(k) exp(g0/2) S[m, k-1] + g1 sqrt(m) S[m-1, k],

    seeded with ``S[0, 0] = exp(g0/4)`` and closed with the symmetry
    ``S[m, k] = S[k, m]``. Every coefficient has modulus at most one for a
    unitary squeeze, which keeps the recursion accurate where the direct
    alternating sum cancels catastrophically.

    ``g1`` and ``g0`` may be 1-D arrays (one table per entry); pass
    ``seed`` and ``e2 = exp(g0/2)`` directly via ``g0=None, seed=(e4, e2)``
    to supply the exponentials without a logarithm.
    """
    g1 = np.atleast_1d(np.asarray(g1, dtype=complex))
    if seed is None:
        g0 = np.atleast_1d(np.asarray(g0, dtype=complex))
        e4, e2 = np.exp(g0 / 4), np.exp(g0 / 2)
    else:
        e4, e2 = (np.atleast_1d(np.asarray(v, dtype=complex)) for v in seed)
    if n_cols > n_rows:
        return np.swapaxes(squeeze_table(g1, n_rows=n_cols, n_cols=n_rows, seed=(e4, e2)), -1, -2)
    B = g1.size
    P = n_cols
    S = np.zeros((B, n_rows, n_cols), dtype=complex)
    if n_rows == 0 or n_cols == 0:
        return S
    sq = np.sqrt(np.arange(n_rows + 1, dtype=float))
    g1c, e2c = g1[:, None], e2[:, None]
    S[:, 0, 0] = e4
    # square block: lower triangle by recursion, upper by symmetry
    for m in range(P - 1):
        row = np.zeros((B, m + 2), dtype=complex)
        row[:, 1:] = sq[1 : m + 2] * e2c * S[:, m, : m + 1]
        if m > 0:
            row[:, : m] += g1c * sq[m] * S[:, m - 1, : m]
            row[:, m] += g1[:] * sq[m] * S[:, m, m - 1]
            row[:, m + 1] += g1[:] * sq[m] * row[:, m - 1] / sq[m + 1]
        row[:, : m + 1] /= sq[m + 1]
        row[:, m + 1] /= sq[m + 1]
        S[:, m + 1, : m + 2] = row
        S[:, : m + 2, m + 1] = row
    # rows beyond the square block only need columns < P
    ks = sq[1:P]
    for m in range(P - 1, n_rows - 1):
        nxt = np.zeros((B, P), dtype=complex)
        nxt[:, 1:] = ks * e2c * S[:, m, : P - 1]
        if m > 0:
            nxt += g1c * sq[m] * S[:, m - 1, :]
        S[:, m + 1, :] = nxt / sq[m + 1]
    return S


# ---------------------------------------------------------------------------
# Amplitudes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AmplitudeRow:
    """Field amplitudes ``Psi_{n0, m}(Z)`` for ``m < n_sites``."""

    n0: int
    Z: float
    amps: np.ndarray

    @property
    def intensity(self):
        return np.abs(self.amps) ** 2


def _cutoff(dcols, n0, ceiling):
    """Per-row k cutoff for the displacement columns ``dcols`` (B, K).

    Cuts after ``TAIL_RUN`` consecutive ``|d_k|`` below
    ``TAIL_RTOL * (||d_{<k}|| + 1e-30)`` past the input site. Since
    ``|S[m, k]| <= 1`` this bounds every omitted term of the k-sum.
    """
    mag = np.abs(dcols)
    run_norm = np.sqrt(np.cumsum(mag**2, axis=1))
    small = mag < TAIL_RTOL * (run_norm + 1e-30)
    small[:, : n0 + 1] = False
    K = dcols.shape[1]
    best = 0
    for b in range(dcols.shape[0]):
        run = 0
        cut = K
        for k in range(n0 + 1, K):
            run = run + 1 if small[b, k] else 0
            if run >= TAIL_RUN:
                cut = k + 1
                break
        best = max(best, cut)
    return best


def _general_batch(params, regime, Z, ceiling):
    """Displaced-squeeze sum for a batch of distances (any regime)."""
    n0, N = params.n0, params.n_sites
    xi = -_eta_any(params, regime, Z)
    nu = _nu_any(params, regime, Z)
    g1 = _g1(params, regime, Z)
    logw = _log_w(params, regime, Z)
    d = displacement_column(n0, xi, ceiling)
    K = _cutoff(d, n0, ceiling)
    S = squeeze_table(g1, n_rows=N, n_cols=K, seed=(np.exp(-0.5 * logw), np.exp(-logw)))
    psi = np.einsum("bmk,bk->bm", S, d[:, :K])
    return np.exp(-0.5 * nu)[:, None] * psi


def critical_amplitude_direct(params: LatticeParams, Z: float, K: int | None = None):
    """Critical-point amplitudes from the explicit double sum.

    Evaluates the ``gamma -> 0`` form literally: prefactor
    ``exp(-i alpha2 Z) exp(i pi/4) / sqrt(2 alpha2 Z + i)``, powers of
    ``-alpha2 Z / (2 alpha2 Z + i)`` and the j-sum in ``-i/(alpha2 Z)``,
    with the displacement ``d_{k,n}(i alpha1 Z)``. Requires
    ``lam = 2 alpha2 > 0`` and ``Z > 0``. Subject to the same cancellation
    as :func:`squeeze_element`; meant for moderate indices.
    """
    regime = classify_regime(params)
    if not regime.is_critical or params.alpha2 <= 0:
        raise RegimeDispatchError("critical_amplitude_direct needs lam = 2*alpha2 > 0")
    Z = float(Z)
    if Z <= 0:
        raise ValueError("critical_amplitude_direct needs Z > 0")
    a2 = params.alpha2
    N, n0 = params.n_sites, params.n0
    K = K or 4 * N
    pref = cmath.exp(-1j * a2 * Z) * cmath.exp(1j * math.pi / 4) / cmath.sqrt(2 * a2 * Z + 1j)
    log_r = cmath.log(-a2 * Z / (2 * a2 * Z + 1j))
    log_t = cmath.log(-1j / (a2 * Z))
    d = displacement_column(n0, 1j * params.alpha1 * Z, K)
    K = _cutoff(d[None, :], n0, K)
    psi = np.zeros(N, dtype=complex)
    for m in range(N):
        acc = 0j
        for k in range(m % 2, K, 2):
            if d[k] == 0:
                continue
            js = np.arange(min(m, k) % 2, min(m, k) + 1, 2)
            lt = (
                0.5 * (log_factorial(k) + log_factorial(m))
                + 0.5 * (k + m) * log_r
                + js * log_t
                - log_factorial(js)
                - log_factorial((k - js) // 2)
                - log_factorial((m - js) // 2)
            )
            acc += np.sum(np.exp(lt)) * d[k]
        psi[m] = pref * acc
    return psi


def _critical_batch(params, Z, ceiling):
    """Critical point, ``lam = 2 alpha2``: the limit prefactors of the double sum."""
    n0, N = params.n0, params.n_sites
    a2 = params.alpha2
    Z = np.asarray(Z, dtype=float)
    pref = np.exp(-1j * a2 * Z) * np.exp(1j * math.pi / 4) / np.sqrt(2 * a2 * Z + 1j)
    ratio = -a2 * Z / (2 * a2 * Z + 1j)  # g1 / 2
    # exp(g0/2) = ratio * (-i / (alpha2 Z)) = 1 / (1 - 2 i alpha2 Z)
    e2 = 1.0 / (1.0 - 2j * a2 * Z)
    d = displacement_column(n0, 1j * params.alpha1 * Z, ceiling)
    K = _cutoff(d, n0, ceiling)
    S = squeeze_table(2 * ratio, n_rows=N, n_cols=K, seed=(np.ones_like(e2), e2))
    return pref[:, None] * np.einsum("bmk,bk->bm", S, d[:, :K])


def _no_squeeze_batch(params, Z, ceiling):
    """``alpha2 = 0``: displaced number states with a linear phase ramp."""
    n0, N = params.n0, params.n_sites
    lam, a1 = params.lam, params.alpha1
    Z = np.asarray(Z, dtype=float)
    x = lam * Z
    small = np.abs(x) < 1e-2
    # (lam Z - sin lam Z)/lam^2 and the displacement argument, with lam -> 0 limits
    ph = np.empty_like(Z)
    ph[small] = lam * Z[small] ** 3 * _series(-x[small] ** 2, [1 / 6, 1 / 120, 1 / 5040, 1 / 362880])
    xs = Z * np.sinc(x / math.pi)
    if np.any(~small):
        ph[~small] = (x[~small] - np.sin(x[~small])) / lam**2
    real = np.empty_like(Z)
    real[small] = lam * Z[small] ** 2 * _series(-x[small] ** 2, [1 / 2, 1 / 24, 1 / 720, 1 / 40320])
    if np.any(~small):
        real[~small] = 2 * np.sin(0.5 * x[~small]) ** 2 / lam
    xi = a1 * (real + 1j * xs)
    d = displacement_column(n0, xi, N)
    m = np.arange(N)
    phase = np.exp(-1j * a1 * a1 * ph[:, None] + 1j * lam * m[None, :] * Z[:, None])
    return phase * d


def _no_shift_batch(params, regime, Z):
    """``alpha1 = 0``: squeezed number states, ``exp(-i lam Z/2) S[m, n0]``."""
    n0, N = params.n0, params.n_sites
    g1 = _g1(params, regime, Z)
    logw = _log_w(params, regime, Z)
    S = squeeze_table(g1, n_rows=N, n_cols=n0 + 1, seed=(np.exp(-0.5 * logw), np.exp(-logw)))
    return np.exp(-0.5j * params.lam * np.asarray(Z, dtype=float))[:, None] * S[:, :, n0]


def _route(params, regime):
    if params.alpha2 == 0:
        return "no_squeeze"
    if params.alpha1 == 0:
        return "no_shift"
    if regime.is_critical:
        return "critical"
    return "general"


def amplitude_map(params: LatticeParams, z_grid, *, batch=64, ceiling=None):
    """Amplitudes ``Psi_{n0, m}(Z)`` on a grid, shape ``(len(z_grid), n_sites)``.

    Dispatches to the special forms for ``alpha2 = 0`` (displaced number
    states), ``alpha1 = 0`` (squeezed number states) and the critical
    point, and to the general displaced-squeeze sum otherwise. The k-sum is
    cut adaptively with a ceiling of ``4 * n_sites``.
    """
    _check_beta(params)
    regime = classify_regime(params)
    z = np.atleast_1d(np.asarray(z_grid, dtype=float))
    if np.any(z < 0):
        raise ValueError("propagation distances must be >= 0")
    N = params.n_sites
    ceiling = ceiling or 4 * N
    out = np.zeros((z.size, N), dtype=complex)
    at0 = z == 0
    out[at0, params.n0] = 1.0
    idx = np.flatnonzero(~at0)
    route = _route(params, regime)
    for start in range(0, idx.size, batch):
        sel = idx[start : start + batch]
        zb = z[sel]
        if route == "no_squeeze":
            out[sel] = _no_squeeze_batch(params, zb, ceiling)
        elif route == "no_shift":
            out[sel] = _no_shift_batch(params, regime, zb)
        elif route == "critical":
            out[sel] = _critical_batch(params, zb, ceiling)
        else:
            out[sel] = _general_batch(params, regime, zb, ceiling)
    return out


def amplitude(params: LatticeParams, Z: float) -> AmplitudeRow:
    """Field amplitudes at distance ``Z`` for light injected at ``params.n0``."""
    return AmplitudeRow(params.n0, float(Z), amplitude_map(params, [Z])[0])


def dsn_distribution(params: LatticeParams, Z: float) -> np.ndarray:
    """Intensity of the displaced squeezed number state reached at ``lam = 0``.

    Uses the explicit hyperbolic form: squeeze factor
    ``((i/2) tanh 2a2Z)^((m+k)/2) / sqrt(cosh 2a2Z)``, the finite parity
    j-sum ``F`` in powers of ``-2i / sinh(2 a2 Z)``, and the displacement
    ``eta = (a1/2a2) [2 sinh^2(a2 Z) - i sinh(2 a2 Z)]``. The k-sum runs
    over the displacement support with the adaptive cutoff.
    """
    if params.lam != 0:
        raise RegimeDispatchError("dsn_distribution requires lambda = 0")
    if params.alpha2 == 0:
        raise RegimeDispatchError("dsn_distribution requires alpha2 != 0")
    n, N = params.n0, params.n_sites
    Z = float(Z)
    if Z == 0:
        out = np.zeros(N)
        out[n] = 1.0
        return out
    a1, a2 = params.alpha1, params.alpha2
    r = 2 * a2 * Z
    th, ch, sh = math.tanh(r), math.cosh(r), math.sinh(r)
    eta = (a1 / (2 * a2)) * (2 * math.sinh(a2 * Z) ** 2 - 1j * sh)
    x = abs(eta) ** 2
    ceiling = 4 * N
    # displacement factor e^{-x/2} sqrt(n!/k!) eta^(k-n) L_n^(k-n)(x) and its k < n mirror
    d = displacement_column(n, eta, ceiling)
    K = _cutoff(d[None, :], n, ceiling)
    d = d[:K]
    log_q = cmath.log(0.5j * th)
    log_t = cmath.log(-2j / sh)
    lf = log_factorial(np.arange(max(N, K) + 1))
    amp = np.zeros(N, dtype=complex)
    for m in range(N):
        acc = 0j
        for k in range(m % 2, K, 2):
            if d[k] == 0:
                continue
            js = np.arange(min(m, k) % 2, min(m, k) + 1, 2)
            lF = js * log_t - lf[js] - lf[(m - js) // 2] - lf[(k - js) // 2]
            pref = 0.5 * (lf[m] + lf[k]) + 0.5 * (m + k) * log_q - 0.5 * math.log(ch)
            acc += np.sum(np.exp(pref + lF)) * d[k]
        amp[m] = acc
    return np.abs(amp) ** 2
