import cmath
import math

import numpy as np
import pytest
import scipy.linalg
from scipy.integrate import solve_ivp

from conftest import ALL_REGIME_SETS, BASELINE
from zigzag.analytic import (
    amplitude,
    amplitude_map,
    critical_amplitude_direct,
    disentangle,
    displacement_column,
    displacement_element,
    dsn_distribution,
    eval_eta,
    eval_eta_critical,
    eval_g1_g0,
    eval_nu,
    scalar_frame,
    squeeze_element,
    squeeze_table,
)
from zigzag.errors import OutOfScopeError, RegimeDispatchError
from zigzag.lattice import LatticeParams
from zigzag.numeric import (
    annihilation,
    displacement_oracle,
    k_minus,
    k_plus,
    k_zero,
    lattice_generator,
    matrix_exp_oracle,
    squeeze_oracle,
)


def propagator_column(params, Z, N=256):
    """Column ``n0`` of the dense propagator of the truncated lattice."""
    return matrix_exp_oracle(lattice_generator(params, N), Z)[:, params.n0]


# ---------------------------------------------------------------------------
# scalar coefficients
# ---------------------------------------------------------------------------


def test_eta_vanishes_at_origin():
    assert eval_eta(BASELINE, 0.0) == 0


def test_eta_without_gradient_matches_hyperbolic_form():
    got = eval_eta(LatticeParams(0.0, 1.0, 0.5), 1.0)
    assert got == pytest.approx(2 * math.sinh(0.5) ** 2 - 1j * math.sinh(1.0), rel=1e-14)


@pytest.mark.parametrize("params, Z", [(BASELINE, 1.0), (LatticeParams(0.0, 1.0, 0.5), 0.6),
                                       (LatticeParams(1.0, 0.3, 0.9), 0.4)])
def test_eta_reproduces_conjugated_frame_shift(params, Z):
    """Squeeze-conjugating the inverse frame shift adds eta to it."""
    # hyperbolic squeezing reaches far up the ladder, so the oracle is taken wide
    N = 512
    beta = params.alpha1 / (params.lam + 2 * params.alpha2)
    U = squeeze_oracle(params.lam, params.alpha2, Z, N)
    lhs = U.conj().T @ displacement_oracle(-beta, N) @ U
    rhs = displacement_oracle(-(beta + eval_eta(params, Z)), N)
    assert np.abs(lhs - rhs)[:60, :60].max() < 1e-7


def test_eta_critical_limit():
    p = LatticeParams(1.0, 0.1, 0.5)
    assert eval_eta_critical(p, 0.0) == 0
    h = 1e-6
    lo, hi = eval_eta(p.replace(lam=1 - h), 1.0), eval_eta(p.replace(lam=1 + h), 1.0)
    assert eval_eta_critical(p, 1.0) == pytest.approx(0.5 * (lo + hi), abs=1e-10)
    assert eval_eta_critical(p, 1.0) == pytest.approx(-0.1j)
    # linear in Z near the origin
    small = [abs(eval_eta_critical(p, z)) / z for z in (1e-6, 1e-4, 1e-2)]
    assert np.allclose(small, 0.1)
    with pytest.raises(RegimeDispatchError):
        eval_eta(p, 1.0)
    with pytest.raises(RegimeDispatchError):
        eval_eta_critical(BASELINE, 1.0)


def test_nu_examples():
    assert eval_nu(BASELINE, 0.0) == 0
    p = LatticeParams(2.0, 0.0, 0.5)
    for Z in (0.3, 1.7, 5.0):
        assert eval_nu(p, Z) == pytest.approx(2j * Z, rel=1e-14)
    nu = eval_nu(BASELINE, 2.6)
    assert abs(nu.real) < 1e-14
    assert abs(cmath.exp(-nu / 2)) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("params, Z", [(BASELINE, 2.6), (LatticeParams(0.0, 0.7, 0.4, 3), 0.9),
                                       (LatticeParams(1.0, 0.4, 0.9, 2), 0.5)])
def test_six_exponential_product_reproduces_amplitude(params, Z):
    """Normal-ordered product with the global factor, built from truncated matrices."""
    N = 256
    f = scalar_frame(params, Z)
    a = annihilation(N)
    expm = scipy.linalg.expm
    psi0 = np.zeros(N, dtype=complex)
    psi0[params.n0] = 1.0
    state = expm(np.conj(f.eta) * a) @ psi0
    state = expm(-f.eta * a.conj().T) @ state
    state = expm(f.g1 * k_minus(N)) @ state
    state = expm(f.g0 * k_zero(N)) @ state
    state = expm(f.g1 * k_plus(N)) @ state
    state *= np.exp(-f.nu / 2 - abs(f.eta) ** 2 / 2)
    amp = amplitude(params.replace(n_sites=60), Z).amps
    assert np.abs(state[:60] - amp).max() < 1e-8


def test_g1_g0_examples():
    assert eval_g1_g0(BASELINE, 0.0) == (0, 0)
    p = LatticeParams(0.0, 0.0, 1.0)
    for t in (0.1, 0.8, 2.5):
        g1, g0 = eval_g1_g0(p, t)
        assert g1 == pytest.approx(1j * math.tanh(2 * t), rel=1e-14)
        assert g0 == pytest.approx(-2 * math.log(math.cosh(2 * t)), rel=1e-14)
    g1, g0 = eval_g1_g0(LatticeParams(2.0, 0.0, 0.5), 1.0)
    d = disentangle(4.0, 1.0, 1.0)
    assert g1 == pytest.approx(1j * d.f, rel=1e-13)
    assert cmath.exp(g0) == pytest.approx(cmath.exp(1j * d.g), rel=1e-13)


def test_g0_is_continued_across_branch_cuts():
    """Long propagation in the oscillatory regime winds the log of w many times;
    the quarter power exp(g0/4) must stay continuous in Z."""
    p = LatticeParams(2.0, 0.0, 0.9)
    z = np.linspace(0.0, 30.0, 3001)
    _, g0 = eval_g1_g0(p, z)
    q = np.exp(g0 / 4)
    assert np.abs(np.diff(q)).max() < 0.05
    # pointwise evaluation at a distant Z agrees with the gridded continuation
    assert eval_g1_g0(p, 30.0)[1] == pytest.approx(g0[-1], rel=1e-12)


def test_disentangle_initial_and_double_root_values():
    d0 = disentangle(4.0, 1.0, 0.0)
    assert d0.f == 0 and d0.h == 0 and cmath.exp(1j * d0.g) == pytest.approx(1.0)
    d = disentangle(2.0, 1.0, 1.0)
    assert d.f == pytest.approx((1 + 1j) / 2, rel=1e-15)
    assert d.h == d.f


def test_disentangle_solves_riccati_system():
    chi, rate, Z = 4.0, 1.0, 0.3

    def rhs(_, y):
        f, g, h = y[0] + 1j * y[1], y[2] + 1j * y[3], y[4] + 1j * y[5]
        df = rate - rate * f * f + 1j * rate * chi * f
        dg = rate * chi + 2j * rate * f
        dh = rate * cmath.exp(1j * g)
        return [df.real, df.imag, dg.real, dg.imag, dh.real, dh.imag]

    sol = solve_ivp(rhs, (0, Z), [0.0] * 6, rtol=1e-12, atol=1e-14, method="DOP853")
    f = sol.y[0, -1] + 1j * sol.y[1, -1]
    g = sol.y[2, -1] + 1j * sol.y[3, -1]
    h = sol.y[4, -1] + 1j * sol.y[5, -1]
    d = disentangle(chi, rate, Z)
    assert d.f == pytest.approx(f, abs=1e-10)
    assert cmath.exp(1j * d.g) == pytest.approx(cmath.exp(1j * g), abs=1e-10)
    assert d.h == pytest.approx(h, abs=1e-10)


def test_disentangle_matches_operator_factorisation():
    N, chi, rate, Z = 200, 3.0, 0.8, 0.7
    Kp, Km, K0 = k_plus(N), k_minus(N), k_zero(N)
    d = disentangle(chi, rate, Z)
    lhs = scipy.linalg.expm(1j * rate * Z * (Kp + chi * K0 + Km))
    rhs = scipy.linalg.expm(1j * d.f * Kp) @ scipy.linalg.expm(1j * d.g * K0) @ scipy.linalg.expm(1j * d.h * Km)
    assert np.abs(lhs - rhs)[:30, :30].max() < 1e-10


# ---------------------------------------------------------------------------
# matrix elements
# ---------------------------------------------------------------------------


def test_displacement_element_examples():
    assert displacement_element(3, 3, 0) == 1 and displacement_element(2, 3, 0) == 0
    assert displacement_element(1, 0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)
    assert displacement_element(0, 1, 1.0) == pytest.approx(-math.exp(-0.5), rel=1e-15)
    D = displacement_oracle(1.0, 64)
    assert D[1, 0] == pytest.approx(math.exp(-0.5), abs=1e-12)
    assert D[0, 1] == pytest.approx(-math.exp(-0.5), abs=1e-12)


@pytest.mark.parametrize("eta", [0.3 - 0.8j, 1.7 + 0.4j, -2.2j])
def test_displacement_column_matches_elements(eta):
    for n in (0, 4, 11):
        col = displacement_column(n, eta, 40)
        ref = [displacement_element(k, n, eta) for k in range(40)]
        assert np.allclose(col, ref, rtol=1e-12, atol=1e-300)


def test_displacement_composition_identity():
    N, chi, gam = 256, 0.6 - 0.3j, -0.4 + 0.9j
    table = lambda e: np.array([[displacement_element(m, n, e) for n in range(30)] for m in range(30)])
    lhs = (displacement_oracle(chi, N) @ displacement_oracle(gam, N))[:30, :30]
    rhs = np.exp((chi * np.conj(gam) - np.conj(chi) * gam) / 2) * table(chi + gam)
    assert np.abs(lhs - rhs).max() < 1e-8
    assert np.abs(table(chi) @ table(gam) - lhs)[:15, :15].max() < 1e-8


def test_squeeze_element_examples():
    assert squeeze_element(3, 3, 0, 0) == 1 and squeeze_element(3, 1, 0, 0) == 0
    assert squeeze_element(1, 0, 0.3 + 0.1j, -0.2j) == 0
    g1, g0 = eval_g1_g0(LatticeParams(2.0, 0.0, 0.5), 0.7)
    U = squeeze_oracle(2.0, 0.5, 0.7, 256)
    assert squeeze_element(4, 2, g1, g0) == pytest.approx(U[4, 2], abs=1e-12)


def test_squeeze_oracle_generator_convention():
    """``K+ + K- + 4 K0`` at unit time is the squeeze for lam = 2, alpha2 = 1/2, Z = 1."""
    N = 256
    U = matrix_exp_oracle(k_plus(N) + k_minus(N) + 4 * k_zero(N), 1.0)
    g1, g0 = eval_g1_g0(LatticeParams(2.0, 0.0, 0.5), 1.0)
    table = np.array([[squeeze_element(m, k, g1, g0) for k in range(20)] for m in range(20)])
    assert np.abs(U[:20, :20] - table).max() < 1e-8


@pytest.mark.parametrize("lam, a2", ALL_REGIME_SETS[:3] + ALL_REGIME_SETS[3:6])
def test_squeeze_parity_and_symmetry(lam, a2):
    g1, g0 = eval_g1_g0(LatticeParams(lam, 0.0, a2), 0.9)
    for m in range(15):
        for k in range(15):
            s = squeeze_element(m, k, g1, g0)
            if (m + k) % 2:
                assert s == 0
            else:
                assert s == pytest.approx(squeeze_element(k, m, g1, g0), rel=1e-13)


def test_squeeze_table_matches_direct_sum_and_oracle():
    p = LatticeParams(2.0, 0.0, 0.5)
    g1, g0 = eval_g1_g0(p, 1.3)
    tab = squeeze_table(g1, g0, 45, 30)[0]
    direct = np.array([[squeeze_element(m, k, g1, g0) for k in range(30)] for m in range(45)])
    assert np.abs(tab - direct).max() < 1e-11
    # at large indices the direct alternating sum cancels; the recursion tracks the oracle
    U = squeeze_oracle(2.0, 0.5, 1.3, 512)
    big = squeeze_table(g1, g0, 150, 150)[0]
    assert np.abs(big - U[:150, :150]).max() < 1e-9


# ---------------------------------------------------------------------------
# amplitudes
# ---------------------------------------------------------------------------


def test_amplitude_at_origin_is_launch_site():
    row = amplitude(BASELINE, 0.0)
    expected = np.zeros(200)
    expected[10] = 1
    assert np.array_equal(row.amps, expected)


@pytest.mark.parametrize(
    "params, Z",
    [
        (LatticeParams(2.0, 0.1, 0.5, 10, 120), 2.6),
        (LatticeParams(0.5, 0.3, 0.6, 4, 120), 0.8),
        (LatticeParams(2.0, 1.0, 0.0, 6, 120), 1.9),
        (LatticeParams(0.0, 1.0, 0.0, 2, 120), 1.2),
        (LatticeParams(2.0, 0.0, 0.5, 3, 120), 10.0),
        (LatticeParams(1.0, 0.2, 0.5, 5, 120), 0.7),
        (LatticeParams(3.0, 2.0, -0.4, 0, 120), 1.1),
    ],
    ids=["trig", "hyper", "no-squeeze", "no-gradient-no-squeeze", "no-shift-long", "critical", "negative-a2"],
)
def test_amplitude_matches_dense_propagator(params, Z):
    ref = propagator_column(params, Z, 400)[: params.n_sites]
    assert np.abs(amplitude(params, Z).amps - ref).max() < 1e-9


def test_zero_gradient_without_squeeze_is_pure_displacement():
    p = LatticeParams(0.0, 1.0, 0.0, 3, 60)
    Z = 1.4
    amps = amplitude(p, Z).amps
    ref = [displacement_element(m, 3, 1j * Z) for m in range(60)]
    assert np.abs(amps - ref).max() < 1e-13
    # and the small-gradient form joins on continuously
    near = amplitude(p.replace(lam=1e-7), Z).amps
    assert np.abs(np.abs(near) - np.abs(amps)).max() < 1e-6


def test_no_shift_case_is_phase_times_squeeze():
    p = LatticeParams(2.0, 0.0, 0.5, 4, 60)
    Z = 0.9
    g1, g0 = eval_g1_g0(p, Z)
    ref = [cmath.exp(-1j * p.lam * Z / 2) * squeeze_element(m, 4, g1, g0) for m in range(60)]
    assert np.abs(amplitude(p, Z).amps - ref).max() < 1e-13


def test_squeezed_vacuum_distribution():
    p = LatticeParams(0.0, 0.0, 1.0, 0, 80)
    Z = 0.4
    inten = amplitude(p, Z).intensity
    assert np.all(inten[1::2] == 0)
    r = 2 * Z
    j = np.arange(40)
    logp = (np.array([math.lgamma(2 * i + 1) - 2 * math.lgamma(i + 1) for i in j]) - j * math.log(4)
            + 2 * j * math.log(math.tanh(r)) - math.log(math.cosh(r)))
    assert np.abs(inten[0::2] - np.exp(logp)).max() < 1e-14


@pytest.mark.parametrize("n0", [0, 5, 10])
def test_critical_branch_is_limit_of_general_form(n0):
    base = LatticeParams(1.0, 0.3, 0.5, n0, 40)
    Z = 1.1
    crit = amplitude(base, Z).amps
    for lam in (1 - 1e-5, 1 + 1e-5):
        assert np.abs(amplitude(base.replace(lam=lam), Z).amps - crit).max() < 1e-3


def test_critical_double_sum_matches_fast_path():
    p = LatticeParams(1.0, 0.3, 0.5, 5, 40)
    for Z in (0.3, 1.1, 2.0):
        assert np.abs(critical_amplitude_direct(p, Z) - amplitude(p, Z).amps).max() < 1e-11


def test_amplitude_map_matches_pointwise():
    z = np.array([0.0, 0.4, 1.3, 2.6])
    grid = amplitude_map(BASELINE, z)
    for i, Z in enumerate(z):
        assert np.abs(grid[i] - amplitude(BASELINE, Z).amps).max() < 1e-13


def test_shifted_potential_case_raises():
    with pytest.raises(OutOfScopeError):
        amplitude(LatticeParams(1.0, 0.3, -0.5), 1.0)


# ---------------------------------------------------------------------------
# displaced squeezed number states
# ---------------------------------------------------------------------------


def test_dsn_examples():
    p = LatticeParams(0.0, 1.0, 0.5, 0, 200)
    delta = np.zeros(200)
    delta[0] = 1
    assert np.array_equal(dsn_distribution(p, 0.0), delta)
    assert np.abs(dsn_distribution(p, 0.8) - amplitude(p, 0.8).intensity).max() < 1e-9
    assert dsn_distribution(p.replace(n0=2), 0.5).sum() == pytest.approx(1.0, abs=1e-10)


def test_dsn_requires_zero_gradient():
    with pytest.raises(RegimeDispatchError):
        dsn_distribution(BASELINE, 1.0)
    with pytest.raises(RegimeDispatchError):
        dsn_distribution(LatticeParams(0.0, 1.0, 0.0), 1.0)
