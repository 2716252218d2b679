"""Direct numerical integration of the coupled-mode equations and dense
matrix-exponential oracles on a truncated Fock space.

Nothing here uses the closed-form machinery of :mod:`zigzag.analytic`; it is
the independent reference the closed form is checked against.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import InvalidParameterError, ResourceError, StiffnessError
from .lattice import LatticeParams

__all__ = [
    "OdeSystem",
    "IntegratorConfig",
    "FieldState",
    "Trajectory",
    "rhs",
    "integrate",
    "matrix_exp_oracle",
    "truncation_check",
    "annihilation",
    "creation",
    "number",
    "k_plus",
    "k_minus",
    "k_zero",
    "lattice_generator",
    "squeeze_generator",
    "displacement_oracle",
    "squeeze_oracle",
    "ORACLE_MAX_DIM",
]

ORACLE_MAX_DIM = 1024
MIN_STEP = 1e-12


# ---------------------------------------------------------------------------
# Truncated ladder operators
# ---------------------------------------------------------------------------


def annihilation(N):
    """``a`` on the first ``N`` Fock states: ``a|n> = sqrt(n)|n-1>``."""
    return np.diag(np.sqrt(np.arange(1, N, dtype=float)), 1).astype(complex)


def creation(N):
    return annihilation(N).T.copy()


def number(N):
    return np.diag(np.arange(N, dtype=float)).astype(complex)


def k_plus(N):
    """``K+ = a+^2 / 2``, built from exact two-step matrix elements."""
    n = np.arange(N - 2, dtype=float)
    return np.diag(0.5 * np.sqrt((n + 1) * (n + 2)), -2).astype(complex)


def k_minus(N):
    return k_plus(N).T.copy()


def k_zero(N):
    """``K0 = (n + 1/2) / 2``."""
    return np.diag(0.5 * (np.arange(N, dtype=float) + 0.5)).astype(complex)


def lattice_generator(params: LatticeParams, N=None):
    """Hermitian ``M`` with ``i dPsi/dZ = -M Psi`` on ``N`` sites."""
    N = params.n_sites if N is None else N
    n = np.arange(N, dtype=float)
    M = np.diag(params.lam * n).astype(complex)
    c1 = params.alpha1 * np.sqrt(n[1:])
    c2 = params.alpha2 * np.sqrt(n[2:] * (n[2:] - 1))
    M += np.diag(c1, 1) + np.diag(c1, -1) + np.diag(c2, 2) + np.diag(c2, -2)
    return M


def squeeze_generator(lam, alpha2, N):
    """``2 alpha2 H = alpha2 (a+^2 + a^2) + lam (n + 1/2)``."""
    return 2 * alpha2 * (k_plus(N) + k_minus(N)) + 2 * lam * k_zero(N)


# ---------------------------------------------------------------------------
# Matrix exponentials
# ---------------------------------------------------------------------------


def matrix_exp_oracle(generator, t):
    """``exp(i t G)`` for a dense square ``G``.

    Hermitian generators go through an eigendecomposition (unitary to
    rounding); anything else through scaling-and-squaring Pade.
    """
    G = np.asarray(generator, dtype=complex)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"generator must be square, got shape {G.shape}")
    if G.shape[0] > ORACLE_MAX_DIM:
        raise ResourceError(f"oracle dimension {G.shape[0]} exceeds cap {ORACLE_MAX_DIM}")
    if t == 0:
        return np.eye(G.shape[0], dtype=complex)
    if np.array_equal(G, G.conj().T):
        w, V = np.linalg.eigh(G)
        return (V * np.exp(1j * t * w)) @ V.conj().T
    return scipy.linalg.expm(1j * t * G)


def displacement_oracle(eta, N):
    """Dense ``exp(eta a+ - eta* a)`` truncated to ``N`` states."""
    a = annihilation(N)
    gen = -1j * (eta * a.conj().T - np.conj(eta) * a)
    return matrix_exp_oracle(gen, 1.0)


def squeeze_oracle(lam, alpha2, Z, N):
    """Dense ``exp(2 i alpha2 H Z)`` truncated to ``N`` states."""
    return matrix_exp_oracle(squeeze_generator(lam, alpha2, N), Z)


# ---------------------------------------------------------------------------
# Coupled-mode ODE
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdeSystem:
    """Truncated coupled-mode system; guides at or beyond ``n_sites`` are absent."""

    params: LatticeParams
    _c1: np.ndarray = field(init=False, repr=False, compare=False)
    _c2: np.ndarray = field(init=False, repr=False, compare=False)
    _diag: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = np.arange(self.dimension, dtype=float)
        object.__setattr__(self, "_diag", self.params.lam * n)
        object.__setattr__(self, "_c1", self.params.alpha1 * np.sqrt(n[1:]))
        object.__setattr__(self, "_c2", self.params.alpha2 * np.sqrt(n[2:] * (n[2:] - 1)))

    @property
    def dimension(self):
        return self.params.n_sites

    def matrix(self):
        return lattice_generator(self.params)

    def apply(self, psi):
        """``M psi`` using the banded structure."""
        out = self._diag * psi
        c1, c2 = self._c1, self._c2
        out[1:] += c1 * psi[:-1]
        out[:-1] += c1 * psi[1:]
        out[2:] += c2 * psi[:-2]
        out[:-2] += c2 * psi[2:]
        return out

    def __call__(self, z, psi):
        return 1j * self.apply(psi)


def rhs(state, params: LatticeParams):
    """``dPsi/dZ = i M Psi`` with the semi-infinite edge at site 0 and a hard
    cut after ``n_sites``."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (params.n_sites,):
        raise ValueError(f"state must have length n_sites={params.n_sites}, got {state.shape}")
    return OdeSystem(params)(0.0, state)


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control for the embedded Runge-Kutta-Fehlberg 4(5) pair."""

    rel_tol: float = 1e-11
    abs_tol: float = 1e-11
    initial_step: float = 1e-3
    max_step: float = 0.1

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "initial_step", "max_step"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise InvalidParameterError(name, f"must be a positive finite number, got {v!r}")

    def as_dict(self):
        return {
            "method": "RKF45",
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "initial_step": self.initial_step,
            "max_step": self.max_step,
        }


@dataclass(frozen=True)
class FieldState:
    Z: float
    amps: np.ndarray
    norm_drift: float


@dataclass(frozen=True)
class Trajectory(Sequence):
    """Field states on the requested grid plus step statistics."""

    z: np.ndarray
    amps: np.ndarray
    norm_drift: np.ndarray
    n_steps: int
    n_rejected: int
    config: IntegratorConfig

    def __len__(self):
        return len(self.z)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return FieldState(float(self.z[i]), self.amps[i], float(self.norm_drift[i]))

    @property
    def intensity(self):
        return np.abs(self.amps) ** 2


# Fehlberg tableau
_C = np.array([0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2])
_A = [
    [],
    [1 / 4],
    [3 / 32, 9 / 32],
    [1932 / 2197, -7200 / 2197, 7296 / 2197],
    [439 / 216, -8.0, 3680 / 513, -845 / 4104],
    [-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40],
]
_B4 = np.array([25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0])
_B5 = np.array([16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55])
_E = _B5 - _B4


def _rkf_step(f, z, y, h):
    k = []
    for i in range(6):
        yi = y
        for j, a in enumerate(_A[i]):
            if a:
                yi = yi + h * a * k[j]
        k.append(f(z + _C[i] * h, yi))
    y5 = y + h * sum(b * kk for b, kk in zip(_B5, k) if b)
    err = h * sum(e * kk for e, kk in zip(_E, k) if e)
    return y5, err


def integrate(system: OdeSystem, cfg: IntegratorConfig | None = None, z_grid=(0.0,), initial=None) -> Trajectory:
    """Integrate from ``Z = 0`` and report the field at every grid point.

    The fifth-order solution is propagated and the embedded fourth-order
    one drives the step size through a mixed absolute/relative max norm.
    Steps are shortened to land exactly on each requested distance.
    ``initial`` defaults to a unit excitation at ``params.n0``.
    """
    cfg = cfg or IntegratorConfig()
    z_grid = np.atleast_1d(np.asarray(z_grid, dtype=float))
    if z_grid.size == 0:
        raise ValueError("z_grid is empty")
    if z_grid[0] < 0 or np.any(np.diff(z_grid) < 0):
        raise ValueError("z_grid must be sorted and start at Z >= 0")
    N = system.dimension
    if initial is None:
        y = np.zeros(N, dtype=complex)
        y[system.params.n0] = 1.0
    else:
        y = np.array(initial, dtype=complex)
        if y.shape != (N,):
            raise ValueError(f"initial state must have length {N}")
    norm0 = float(np.vdot(y, y).real)
    out = np.empty((z_grid.size, N), dtype=complex)
    drift = np.empty(z_grid.size)
    z = 0.0
    h = min(cfg.initial_step, cfg.max_step)
    n_steps = n_rej = 0
    for i, target in enumerate(z_grid):
        while z < target:
            h_try = min(h, cfg.max_step, target - z)
            y_new, err = _rkf_step(system, z, y, h_try)
            scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
            enorm = float(np.max(np.abs(err) / scale))
            if enorm <= 1.0:
                z = target if h_try == target - z else z + h_try
                y = y_new
                n_steps += 1
                fac = 5.0 if enorm == 0 else min(5.0, max(0.2, 0.9 * enorm**-0.2))
                # a step clipped to hit the grid must not shrink the next one
                h = max(h, h_try * fac) if h_try < h else h_try * fac
            else:
                n_rej += 1
                h = h_try * max(0.2, 0.9 * enorm**-0.2)
            if h < MIN_STEP:
                raise StiffnessError(f"step size fell below {MIN_STEP:g} at Z={z!r}")
        out[i] = y
        drift[i] = abs(float(np.vdot(y, y).real) - norm0)
    return Trajectory(z_grid, out, drift, n_steps, n_rej, cfg)


def truncation_check(params: LatticeParams, Z_max: float, n_sites: int | None = None, *, n_points=61, cfg=None):
    """Largest intensity on the last five guides over ``[0, Z_max]``.

    Values below ``1e-8`` certify that the truncated array behaves like the
    semi-infinite one for comparison purposes.
    """
    if n_sites is not None and n_sites != params.n_sites:
        params = params.replace(n_sites=n_sites)
    traj = integrate(OdeSystem(params), cfg, np.linspace(0.0, Z_max, n_points))
    edge = max(0, params.n_sites - 5)
    return float(np.max(np.sum(traj.intensity[:, edge:], axis=1)))
