"""Parameters, geometry and regime classification of the zigzag array.

Site indices are 0-based: site ``n`` is the ``n``-th guide counted from
the edge of the semi-infinite array.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import InvalidParameterError, OutOfScopeError

__all__ = [
    "CRITICAL_RTOL",
    "PhysicalLattice",
    "LatticeParams",
    "RegimeKind",
    "Regime",
    "to_dimensionless",
    "coupling_profile",
    "classify_regime",
]

#: relative band around ``4 alpha2**2 == lam**2`` treated as the critical point
CRITICAL_RTOL = 1e-12


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidParameterError(name, f"must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class PhysicalLattice:
    """Physical description of the array.

    Parameters
    ----------
    mu : float
        Base propagation constant (1/length).
    alpha0 : float
        Linear propagation-constant gradient per site (1/length).
    C : float
        Base coupling constant (1/length).
    kappa : float
        Decay length of the evanescent coupling.
    d1, d2 : float
        Reference first- and second-neighbour spacings.
    """

    mu: float
    alpha0: float
    C: float
    kappa: float = 1.0
    d1: float = 1.0
    d2: float = 2.0

    def __post_init__(self):
        for name in ("mu", "alpha0", "C", "kappa", "d1", "d2"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.C <= 0:
            raise InvalidParameterError("C", f"coupling constant must be > 0, got {self.C}")
        for name in ("kappa", "d1", "d2"):
            if getattr(self, name) <= 0:
                raise InvalidParameterError(name, f"must be > 0, got {getattr(self, name)}")


@dataclass(frozen=True)
class LatticeParams:
    """Dimensionless lattice parameters plus truncation and input site.

    ``lam`` is the normalised gradient (``alpha0 / C``), ``alpha1`` and
    ``alpha2`` modulate the first- and second-neighbour couplings, ``n0`` is
    the excited guide and ``n_sites`` the number of guides kept.
    """

    lam: float
    alpha1: float
    alpha2: float
    n0: int = 0
    n_sites: int = 200

    def __post_init__(self):
        object.__setattr__(self, "lam", _finite("lambda", self.lam))
        object.__setattr__(self, "alpha1", _finite("alpha1", self.alpha1))
        object.__setattr__(self, "alpha2", _finite("alpha2", self.alpha2))
        for name in ("n0", "n_sites"):
            value = getattr(self, name)
            if int(value) != value:
                raise InvalidParameterError(name, f"must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.lam < 0:
            raise InvalidParameterError("lambda", f"must be >= 0, got {self.lam}")
        if self.n_sites < 1:
            raise InvalidParameterError("n_sites", f"must be >= 1, got {self.n_sites}")
        if not 0 <= self.n0 < self.n_sites:
            raise InvalidParameterError(
                "n0", f"must satisfy 0 <= n0 < n_sites={self.n_sites}, got {self.n0}"
            )
        if self.alpha1 != 0 and self.alpha2 != 0 and self.beta_singular:
            raise OutOfScopeError(
                "alpha2",
                "lambda + 2*alpha2 = 0 with alpha1 != 0 is the shifted linear "
                "potential case, which this package does not implement",
            )

    @property
    def beta_singular(self):
        """True when ``lam + 2 alpha2`` vanishes (to the critical tolerance)."""
        return abs(self.lam + 2 * self.alpha2) <= CRITICAL_RTOL * max(1.0, self.lam)

    def replace(self, **changes):
        """Return a copy with ``changes`` applied (validated again)."""
        fields = dict(
            lam=self.lam, alpha1=self.alpha1, alpha2=self.alpha2, n0=self.n0, n_sites=self.n_sites
        )
        fields.update(changes)
        return LatticeParams(**fields)

    def as_dict(self):
        return {
            "lambda": self.lam,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "n0": self.n0,
            "n_sites": self.n_sites,
        }


class RegimeKind(str, enum.Enum):
    HYPERBOLIC = "Hyperbolic"
    TRIGONOMETRIC = "Trigonometric"
    CRITICAL = "Critical"


@dataclass(frozen=True)
class Regime:
    """Dynamical regime and the value of ``gamma = sqrt(4 alpha2**2 - lam**2)``.

    ``gamma_sq`` keeps the exact discriminant; every closed-form expression
    downstream is an even function of ``gamma`` and is evaluated from it.
    """

    kind: RegimeKind
    gamma: complex
    gamma_sq: float

    @property
    def is_critical(self):
        return self.kind is RegimeKind.CRITICAL


def to_dimensionless(phys: PhysicalLattice, z: float) -> tuple[float, float]:
    """Map a physical lattice and distance to ``(lam, Z)``.

    ``lam = alpha0 / C`` and ``Z = C z``.
    """
    if phys.C == 0:
        raise InvalidParameterError("C", "coupling constant must be nonzero")
    return phys.alpha0 / phys.C, phys.C * float(z)


def coupling_profile(phys: PhysicalLattice, n: int) -> tuple[float, float]:
    """First- and second-neighbour couplings of site ``n`` from the spacing law.

    The spacings shrink logarithmically with the site index,
    ``d1_n = d1 - (kappa/2) ln n`` and ``d2_n = d2 - (kappa/2) ln n(n-1)``,
    and the coupling decays exponentially with the excess spacing. The
    composition yields ``C sqrt(n)`` and ``C sqrt(n(n-1))``. Couplings that
    would reach past the edge of the array are zero.
    """
    n = int(n)
    c1 = c2 = 0.0
    # the excess spacings d_n - d are formed directly: subtracting d from
    # d_n would cancel badly when d >> kappa
    if n >= 1:
        excess1 = -0.5 * phys.kappa * math.log(n)
        c1 = phys.C * math.exp(-excess1 / phys.kappa)
    if n >= 2:
        excess2 = -0.5 * phys.kappa * math.log(n * (n - 1))
        c2 = phys.C * math.exp(-excess2 / phys.kappa)
    return c1, c2


def classify_regime(params: LatticeParams) -> Regime:
    """Classify the sign of ``4 alpha2**2 - lam**2``.

    Real ``gamma`` (hyperbolic) means unbounded spreading, imaginary
    ``gamma`` (trigonometric) means Bloch-like revivals. Values inside a
    relative band of ``CRITICAL_RTOL`` are snapped to the critical point.
    """
    a2sq = 4.0 * params.alpha2**2
    lsq = params.lam**2
    disc = a2sq - lsq
    if abs(disc) <= CRITICAL_RTOL * max(1.0, a2sq, lsq):
        return Regime(RegimeKind.CRITICAL, 0j, 0.0)
    if disc > 0:
        return Regime(RegimeKind.HYPERBOLIC, complex(math.sqrt(disc), 0.0), disc)
    return Regime(RegimeKind.TRIGONOMETRIC, complex(0.0, math.sqrt(-disc)), disc)
