"""Light propagation in a semi-infinite zigzag waveguide array with a
linear propagation-constant gradient: closed-form amplitudes, a direct
Runge-Kutta-Fehlberg integrator, and tooling to compare the two."""

from .analytic import amplitude, amplitude_map, dsn_distribution
from .compare import ComparisonReport, compare_maps, run_analytic, run_compare, run_numeric
from .errors import (
    InvalidParameterError,
    OutOfScopeError,
    RegimeDispatchError,
    SingularPointError,
    StiffnessError,
    ZigzagError,
)
from .lattice import LatticeParams, PhysicalLattice, Regime, RegimeKind, classify_regime
from .maps import IntensityMap
from .numeric import IntegratorConfig, OdeSystem, integrate
from .periods import PeriodEstimate, bloch_period, formula_period, period_doubling_scan
from .plotscript import emit_plot_script

__version__ = "0.1.0"
