"""Critical behaviour of the rank-1 inhomogeneous Curie-Weiss model and the
annealed Ising model on generalized random graphs."""

__version__ = "0.1.0"

from .criticality import (
    ExponentTable,
    FitResult,
    Regime,
    critical_beta,
    critical_beta_N,
    exponent_curve,
    exponent_table,
    fit_beta,
    fit_delta,
    fit_exponent,
    fit_gamma,
    fit_tau5_delta,
    gamma_amplitude,
)
from .errors import BracketError, ConfigError, CriticalDivergence, NumericalError, QuadratureError
from .meanfield import (
    FixedPointSolution,
    ThermoPoint,
    fixed_point_map,
    magnetization,
    solve_fixed_point,
    susceptibility,
    thermo_point,
)
from .model import ModelKind, ModelSpec, degree_pmf, edge_probability, grg_coupling, rank1_coupling
from .weights import (
    MomentSet,
    WeightSequence,
    empirical_moments,
    homogeneous_weights,
    limiting_moment,
    limiting_moments,
    make_powerlaw_weights,
)
