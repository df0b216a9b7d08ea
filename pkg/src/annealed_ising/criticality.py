"""Critical points, the exponent table, regression fits and amplitudes.

Exponents describe how the mean-field magnetization and susceptibility
behave near the critical coupling theta * nu = 1:

    M(beta_c, B)      ~ B^(1/delta)
    M(beta, 0+)       ~ (beta - beta_c)^beta_exp
    chi(beta, 0+)     ~ |beta - beta_c|^-gamma

The curves come from :mod:`annealed_ising.meanfield`; fits are plain
least squares on transformed coordinates.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError
from .meanfield import thermo_point, weight_law
from .model import ModelKind, ModelSpec
from .weights import MomentSet, WeightSequence, empirical_moments


@dataclass(frozen=True)
class Regime:
    """Universality class of the weight law.

    ``name`` is ``"finite_fourth"`` (E[W^4] < inf), ``"powerlaw"`` with
    ``tau`` in (3, 5), or ``"tau5_logcorrected"``.
    """

    name: str
    tau: float | None = None

    @classmethod
    def finite_fourth(cls) -> "Regime":
        return cls("finite_fourth")

    @classmethod
    def from_tau(cls, tau: float | None) -> "Regime":
        """Regime of a power law with exponent tau (``None`` means light tails)."""
        if tau is None or tau > 5:
            return cls("finite_fourth")
        if tau == 5:
            return cls("tau5_logcorrected", 5.0)
        if tau <= 3:
            raise ConfigError(f"no critical behaviour for tau <= 3 (got {tau}): nu is infinite")
        return cls("powerlaw", float(tau))

    @classmethod
    def of(cls, source) -> "Regime":
        """Regime of a weight source: finite vectors have all moments finite."""
        if isinstance(source, MomentSet) and source.source == "limiting":
            return cls.from_tau(source.tau)
        law = weight_law(source)
        return cls.from_tau(getattr(law, "tau", None))

    def __str__(self):
        return self.name if self.tau is None else f"{self.name}({self.tau:g})"


@dataclass(frozen=True)
class ExponentTable:
    beta_exp: float
    delta_exp: float
    gamma_exp: float
    gamma_prime_exp: float
    regime: Regime

    @property
    def lam(self) -> float:
        """Scaling exponent of the total spin, delta / (delta + 1)."""
        return self.delta_exp / (self.delta_exp + 1.0)

    @property
    def window_exponent(self) -> float:
        """(delta - 1) / (delta + 1): width N^-(...) of the critical window."""
        return (self.delta_exp - 1.0) / (self.delta_exp + 1.0)


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    r_squared: float
    window: tuple[float, float]


def critical_beta(kind: ModelKind, nu: float) -> float:
    """beta_c = asinh(1/nu) for the annealed GRG, 1/nu for the ICW."""
    if not nu > 0:
        raise ConfigError(f"nu must be positive, got {nu}")
    return kind.beta_from_coupling(1.0 / nu)


def critical_beta_N(kind: ModelKind, ws: WeightSequence) -> float:
    """Finite-size critical inverse temperature from the empirical nu_N."""
    return critical_beta(kind, empirical_moments(ws).nu)


def exponent_table(regime: Regime) -> ExponentTable:
    if regime.name == "finite_fourth":
        return ExponentTable(0.5, 3.0, 1.0, 1.0, regime)
    if regime.name == "tau5_logcorrected":
        # same powers as the light-tailed case, up to logarithmic factors
        return ExponentTable(0.5, 3.0, 1.0, 1.0, regime)
    if regime.name == "powerlaw":
        tau = regime.tau
        if not (tau is not None and 3 < tau < 5):
            raise ConfigError(f"powerlaw regime needs tau in (3, 5), got {tau}")
        return ExponentTable(1.0 / (tau - 3.0), tau - 2.0, 1.0, 1.0, regime)
    raise ConfigError(f"unknown regime {regime.name!r}")


def fit_exponent(points, transform="loglog") -> FitResult:
    """Least-squares slope on transformed coordinates.

    Parameters
    ----------
    points : sequence of (x, y), x and y > 0
    transform : "loglog" or ("logcorrected", p)
        ``loglog`` regresses log y on log x. ``("logcorrected", p)``
        regresses log y on p * log(x / log(1/x)), so a curve behaving like
        (x / log(1/x))^p gives slope 1; it needs x < 1.

    Returns
    -------
    FitResult
        ``window`` is the range of the untransformed x.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise ConfigError("need at least three (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(pts)):
        raise ConfigError("fit points must be finite and positive")
    if transform == "loglog":
        u = np.log(x)
    elif isinstance(transform, tuple) and transform[0] == "logcorrected":
        if np.any(x >= 1):
            raise ConfigError("log-corrected fit needs x < 1")
        u = transform[1] * np.log(x / np.log(1.0 / x))
    else:
        raise ConfigError(f"unknown transform {transform!r}")
    v = np.log(y)
    slope, intercept = np.polyfit(u, v, 1)
    ss_res = float(np.sum((v - (slope * u + intercept)) ** 2))
    ss_tot = float(np.sum((v - v.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return FitResult(float(slope), float(intercept), min(max(r2, 0.0), 1.0), (float(x.min()), float(x.max())))


def gamma_amplitude(mom: MomentSet, kind: ModelKind = ModelKind.ANNEALED_GRG) -> float:
    """lim (beta_c - beta) chi(beta, 0+) = m1^2 / m2 * tanh(beta_c), annealed GRG only."""
    if kind is not ModelKind.ANNEALED_GRG:
        raise ConfigError("the susceptibility amplitude is only available for the annealed GRG")
    return mom.m1**2 / mom.m2 * math.tanh(critical_beta(kind, mom.nu))


def _grid(lo, hi, per_decade=12):
    k = max(3, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, k)


def field_curve(kind: ModelKind, source, beta: float, b_values, tol: float = 1e-12):
    """ThermoPoints along B at fixed beta."""
    law = weight_law(source)
    return [thermo_point(ModelSpec(kind, beta, float(b)), law, tol) for b in b_values]


def temperature_curve(kind: ModelKind, source, betas, b_field: float = 0.0, tol: float = 1e-12):
    """ThermoPoints along beta at fixed B."""
    law = weight_law(source)
    return [thermo_point(ModelSpec(kind, float(b), b_field), law, tol) for b in betas]


_CURVES = {
    # name: (default window, transform, sweep)
    "delta": ((1e-6, 1e-3), "loglog", "field"),
    "beta": ((1e-5, 1e-2), "loglog", "above"),
    "gamma": ((1e-5, 1e-2), "loglog", "below"),
    "gamma-prime": ((1e-5, 1e-2), "loglog", "above"),
    "tau5": ((1e-6, 1e-3), ("logcorrected", 1.0 / 3.0), "field"),
}


def exponent_curve(name, kind, source, window=None, per_decade=12, tol=1e-12):
    """Points (x, y) and the regression transform behind each exponent fit.

    ``delta`` and ``tau5``: x = B, y = M(beta_c, B). ``beta``: x = beta -
    beta_c, y = M(beta, 0+). ``gamma`` / ``gamma-prime``: x = |beta -
    beta_c| below / above beta_c, y = chi(beta, 0+).
    """
    if name not in _CURVES:
        raise ConfigError(f"unknown exponent {name!r}; choose from {sorted(_CURVES)}")
    default, transform, sweep = _CURVES[name]
    lo, hi = window if window is not None else default
    if not 0 < lo < hi:
        raise ConfigError(f"fit window must satisfy 0 < lo < hi, got ({lo}, {hi})")
    law = weight_law(source)
    bc = critical_beta(kind, law.moments.nu)
    xs = _grid(lo, hi, per_decade)
    if sweep == "field":
        pts = field_curve(kind, law, bc, xs, tol)
        ys = [p.magnetization for p in pts]
    else:
        betas = bc - xs if sweep == "below" else bc + xs
        pts = temperature_curve(kind, law, betas, 0.0, tol)
        ys = [p.magnetization if name == "beta" else p.susceptibility for p in pts]
    return np.column_stack([xs, ys]), transform


def expected_slope(name: str, tab: "ExponentTable") -> float:
    """Slope the fit of :func:`exponent_curve` should approach."""
    return {
        "delta": 1.0 / tab.delta_exp,
        "beta": tab.beta_exp,
        "gamma": -tab.gamma_exp,
        "gamma-prime": -tab.gamma_prime_exp,
        "tau5": 1.0,
    }[name]


def fit_delta(kind, source, window=(1e-6, 1e-3), per_decade=12, tol=1e-12) -> FitResult:
    """Fit 1/delta from M(beta_c, B) over a geometric grid of B."""
    return fit_exponent(*exponent_curve("delta", kind, source, window, per_decade, tol))


def fit_beta(kind, source, window=(1e-5, 1e-2), per_decade=12, tol=1e-12) -> FitResult:
    """Fit the magnetization exponent from M(beta_c + d, 0+) against d."""
    return fit_exponent(*exponent_curve("beta", kind, source, window, per_decade, tol))


def fit_gamma(kind, source, window=(1e-5, 1e-2), per_decade=12, supercritical=False, tol=1e-12) -> FitResult:
    """Fit gamma (or gamma' above beta_c) from chi(beta, 0+); returns the slope of chi, i.e. -gamma."""
    name = "gamma-prime" if supercritical else "gamma"
    return fit_exponent(*exponent_curve(name, kind, source, window, per_decade, tol))


def fit_tau5_delta(kind, source, window=(1e-6, 1e-3), per_decade=12, tol=1e-12) -> FitResult:
    """Log-corrected fit of M(beta_c, B) against (B / log(1/B))^(1/3); expected slope 1."""
    return fit_exponent(*exponent_curve("tau5", kind, source, window, per_decade, tol))


def susceptibility_products(kind, source, offsets, supercritical=False, tol=1e-12) -> np.ndarray:
    """|beta - beta_c| * chi(beta, 0+) at the given offsets from beta_c."""
    law = weight_law(source)
    bc = critical_beta(kind, law.moments.nu)
    offsets = np.asarray(offsets, dtype=float)
    betas = bc + offsets if supercritical else bc - offsets
    chis = [p.susceptibility for p in temperature_curve(kind, law, betas, 0.0, tol)]
    return offsets * np.array(chis)


def joint_scaling_ratio(kind, source, eps=1e-2, n_grid=5, tol=1e-12) -> tuple[float, float]:
    """Extremes of M(beta, B) / ((beta - beta_c)^beta_exp + B^(1/delta)) on an n_grid^2 grid.

    The grid is geometric in both beta - beta_c and B over [eps/100, eps].
    """
    law = weight_law(source)
    tab = exponent_table(Regime.of(law))
    bc = critical_beta(kind, law.moments.nu)
    axis = np.geomspace(eps / 100.0, eps, n_grid)
    ratios = []
    for d in axis:
        for b in axis:
            m = thermo_point(ModelSpec(kind, bc + d, b), law, tol).magnetization
            ratios.append(m / (d**tab.beta_exp + b ** (1.0 / tab.delta_exp)))
    return float(min(ratios)), float(max(ratios))


def fit_report(regime: Regime, exponent_name: str, fit: FitResult, expected: float) -> str:
    """JSON record ``{regime, exponent_name, slope, expected, window, r_squared}``."""
    return json.dumps(
        {
            "regime": str(regime),
            "exponent_name": exponent_name,
            "slope": fit.slope,
            "expected": expected,
            "window": list(fit.window),
            "r_squared": fit.r_squared,
        }
    )


def table_dict(tab: ExponentTable) -> dict:
    d = asdict(tab)
    d["regime"] = str(tab.regime)
    d["lambda"] = tab.lam
    return d
