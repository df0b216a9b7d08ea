"""Limiting critical densities exp(-f(x)) of S_N / N^lam and the scaling window.

Bounded fourth moment:  f(x) = (1/12) E[W^4] / E[W]^4 x^4.
Power law tau in (3, 5): f(x) = sum_{i>=1} q(a x i^(-1/(tau-1))),
with q(y) = y^2/2 - log cosh y and a = (tau-2)/(tau-1), and
f(x) ~ C x^(tau-1) as x -> inf.

Inside the critical window beta = beta_c,N + b N^(-(delta-1)/(delta+1)) the
density picks up a factor exp{(b/2) kappa x^2} with kappa = cosh(beta_c)
E[W^2]^2 / E[W]^3 for the annealed GRG (d theta / d beta = cosh beta) and
kappa = E[W^2]^2 / E[W]^3 for the ICW.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .._special import LOGCOSH, gk_quad, quad, quartic_gap
from ..criticality import Regime, critical_beta
from ..errors import ConfigError
from ..meanfield import weight_law
from ..model import ModelKind
from ._laplace import log_integral

_RHO = 1.0  # zeta-series tail used once a x i^(-1/(tau-1)) <= _RHO
_MAX_DIRECT = 50_000_000


@dataclass(frozen=True)
class LimitLaw:
    """Parameters of exp{(b/2) kappa x^2 - f(x)}.

    Attributes
    ----------
    regime : Regime
        ``finite_fourth`` or ``powerlaw`` (tau in (3, 5)).
    quartic : float or None
        E[W^4] / E[W]^4 for ``finite_fourth``.
    window_b : float
        Position b inside the critical window (0 at beta_c,N).
    kappa : float
        Coefficient of (b/2) x^2.
    truncation_tol : float
        Absolute accuracy of the power-law series for f.
    """

    regime: Regime
    quartic: float | None = None
    window_b: float = 0.0
    kappa: float = 0.0
    truncation_tol: float = 1e-12

    def __post_init__(self):
        if self.regime.name == "finite_fourth":
            if not (self.quartic is not None and self.quartic > 0):
                raise ConfigError("finite_fourth needs E[W^4]/E[W]^4 > 0")
        elif self.regime.name == "powerlaw":
            if not 3 < self.regime.tau < 5:
                raise ConfigError("the limit theorem covers tau in (3, 5)")
        else:
            raise ConfigError(f"no limiting density for regime {self.regime}")
        if not self.truncation_tol > 0:
            raise ConfigError("truncation_tol must be positive")
        if self.window_b != 0 and not self.kappa > 0:
            raise ConfigError("a window offset needs a positive kappa")

    @classmethod
    def finite_fourth(cls, quartic: float, **kw) -> "LimitLaw":
        return cls(Regime.finite_fourth(), quartic=quartic, **kw)

    @classmethod
    def powerlaw(cls, tau: float, **kw) -> "LimitLaw":
        return cls(Regime("powerlaw", float(tau)), **kw)

    @classmethod
    def from_source(cls, source, kind: ModelKind = ModelKind.RANK_ONE_ICW, window_b: float = 0.0, **kw) -> "LimitLaw":
        """Limit law of a weight sequence or limiting moment set.

        Power-law tagged sources with tau in (3, 5) give the power-law
        regime; everything else must have E[W^4] < inf.
        """
        m = weight_law(source).moments
        tau = m.tau
        kappa = window_coefficient(kind, m)
        if tau is not None and tau < 5:
            return cls.powerlaw(tau, window_b=window_b, kappa=kappa, **kw)
        if tau is not None and tau == 5:
            raise ConfigError("tau = 5 has no limiting density of this form")
        return cls.finite_fourth(m.m4 / m.m1**4, window_b=window_b, kappa=kappa, **kw)

    @property
    def a(self) -> float:
        tau = self.regime.tau
        return (tau - 2.0) / (tau - 1.0)

    @property
    def tail_power(self) -> float:
        """Growth exponent 1 + delta of f."""
        return 4.0 if self.regime.name == "finite_fourth" else self.regime.tau - 1.0

    def with_window(self, b: float) -> "LimitLaw":
        return LimitLaw(self.regime, self.quartic, b, self.kappa, self.truncation_tol)


def window_coefficient(kind: ModelKind, mom) -> float:
    """kappa = (d theta/d beta at beta_c) * E[W^2]^2 / E[W]^3."""
    bc = critical_beta(kind, mom.nu)
    return kind.dcoupling_dbeta(bc) * mom.m2**2 / mom.m1**3


def _f_powerlaw(x: float, tau: float, tol: float) -> float:
    """sum_i q(c i^-p), c = a|x|: direct sum while c i^-p > _RHO, Hurwitz-zeta series after."""
    a = (tau - 2.0) / (tau - 1.0)
    c = a * abs(x)
    if c == 0:
        return 0.0
    p = 1.0 / (tau - 1.0)
    m = int(math.floor((c / _RHO) ** (tau - 1.0)))  # c m^-p >= _RHO
    if m > _MAX_DIRECT:
        raise ConfigError(f"|x| = {abs(x)} needs {m} direct terms; too large")
    head = 0.0
    for s in range(1, m + 1, 1 << 20):
        i = np.arange(s, min(s + (1 << 20), m + 1), dtype=float)
        head += float(np.sum(quartic_gap(c * i**-p)))
    # sum_{i>m} q(c i^-p) = -sum_{k>=2} LOGCOSH[k] c^{2k} zeta(2kp, m+1)
    # the series bound (ax)^4/12 sum_{i>m} i^-4p may already be below tol
    bound = c**4 / 12.0 * special.zeta(4.0 * p, m + 1.0)
    if bound < tol:
        return head
    tail = 0.0
    for k in range(2, LOGCOSH.size):
        term = -LOGCOSH[k] * c ** (2 * k) * special.zeta(2.0 * k * p, m + 1.0)
        tail += term
        # an absolute tol below the rounding of a large f cannot be met
        if abs(term) < 0.1 * max(tol, 1e-17 * abs(head + tail)):
            break
    else:
        raise ConfigError("log cosh series did not reach the requested tolerance")
    return head + tail


def limit_density_f(x, law: LimitLaw):
    """f(x); scalar or array."""
    xs = np.asarray(x, dtype=float)
    if law.regime.name == "finite_fourth":
        out = law.quartic / 12.0 * xs**4
    else:
        tau, tol = law.regime.tau, law.truncation_tol
        out = np.array([_f_powerlaw(v, tau, tol) for v in xs.ravel()]).reshape(xs.shape)
    return float(out) if out.ndim == 0 else out


def limit_constant_C(law: LimitLaw) -> float:
    """C = lim f(x) / x^(tau-1), or the quartic coefficient E[W^4]/(12 E[W]^4).

    Power law: C = (tau-1) a^(tau-1) int_0^inf q(u) u^-tau du, split at u=1.
    On (0, 1) q(u)/u^4 is smooth and u^(4-tau) is an integrable algebraic
    weight; on (1, inf) q(u) = u^2/2 - u + log 2 - log1p(e^-2u) integrates in
    closed form except for the fast-decaying log1p term.
    """
    if law.regime.name == "finite_fourth":
        return law.quartic / 12.0
    tau = law.regime.tau

    def q_over_u4(u):
        return float(quartic_gap(np.array([u]))[0]) / u**4 if u > 0 else 1.0 / 12.0

    inner = quad(q_over_u4, 0.0, 1.0, weight="alg", wvar=(4.0 - tau, 0.0), epsrel=1e-13, what="C on (0,1)")
    corr = quad(lambda u: math.log1p(math.exp(-2.0 * u)) * u**-tau, 1.0, 60.0, epsrel=1e-13, what="C on (1,inf)")
    outer = 0.5 / (tau - 3.0) - 1.0 / (tau - 2.0) + math.log(2.0) / (tau - 1.0) - corr
    return (tau - 1.0) * law.a ** (tau - 1.0) * (inner + outer)


def window_density(x, law: LimitLaw):
    """Unnormalized exp{(b/2) kappa x^2 - f(x)}."""
    xs = np.asarray(x, dtype=float)
    out = np.exp(0.5 * law.window_b * law.kappa * xs**2 - limit_density_f(xs, law))
    return float(out) if np.ndim(out) == 0 else out


def _log_tilted_integral(law: LimitLaw, r: float) -> float:
    """log of the integral of exp{r x + (b/2) kappa x^2 - f(x)}."""
    c2 = 0.5 * law.window_b * law.kappa

    def h(x):
        return -(r * x + c2 * x * x) + limit_density_f(x, law)

    def h_vec(xs):
        return -(r * xs + c2 * xs * xs) + limit_density_f(xs, law)

    return log_integral(h, 0.05, h_vec)


def density_normalizer(law: LimitLaw) -> float:
    """Integral of exp{(b/2) kappa x^2 - f(x)} over the real line.

    Beyond the integration hull the exponent is below its maximum minus
    80 and, since f(lx) >= l^2 f(x) for l >= 1, decays at least like a
    Gaussian, so the dropped mass is below e^-80 relative.
    """
    if law.regime.name == "finite_fourth" and law.window_b == 0:
        # even integrand: integrate over (0, inf) with the x^4 growth resolved
        c = law.quartic / 12.0
        xmax = (100.0 / c) ** 0.25
        val, _ = gk_quad(lambda x: np.exp(-c * x**4), 0.0, xmax, epsrel=1e-14, what="normalizer")
        return 2.0 * val
    return math.exp(_log_tilted_integral(law, 0.0))


def limit_mgf(r: float, law: LimitLaw) -> float:
    """int e^{rx} p(x) dx for the normalized window density p."""
    if r == 0:
        return 1.0
    return math.exp(_log_tilted_integral(law, r) - _log_tilted_integral(law, 0.0))
