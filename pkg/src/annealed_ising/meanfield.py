"""Mean-field fixed point, magnetization and susceptibility.

All quantities depend on the model only through the effective coupling
``theta`` and on the weights only through the law of a uniformly chosen
weight W. With ``alpha = sqrt(theta / E[W])`` the fixed-point map is

    Phi(z) = E[alpha W tanh(alpha W z + B)],

and the magnetization is ``E[tanh(alpha W z* + B)]``.

The law of W is either the empirical law of a finite :class:`WeightSequence`
(exact finite averages) or the limit law of the deterministic power-law
family, whose expectations are computed by adaptive quadrature in log(w)
plus a closed-form tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from ._special import gk_quad, sech2, tanh_shift_minus_linear, tanhc_minus_one
from .errors import BracketError, ConfigError, CriticalDivergence, NumericalError
from .model import ModelSpec
from .weights import MomentSet, WeightSequence, empirical_moments, limiting_moments

# Beyond this argument tanh(x) == 1 to within 2 exp(-2 x) ~ 1e-17.
_SATURATE = 20.0


class DiscreteLaw:
    """Empirical law of a finite weight vector (duplicates merged)."""

    def __init__(self, ws: WeightSequence):
        if ws.w is None:
            raise ConfigError("mean-field averages need a materialized weight vector")
        vals, counts = np.unique(ws.w, return_counts=True)
        self.values = vals
        self.probs = counts / ws.n
        self.moments = empirical_moments(ws)

    def expect(self, g):
        """E[g(W)] for a vectorized callable g."""
        return float(np.dot(self.probs, g(self.values)))


class PowerLawLaw:
    """Limit law with density (tau-1) cw^(tau-1) w^(-tau) on (cw, inf)."""

    def __init__(self, tau: float, cw: float = 1.0):
        self.tau = float(tau)
        self.cw = float(cw)
        self.moments = limiting_moments(tau, cw)

    def tail_moment(self, k: float, L: float) -> float:
        """E[W^k; W > L] for k < tau - 1."""
        t1 = self.tau - 1.0
        L = max(L, self.cw)
        return t1 * self.cw**t1 * L ** (k - t1) / (t1 - k)

    def expect(self, g, upper=math.inf, tail=0.0, breaks=(), power=0.0):
        """E[W^power g(W); W <= upper] + tail, by quadrature in t = log(w / cw).

        ``breaks`` are w-values where g changes character (quadrature
        breakpoints). Passing the polynomial factor as ``power`` combines
        it with the density before evaluation, so integrands that reach
        w ~ 1e100 and beyond neither overflow nor underflow.
        """
        t1 = self.tau - 1.0

        def integrand(t):
            w = self.cw * np.exp(t)
            dens = t1 * self.cw**power * np.exp((power - t1) * t)
            with np.errstate(over="ignore", invalid="ignore"):
                val = g(w) * dens
            # where the density underflows to 0 an overflowing g(w) would give nan
            return np.where(dens == 0, 0.0, val)

        if math.isinf(upper):
            # exp(-t1 t) is below 1e-18 of its start past this point; callers
            # pass bounded integrands when upper is infinite.
            tmax = 45.0 / t1
        else:
            tmax = math.log(max(upper, self.cw) / self.cw)
        if tmax <= 0:
            return tail
        pts = [math.log(b / self.cw) for b in breaks if self.cw < b < self.cw * math.exp(tmax)]
        # the absolute floor only matters once the integrand itself is subnormal
        total, _ = gk_quad(
            integrand, 0.0, tmax, epsrel=1e-13, epsabs=1e-290, breaks=pts, what="power-law expectation"
        )
        return total + tail


def weight_law(source):
    """Turn a WeightSequence, limiting MomentSet or a law object into a law."""
    if isinstance(source, (DiscreteLaw, PowerLawLaw)):
        return source
    if isinstance(source, WeightSequence):
        return DiscreteLaw(source)
    if isinstance(source, MomentSet):
        if source.source == "limiting" and source.tau is not None:
            return PowerLawLaw(source.tau, source.cw)
        raise ConfigError("a MomentSet only determines the law for the limiting power-law family")
    raise ConfigError(f"cannot build a weight law from {type(source).__name__}")


@dataclass(frozen=True)
class FixedPointSolution:
    """Solution z* of z = Phi(z) together with dz*/dB.

    ``branch`` is "zero" or "positive"; ``critical`` flags theta*nu == 1 at
    B = 0, where dz*/dB diverges and ``dz_dB`` is ``inf``.
    """

    z_star: float
    residual: float
    iterations: int
    dz_dB: float
    branch: str
    critical: bool = False


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    b_field: float
    z_star: float
    magnetization: float
    susceptibility: float


class _Ctx:
    """Per-(spec, law) constants and expectations used by the solver."""

    def __init__(self, spec: ModelSpec, law):
        self.spec = spec
        self.law = law
        self.m = law.moments
        self.theta = spec.theta
        self.B = spec.b_field
        self.alpha = math.sqrt(self.theta / self.m.m1)
        self.theta_nu = self.theta * self.m.nu
        self.upper = math.sqrt(self.theta * self.m.m1)

    def _pl_limits(self, z):
        """Saturation point L (w-scale) and kink w for the power-law quadrature."""
        az = self.alpha * z
        L = max((_SATURATE - self.B) / az, self.law.cw) if az > 0 else math.inf
        kink = 1.0 / az if az > 0 else math.inf
        return L, kink

    def excess(self, z):
        """Phi(z) - z, written as (theta nu - 1) z + E[aW (tanh(aWz + B) - aWz)]."""
        a, B = self.alpha, self.B
        law = self.law

        def g(w):
            return a * tanh_shift_minus_linear(a * w * z, B)

        if isinstance(law, PowerLawLaw):
            L, kink = self._pl_limits(z)
            tail = a * law.tail_moment(1, L) - a * a * z * law.tail_moment(2, L) if L < math.inf else 0.0
            if z == 0:
                return a * math.tanh(B) * law.moments.m1
            val = law.expect(g, upper=L, tail=tail, breaks=(kink,), power=1.0)
        else:
            val = law.expect(lambda w: w * g(w))
        return (self.theta_nu - 1.0) * z + val

    def zero_field_ratio(self, z):
        """(Phi(z) - z) / z at B = 0: (theta nu - 1) + E[a^2 W^2 (tanh(y)/y - 1)]."""
        a = self.alpha
        law = self.law

        def g(w):
            return a * a * tanhc_minus_one(a * w * z)

        if z == 0:
            return self.theta_nu - 1.0
        if isinstance(law, PowerLawLaw):
            L, kink = self._pl_limits(z)
            # beyond L: tanh(y)/y - 1 = 1/y - 1
            tail = a * law.tail_moment(1, L) / z - a * a * law.tail_moment(2, L)
            val = law.expect(g, upper=L, tail=tail, breaks=(kink,), power=2.0)
        else:
            val = law.expect(lambda w: w * w * g(w))
        return (self.theta_nu - 1.0) + val

    def expect_t(self, z, fn):
        """E[fn(w, t, s)] with t = tanh(aWz + B) and s = 1 - t^2 computed without
        cancellation; fn must vanish like s past saturation or be given in
        closed form there by the caller."""
        a, B = self.alpha, self.B

        def g(w):
            x = a * w * z + B
            return fn(w, np.tanh(x), sech2(x))

        if isinstance(self.law, PowerLawLaw):
            L, kink = self._pl_limits(z)
            return self.law.expect(g, upper=L, breaks=(kink,))
        return self.law.expect(g)


def fixed_point_map(z: float, spec: ModelSpec, source) -> float:
    """Phi(z) = E[alpha W tanh(alpha W z + B)]."""
    ctx = _Ctx(spec, weight_law(source))
    return ctx.excess(z) + z


def _derivative(ctx: _Ctx, z: float):
    """dz*/dB from the differentiated fixed-point equation.

    Denominator 1 - E[a^2 W^2 (1 - t^2)] is evaluated as
    (1 - theta nu) + E[a^2 W^2 t^2] to keep precision near criticality.
    """
    a = ctx.alpha
    law = ctx.law
    if ctx.theta == 0:
        return 0.0
    if z == 0:
        t = math.tanh(ctx.B)
        num = a * law.moments.m1 * (1.0 - t * t)
        den = (1.0 - ctx.theta_nu) + a * a * law.moments.m2 * t * t
    else:
        num = ctx.expect_t(z, lambda w, t, s: a * w * s)
        t2 = lambda w, t, s: (a * w) ** 2 * t * t  # noqa: E731
        if isinstance(law, PowerLawLaw):
            L, kink = ctx._pl_limits(z)
            den = (1.0 - ctx.theta_nu) + law.expect(
                lambda w: (a * np.tanh(a * w * z + ctx.B)) ** 2,
                upper=L,
                tail=a * a * law.tail_moment(2, L) if L < math.inf else 0.0,
                breaks=(kink,),
                power=2.0,
            )
        else:
            den = (1.0 - ctx.theta_nu) + ctx.expect_t(z, t2)
    if den <= 0:
        raise CriticalDivergence(
            "dz*/dB diverges: 1 - E[a^2 W^2 (1 - t^2)] is not positive", tolerance=0.0, achieved=den
        )
    return num / den


def _root(f, hi, xtol):
    """Root of f on [0, hi] with f(0) > 0 > f(hi); returns (z, iterations).

    A root within a few ``xtol`` of 0 is re-solved on that small bracket to
    full relative precision, so tiny fields near criticality keep z* > 0.
    The refinement is skipped if f cannot be evaluated that close to 0
    (power-law expectations underflow there); the first root already meets
    the residual contract.
    """
    rtol = 4 * np.finfo(float).eps
    z, res = optimize.brentq(f, 0.0, hi, xtol=xtol, rtol=rtol, full_output=True, maxiter=500)
    it = res.iterations
    small = min(hi, 4.0 * xtol)
    if z < small:
        try:
            if f(small) < 0:
                z, res = optimize.brentq(f, 0.0, small, xtol=1e-300, rtol=rtol, full_output=True, maxiter=2000)
                it += res.iterations
        except NumericalError:
            pass
    return z, it


def solve_fixed_point(spec: ModelSpec, source, tol: float = 1e-12) -> FixedPointSolution:
    """Solve z = Phi(z) for the physical branch.

    B > 0: unique positive root, bracketed on [0, sqrt(theta m1)].
    B = 0, theta nu <= 1: z* = 0.
    B = 0, theta nu > 1: positive root z*_0 = lim_{B -> 0+} z*, found
    directly from (Phi(z) - z)/z = 0.
    A subnormal B for which Phi(0) underflows to 0 is treated as B = 0.
    """
    if not tol > 0:
        raise ConfigError("tol must be positive")
    ctx = _Ctx(spec, weight_law(source))
    if ctx.alpha == 0:
        # theta = 0, or so small that alpha underflows
        return FixedPointSolution(0.0, 0.0, 0, 0.0, "zero")
    hi = ctx.upper
    xtol = min(tol, 1e-14 * max(hi, 1e-300))
    f = ctx.excess
    flo = f(0.0) if ctx.B > 0 else 0.0
    if flo > 0:
        fhi = f(hi)
        if fhi > tol:
            raise BracketError(f"fixed point not bracketed: Phi-z = {flo}, {fhi}", tolerance=tol)
        if fhi >= 0:
            # saturated: Phi(hi) - hi is below rounding, hi meets the residual contract
            z, it = hi, 0
        else:
            z, it = _root(f, hi, xtol)
        residual = abs(f(z))
        branch = "positive"
    elif not flo == 0:
        raise BracketError(f"fixed point not bracketed: Phi(0) = {flo}", tolerance=tol)
    elif ctx.theta_nu <= 1.0:
        dz = _zero_branch_derivative(ctx)
        return FixedPointSolution(0.0, 0.0, 0, dz, "zero", critical=ctx.theta_nu == 1.0)
    else:
        r = ctx.zero_field_ratio
        rhi = r(hi)
        if hi * rhi > tol:
            raise BracketError("positive zero-field root not bracketed", tolerance=tol)
        if rhi >= 0:
            z, it = hi, 0
        else:
            z, it = _root(r, hi, xtol)
        residual = abs(z * r(z))
        branch = "positive"
    if residual > tol:
        # brentq stops on x-tolerance; polish until the residual contract holds
        raise BracketError(f"fixed-point residual {residual:.3e} exceeds tol", tolerance=tol, achieved=residual)
    return FixedPointSolution(z, residual, it, _derivative(ctx, z), branch)


def _zero_branch_derivative(ctx: _Ctx) -> float:
    if ctx.theta_nu == 1.0:
        return math.inf
    return _derivative(ctx, 0.0)


def magnetization(spec: ModelSpec, source, z_star: float) -> float:
    """E[tanh(alpha W z* + B)]."""
    ctx = _Ctx(spec, weight_law(source))
    if z_star == 0 or ctx.theta == 0:
        return math.tanh(ctx.B)
    if isinstance(ctx.law, PowerLawLaw):
        L, kink = ctx._pl_limits(z_star)
        a, B = ctx.alpha, ctx.B
        tail = (ctx.law.cw / L) ** (ctx.law.tau - 1.0) if L < math.inf else 0.0
        return ctx.law.expect(lambda w: np.tanh(a * w * z_star + B), upper=L, tail=tail, breaks=(kink,))
    return ctx.expect_t(z_star, lambda w, t, s: t)


def susceptibility(spec: ModelSpec, source, fp: FixedPointSolution) -> float:
    """E[(1 + alpha W dz*/dB)(1 - tanh^2(alpha W z* + B))].

    At B = 0 below criticality this is 1 + theta m1 / (1 - theta nu).
    """
    ctx = _Ctx(spec, weight_law(source))
    if fp.critical or math.isinf(fp.dz_dB):
        raise CriticalDivergence("susceptibility diverges at the critical point", tolerance=0.0)
    a, d = ctx.alpha, fp.dz_dB
    if fp.z_star == 0:
        t = math.tanh(ctx.B)
        return (1.0 + a * d * ctx.law.moments.m1) * (1.0 - t * t)
    return ctx.expect_t(fp.z_star, lambda w, t, s: (1.0 + a * w * d) * s)


def thermo_point(spec: ModelSpec, source, tol: float = 1e-12) -> ThermoPoint:
    law = weight_law(source)
    fp = solve_fixed_point(spec, law, tol)
    m = magnetization(spec, law, fp.z_star)
    chi = susceptibility(spec, law, fp)
    return ThermoPoint(spec.beta, spec.b_field, fp.z_star, m, chi)
