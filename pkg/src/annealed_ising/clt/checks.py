"""Finite-N versus limit comparisons: G_N, moment generating functions, partition functions."""

from __future__ import annotations

import math

from ..criticality import Regime, critical_beta_N, exponent_table
from ..model import ModelKind
from ..weights import WeightSequence, empirical_moments
from .gn import GnFunction, default_lambda, log_partition, mgf_ratio
from .limit import LimitLaw, limit_density_f, limit_mgf


def regime_of(ws: WeightSequence) -> Regime:
    """Regime used for scaling: power-law tagged sequences with tau < 5, else bounded fourth moment."""
    return Regime.from_tau(ws.tau if ws.tau is not None and ws.tau < 5 else None)


def critical_gn(ws: WeightSequence) -> GnFunction:
    """G_N at theta = 1 / nu_N with the regime's lambda."""
    return GnFunction(ws, 1.0 / empirical_moments(ws).nu, default_lambda(ws))


def quartic_coefficients(ws_or_mom) -> tuple[float, float]:
    """(E[W^4] / (12 E[W^2]^2), E[W^4] / (12 E[W]^4)): the z-form and x-form quartic terms."""
    m = empirical_moments(ws_or_mom) if isinstance(ws_or_mom, WeightSequence) else ws_or_mom
    return m.m4 / (12.0 * m.m2**2), m.m4 / (12.0 * m.m1**4)


def gn_limit_check(gn: GnFunction, z: float, r: float, law: LimitLaw | None = None) -> tuple[float, float]:
    """(N G_N(z / N^(1/(delta+1)); r), -r x + f(x)) with x = sqrt(E[W_N] / nu_N) z.

    ``gn`` should be at theta = 1/nu_N with lambda = delta/(delta+1). The
    limit law defaults to the one of ``gn.ws`` (empirical moments for the
    quartic coefficient).
    """
    law = law or LimitLaw.from_source(gn.ws)
    delta = exponent_table(law.regime).delta_exp
    lhs = gn.ng(z / gn.n ** (1.0 / (delta + 1.0)), r)
    m = gn.moments
    x = math.sqrt(m.m1 / m.nu) * z
    return lhs, -r * x + limit_density_f(x, law)


def window_beta(ws: WeightSequence, kind: ModelKind, b: float) -> float:
    """beta_c,N + b N^(-(delta-1)/(delta+1))."""
    tab = exponent_table(regime_of(ws))
    return critical_beta_N(kind, ws) + b * ws.n ** (-tab.window_exponent)


def window_mgf_pair(ws: WeightSequence, kind: ModelKind, b: float, r: float) -> tuple[float, float]:
    """(finite-N E~[e^{r S_N / N^lam}] at the window beta, limiting window-density MGF)."""
    beta = window_beta(ws, kind, b)
    gn = GnFunction(ws, kind.effective_coupling(beta), default_lambda(ws))
    law = LimitLaw.from_source(ws, kind, window_b=b)
    return mgf_ratio(r, gn), limit_mgf(r, law)


def partition_exponent(regime: Regime) -> float:
    """Power of N in Z~_N(beta_c,N) / 2^N: 1/2 - 1/(delta+1).

    The sqrt(N) prefactor of the integral representation contributes 1/2 and
    the substitution z -> z / N^(1/(delta+1)) contributes -1/(delta+1).
    """
    return 0.5 - 1.0 / (exponent_table(regime).delta_exp + 1.0)


def partition_sweep(make_ws, n_list, exponent: float | None = None) -> list[dict]:
    """log Z~_N at theta = 1/nu_N and A_N = log Z~_N - N log 2 - exponent * log N.

    ``make_ws(n)`` builds the weight sequence; ``exponent`` defaults to
    :func:`partition_exponent` of its regime. Rows also carry the change
    of A_N from the previous row.
    """
    rows = []
    prev = None
    for n in n_list:
        ws = make_ws(int(n))
        e = partition_exponent(regime_of(ws)) if exponent is None else exponent
        lz = log_partition(critical_gn(ws))
        a = lz - ws.n * math.log(2.0) - e * math.log(ws.n)
        rows.append({"n": ws.n, "log_partition": lz, "exponent": e, "A": a, "diff": None if prev is None else a - prev})
        prev = a
    return rows


def a_stability(rows) -> dict:
    """Whether |A_N differences| shrink along the sweep, and the last one."""
    d = [abs(r["diff"]) for r in rows if r["diff"] is not None]
    return {
        "differences": d,
        "decreasing": all(y < x for x, y in zip(d, d[1:])),
        "final_difference": d[-1] if d else None,
        "A_estimate": rows[-1]["A"] if rows else None,
    }
