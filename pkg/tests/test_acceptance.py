"""The sixteen acceptance criteria, each at its stated tolerance and time budget."""

import math
import sys
import time

import numpy as np
import pytest
from scipy import special

from annealed_ising.clt.checks import gn_limit_check, partition_sweep, a_stability, window_beta
from annealed_ising.clt.enumerate import empirical_law, enumerate_spin_law, tv_distance
from annealed_ising.clt.gn import GnFunction, default_lambda, log_partition, mgf_ratio
from annealed_ising.clt.limit import (
    LimitLaw,
    density_normalizer,
    limit_constant_C,
    limit_density_f,
    limit_mgf,
    window_density,
)
from annealed_ising.clt.sampling import exact_sample
from annealed_ising.criticality import (
    critical_beta,
    critical_beta_N,
    exponent_table,
    fit_beta,
    fit_delta,
    fit_tau5_delta,
    gamma_amplitude,
    susceptibility_products,
)
from annealed_ising.meanfield import fixed_point_map, solve_fixed_point, thermo_point
from annealed_ising.model import ModelKind, ModelSpec
from annealed_ising.weights import empirical_moments, homogeneous_weights, limiting_moments, make_powerlaw_weights

from acceptance_report import record

GRG, ICW = ModelKind.ANNEALED_GRG, ModelKind.RANK_ONE_ICW
ONE = homogeneous_weights(1)
TAU4 = limiting_moments(4.0)
BIG = 10**6


def weights(kind, n):
    return homogeneous_weights(n) if kind == "w1" else make_powerlaw_weights(n, 4.0)


def critical_theta(ws):
    return 1.0 / empirical_moments(ws).nu


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_01_oracle_equivalence():
    def run():
        worst = 0.0
        for n in (2, 8, 12):
            for kind in ("w1", "tau4"):
                ws = weights(kind, n)
                for theta in (0.3, critical_theta(ws)):
                    gn = GnFunction(ws, theta)
                    law = enumerate_spin_law(ws, ModelSpec.from_theta(ICW, theta))
                    worst = max(worst, abs(log_partition(gn) / law.log_partition - 1))
                    for r in (0.0, 0.5, -0.5, 2.0, -2.0):
                        ref = law.mgf(r / n**gn.lam)
                        worst = max(worst, abs(mgf_ratio(r, gn) / ref - 1))
        return worst

    worst, secs = timed(run)
    ok = worst < 1e-10 and secs < 10
    record(1, "oracle equivalence", ok, f"max relative error {worst:.2e}, {secs:.2f} s")
    assert ok


@pytest.mark.parametrize("kind", ["w1", "tau4"])
def test_02_sampler_exactness(kind):
    ws = weights(kind, 10)
    spec = ModelSpec.from_theta(ICW, critical_theta(ws))

    def run():
        s = exact_sample(ws, spec, 10**6, seed=20241019)
        return tv_distance(empirical_law(s, 10), enumerate_spin_law(ws, spec))

    tv, secs = timed(run)
    ok = tv < 5e-3 and secs < 30
    record(2, "sampler exactness", ok, f"{kind}: TV {tv:.2e}, {secs:.2f} s")
    assert ok


def test_03_critical_values():
    a = critical_beta(ICW, empirical_moments(ONE).nu)
    b = critical_beta(GRG, empirical_moments(ONE).nu)
    c = critical_beta_N(ICW, make_powerlaw_weights(BIG, 4.0))
    ok = a == 1.0 and abs(b - math.asinh(1.0)) < 1e-12 and abs(c - 0.5) < 1e-2
    record(3, "critical values", ok, f"ICW {a!r}, GRG {b!r}, ICW tau=4 n=1e6 {c:.6f}")
    assert ok


def test_04_delta():
    (s1, s4), secs = timed(lambda: (fit_delta(GRG, ONE).slope, fit_delta(GRG, TAU4).slope))
    ok = abs(s1 - 1 / 3) <= 0.02 and abs(s4 - 0.5) <= 0.05 and secs < 5
    record(4, "exponent delta", ok, f"slopes {s1:.5f} (w=1), {s4:.5f} (tau=4), {secs:.2f} s")
    assert ok


def test_05_beta():
    (s1, s4), secs = timed(lambda: (fit_beta(GRG, ONE).slope, fit_beta(GRG, TAU4).slope))
    ok = abs(s1 - 0.5) <= 0.03 and abs(s4 - 1.0) <= 0.05 and secs < 5
    record(5, "exponent beta", ok, f"slopes {s1:.5f} (w=1), {s4:.5f} (tau=4), {secs:.2f} s")
    assert ok


def test_06_gamma_amplitude():
    details, ok = [], True
    for name, src, mom, target in (
        ("w=1", ONE, empirical_moments(ONE), 1 / math.sqrt(2)),
        ("tau=4", TAU4, TAU4, 0.33541),
    ):
        amp = gamma_amplitude(mom)
        bc = critical_beta(GRG, mom.nu)
        prod = 1e-4 * thermo_point(ModelSpec(GRG, bc - 1e-4), src).susceptibility
        gap = abs(prod / amp - 1)
        ok &= gap < 1e-2 and abs(amp - target) < 1e-5
        details.append(f"{name} product {prod:.6f} vs {amp:.6f} (gap {gap:.1e})")
    record(6, "gamma amplitude", ok, "; ".join(details))
    assert ok


def test_07_gamma_prime_bounded():
    offsets = np.geomspace(1e-4, 1e-2, 25)
    details, ok = [], True
    for name, src in (("w=1", ONE), ("tau=4", TAU4)):
        p = susceptibility_products(GRG, src, offsets, supercritical=True)
        ratio = p.max() / p.min()
        ok &= bool(np.all(p > 0)) and ratio < 10
        details.append(f"{name} band [{p.min():.4f}, {p.max():.4f}]")
    record(7, "gamma' boundedness", ok, "; ".join(details))
    assert ok


def test_08_tau5_log_correction():
    s = fit_tau5_delta(GRG, limiting_moments(5.0)).slope
    ok = abs(s - 1.0) <= 0.1
    record(8, "tau=5 log correction", ok, f"log-corrected slope {s:.5f}")
    assert ok


def test_09_gn_convergence_finite_fourth():
    def run():
        gn = GnFunction(homogeneous_weights(BIG), 1.0)
        lhs0, _ = gn_limit_check(gn, 1.0, 0.0)
        lhs1, _ = gn_limit_check(gn, 1.0, 1.0)
        return lhs0, lhs1 - lhs0

    (lhs, linear), secs = timed(run)
    target = -math.sqrt(1.0 / 1.0)
    ok = abs(lhs - 1 / 12) < 1e-2 and abs(linear - target) < 1e-2 and secs < 10
    record(9, "G_N limit (w=1)", ok, f"N G_N = {lhs:.6f} vs 1/12, linear term {linear:.6f} vs {target}, {secs:.2f} s")
    assert ok


def test_10_gn_convergence_powerlaw():
    def run():
        ws = make_powerlaw_weights(BIG, 4.0)
        gn = GnFunction(ws, critical_theta(ws))
        return [gn_limit_check(gn, z, 0.0) for z in (0.5, 1.0, 2.0)]

    pairs, secs = timed(run)
    worst = max(abs(a - b) for a, b in pairs)
    ok = worst < 2e-2 and secs < 30
    record(10, "G_N limit (tau=4)", ok, f"max |N G_N - f| = {worst:.2e}, {secs:.2f} s")
    assert ok


def test_11_limiting_mgf():
    def run():
        out = []
        for kind in ("w1", "tau4"):
            ws = weights(kind, BIG)
            gn = GnFunction(ws, critical_theta(ws))
            law = LimitLaw.from_source(ws)
            for r in (0.5, 1.0):
                out.append((kind, r, mgf_ratio(r, gn), limit_mgf(r, law)))
        return out

    rows, secs = timed(run)
    worst = max(abs(a / b - 1) for _, _, a, b in rows)
    ok = worst < 2e-2 and secs < 60
    record(11, "limiting MGF", ok, f"max relative gap {worst:.2e}, {secs:.2f} s")
    assert ok


def test_12_tail_constant():
    details, ok = [], True
    for tau in (3.5, 4.0, 4.5):
        law = LimitLaw.powerlaw(tau)
        gap = limit_density_f(100.0, law) / 100.0 ** (tau - 1) / limit_constant_C(law) - 1
        ok &= abs(gap) < 2e-2
        details.append(f"tau={tau} {gap:+.3%}")
    w1 = LimitLaw.finite_fourth(1.0)
    x = np.linspace(0.1, 100, 50)
    exact = bool(np.all(limit_density_f(x, w1) / x**4 == limit_constant_C(w1)))
    ok &= exact
    details.append(f"finite_fourth exact={exact}")
    record(12, "tail constant", ok, ", ".join(details))
    assert ok


def test_13_partition_asymptotics():
    details, ok = [], True
    for kind in ("w1", "tau4"):
        ws = weights(kind, 10)
        delta = exponent_table(LimitLaw.from_source(ws).regime).delta_exp
        power = 0.5 + 1.0 / (delta + 1.0)
        rows = partition_sweep(lambda n, k=kind: weights(k, n), [10**3, 10**4, 10**5, 10**6], exponent=power)
        st = a_stability(rows)
        ok &= st["decreasing"] and st["final_difference"] < 1e-2
        details.append(f"{kind}: differences {', '.join(f'{d:.3g}' for d in st['differences'])}")
    record(13, "partition asymptotics", ok, "; ".join(details))
    assert ok


def test_14_scaling_window():
    details, ok = [], True
    x = np.linspace(-8, 8, 100)
    for law in (LimitLaw.finite_fourth(1.0), LimitLaw.powerlaw(4.0)):
        same = bool(np.array_equal(window_density(x, law), np.exp(-limit_density_f(x, law))))
        ok &= same
    details.append(f"b=0 reduction exact={ok}")
    for kind in ("w1", "tau4"):
        ws = weights(kind, BIG)
        for model in (GRG, ICW):
            beta = window_beta(ws, model, 1.0)
            gn = GnFunction(ws, model.effective_coupling(beta), default_lambda(ws))
            finite = mgf_ratio(1.0, gn)
            limit = limit_mgf(1.0, LimitLaw.from_source(ws, model, window_b=1.0))
            gap = abs(finite / limit - 1)
            ok &= gap < 5e-2
            details.append(f"{kind} {model.value} {finite:.4f} vs {limit:.4f}")
    record(14, "scaling window", ok, "; ".join(details))
    assert ok


def test_15_normalizer():
    val = density_normalizer(LimitLaw.finite_fourth(1.0))
    ref = 2 * 12**0.25 * special.gamma(1.25)
    ok = abs(val - ref) < 1e-8
    record(15, "normalizer closed form", ok, f"|difference| {abs(val - ref):.1e}")
    assert ok


def test_16_consistency_suite():
    worst_dz = worst_chi = worst_res = 0.0
    bit_exact = True
    tol = 1e-12
    for src in (ONE, TAU4):
        for theta, b in ((0.3, 0.01), (0.8, 0.1), (1.5, 0.05), (2.5, 0.3)):
            h = 1e-6 * max(1.0, b)
            fp = solve_fixed_point(ModelSpec(ICW, theta, b), src)
            zp = solve_fixed_point(ModelSpec(ICW, theta, b + h), src).z_star
            zm = solve_fixed_point(ModelSpec(ICW, theta, b - h), src).z_star
            worst_dz = max(worst_dz, abs(fp.dz_dB / ((zp - zm) / (2 * h)) - 1))
            chi = thermo_point(ModelSpec(ICW, theta, b), src).susceptibility
            mp = thermo_point(ModelSpec(ICW, theta, b + h), src).magnetization
            mm = thermo_point(ModelSpec(ICW, theta, b - h), src).magnetization
            worst_chi = max(worst_chi, abs(chi / ((mp - mm) / (2 * h)) - 1))
        for beta in np.linspace(0.05, 2.0, 10):
            for b in np.concatenate([[0.0], np.geomspace(1e-6, 1.0, 9)]):
                g = ModelSpec(GRG, float(beta), float(b))
                i = ModelSpec(ICW, math.sinh(beta), float(b))
                fg, fi = solve_fixed_point(g, src, tol), solve_fixed_point(i, src, tol)
                bit_exact &= fg == fi
                if not fg.critical:
                    keys = ("z_star", "magnetization", "susceptibility")
                    tg, ti = thermo_point(g, src, tol), thermo_point(i, src, tol)
                    bit_exact &= all(getattr(tg, k) == getattr(ti, k) for k in keys)
                worst_res = max(worst_res, abs(fixed_point_map(fg.z_star, g, src) - fg.z_star))
    ok = worst_dz < 1e-4 and worst_chi < 1e-4 and bit_exact and worst_res <= tol
    record(16, "derivative and consistency suite", ok,
           f"dz/dB {worst_dz:.1e}, chi {worst_chi:.1e}, kind bit-exact={bit_exact}, max residual {worst_res:.1e}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
