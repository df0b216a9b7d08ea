import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from annealed_ising.criticality import (
    Regime,
    critical_beta,
    critical_beta_N,
    expected_slope,
    exponent_curve,
    exponent_table,
    fit_beta,
    fit_delta,
    fit_exponent,
    fit_gamma,
    fit_report,
    fit_tau5_delta,
    gamma_amplitude,
    joint_scaling_ratio,
    susceptibility_products,
    table_dict,
)
from annealed_ising.errors import ConfigError
from annealed_ising.meanfield import thermo_point
from annealed_ising.model import ModelKind, ModelSpec
from annealed_ising.weights import empirical_moments, homogeneous_weights, limiting_moments, make_powerlaw_weights

ICW, GRG = ModelKind.RANK_ONE_ICW, ModelKind.ANNEALED_GRG
ONE = homogeneous_weights(1)
TAU4 = limiting_moments(4.0)


def test_critical_beta_examples():
    assert critical_beta(ICW, 1.0) == 1.0
    assert critical_beta(GRG, 1.0) == pytest.approx(math.log(1 + math.sqrt(2)), rel=1e-15)
    assert critical_beta(ICW, TAU4.nu) == 0.5
    with pytest.raises(ConfigError):
        critical_beta(ICW, 0.0)


def test_critical_beta_N_examples():
    assert critical_beta_N(ICW, homogeneous_weights(17)) == 1.0
    assert critical_beta_N(ICW, make_powerlaw_weights(4, 4.0)) == pytest.approx(0.78307219586141073883, rel=1e-14)
    assert abs(critical_beta_N(ICW, make_powerlaw_weights(10**6, 4.0)) - 0.5) < 1e-2


def test_exponent_table_values():
    t = exponent_table(Regime.finite_fourth())
    assert (t.beta_exp, t.delta_exp, t.gamma_exp, t.gamma_prime_exp, t.lam) == (0.5, 3.0, 1.0, 1.0, 0.75)
    t4 = exponent_table(Regime.from_tau(4.0))
    assert (t4.beta_exp, t4.delta_exp, t4.lam) == (1.0, 2.0, pytest.approx(2 / 3, rel=1e-15))
    t35 = exponent_table(Regime.from_tau(3.5))
    assert (t35.beta_exp, t35.delta_exp) == (2.0, 1.5)
    assert exponent_table(Regime.from_tau(5.0)).delta_exp == 3.0
    assert Regime.from_tau(6.0).name == "finite_fourth"
    assert Regime.of(TAU4) == Regime("powerlaw", 4.0)
    with pytest.raises(ConfigError):
        Regime.from_tau(3.0)
    d = table_dict(t4)
    assert d["regime"] == "powerlaw(4)" and d["lambda"] == t4.lam


@given(st.floats(3.01, 4.99))
def test_table_relations(tau):
    t = exponent_table(Regime.from_tau(tau))
    assert t.gamma_exp == t.gamma_prime_exp == 1.0
    assert t.lam == pytest.approx(t.delta_exp / (t.delta_exp + 1), rel=1e-15)
    assert t.lam == pytest.approx((tau - 2) / (tau - 1), rel=1e-14)


def test_fit_exact_power_law():
    x = np.array([1e-4, 1e-3, 1e-2])
    r = fit_exponent(np.column_stack([x, 7 * x**0.5]))
    assert r.slope == pytest.approx(0.5, abs=1e-12)
    assert r.r_squared == pytest.approx(1.0, abs=1e-12)
    assert r.window == (1e-4, 1e-2)


@given(st.floats(-3, 3), st.floats(0.01, 100))
def test_fit_recovers_exponent(p, c):
    x = np.geomspace(1e-5, 1e-1, 20)
    assert fit_exponent(np.column_stack([x, c * x**p])).slope == pytest.approx(p, abs=1e-12)


def test_fit_logcorrected():
    x = np.geomspace(1e-6, 1e-3, 30)
    y = 2.0 * (x / np.log(1 / x)) ** (1 / 3)
    assert fit_exponent(np.column_stack([x, y]), ("logcorrected", 1 / 3)).slope == pytest.approx(1.0, abs=1e-12)


def test_fit_rejects():
    with pytest.raises(ConfigError):
        fit_exponent([(1, 1), (2, 2)])
    with pytest.raises(ConfigError):
        fit_exponent([(1, 1), (2, -2), (3, 3)])
    with pytest.raises(ConfigError):
        fit_exponent([(1, 1), (2, 2), (3, 3)], "semilog")


def test_delta_fits():
    assert fit_delta(ICW, ONE).slope == pytest.approx(1 / 3, abs=0.02)
    assert fit_delta(GRG, TAU4).slope == pytest.approx(1 / 2, abs=0.05)


def test_beta_fits():
    assert fit_beta(ICW, ONE).slope == pytest.approx(0.5, abs=0.03)
    assert fit_beta(GRG, TAU4).slope == pytest.approx(1.0, abs=0.05)


def test_gamma_fits():
    assert fit_gamma(GRG, ONE).slope == pytest.approx(-1.0, abs=0.02)
    assert fit_gamma(GRG, TAU4, supercritical=True).slope == pytest.approx(-1.0, abs=0.05)


def test_tau5_log_corrected():
    assert fit_tau5_delta(GRG, limiting_moments(5.0)).slope == pytest.approx(1.0, abs=0.1)


@pytest.mark.parametrize("mom, expected", [(empirical_moments(ONE), 1 / math.sqrt(2)), (TAU4, 0.33541019662496845446)])
def test_gamma_amplitude(mom, expected):
    assert gamma_amplitude(mom) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("source", [ONE, TAU4], ids=["w1", "tau4"])
def test_gamma_amplitude_limit(source):
    amp = gamma_amplitude(empirical_moments(source) if source is ONE else source)
    bc = critical_beta(GRG, (empirical_moments(source) if source is ONE else source).nu)
    chi = thermo_point(ModelSpec(GRG, bc - 1e-5), source).susceptibility
    assert 1e-5 * chi == pytest.approx(amp, rel=1e-3)


def test_gamma_amplitude_icw_unavailable():
    with pytest.raises(ConfigError):
        gamma_amplitude(TAU4, ICW)


@pytest.mark.parametrize("source", [ONE, TAU4], ids=["w1", "tau4"])
def test_gamma_prime_bounded(source):
    prods = susceptibility_products(GRG, source, np.geomspace(1e-4, 1e-2, 9), supercritical=True)
    assert np.all(prods > 0) and prods.max() / prods.min() < 10


@pytest.mark.parametrize("source", [ONE, TAU4], ids=["w1", "tau4"])
def test_joint_scaling(source):
    lo, hi = joint_scaling_ratio(GRG, source)
    assert 0.1 < lo <= hi < 10


def test_exponent_curve_and_expected():
    pts, transform = exponent_curve("gamma", ICW, ONE, window=(1e-4, 1e-2), per_decade=12)
    assert transform == "loglog" and pts.shape == (25, 2)
    assert expected_slope("gamma", exponent_table(Regime.finite_fourth())) == -1.0
    assert expected_slope("delta", exponent_table(Regime.from_tau(4.0))) == 0.5
    with pytest.raises(ConfigError):
        exponent_curve("eta", ICW, ONE)
    with pytest.raises(ConfigError):
        exponent_curve("beta", ICW, ONE, window=(1e-2, 1e-4))


def test_fit_report_schema():
    r = fit_report(Regime.finite_fourth(), "delta", fit_delta(ICW, ONE), 1 / 3)
    d = json.loads(r)
    assert set(d) == {"regime", "exponent_name", "slope", "expected", "window", "r_squared"}
    assert d["window"] == [1e-6, 1e-3]
