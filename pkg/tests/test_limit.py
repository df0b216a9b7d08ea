import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from annealed_ising.clt.checks import quartic_coefficients
from annealed_ising.clt.limit import (
    LimitLaw,
    density_normalizer,
    limit_constant_C,
    limit_density_f,
    limit_mgf,
    window_coefficient,
    window_density,
)
from annealed_ising.criticality import Regime
from annealed_ising.errors import ConfigError
from annealed_ising.model import ModelKind
from annealed_ising.weights import empirical_moments, homogeneous_weights, limiting_moments, make_powerlaw_weights

ICW, GRG = ModelKind.RANK_ONE_ICW, ModelKind.ANNEALED_GRG
W1 = LimitLaw.finite_fourth(1.0)

# f(x) = sum_i q(a x i^(-1/(tau-1))), evaluated in 40-digit arithmetic: direct
# sum over the large terms, Hurwitz-zeta series of log cosh for the rest
F_ORACLE = [
    (4.0, 2.0, 0.8008659741438057842),
    (3.5, 2.0, 0.3270013528397218220),
    (4.5, 2.0, 2.3601244458387624455),
    (4.0, 0.5, 0.003655805045793734597),
    (3.5, 100.0, 36323.47209637817422),
    (4.0, 100.0, 247234.8973283765559),
    (4.5, 100.0, 2889033.294565675253),
]
# (tau - 1) a^(tau - 1) int_0^inf (u^2/2 - log cosh u) u^-tau du, 40-digit quadrature
C_ORACLE = {3.5: 0.4424329995154842, 4.0: 0.2526094215214849, 4.5: 0.2893532684047986}


@pytest.mark.parametrize("tau, x, expected", F_ORACLE)
def test_f_powerlaw_oracle(tau, x, expected):
    assert limit_density_f(x, LimitLaw.powerlaw(tau)) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("tau", [3.5, 4.0, 4.5])
def test_tail_constant_oracle(tau):
    assert limit_constant_C(LimitLaw.powerlaw(tau)) == pytest.approx(C_ORACLE[tau], rel=1e-12)


def test_f_finite_fourth():
    assert limit_density_f(0.0, W1) == 0.0
    assert limit_density_f(1.0, W1) == pytest.approx(1 / 12, rel=1e-15)
    assert limit_constant_C(W1) == 1 / 12
    x = np.linspace(0.5, 50, 40)
    np.testing.assert_array_equal(limit_density_f(x, W1) / x**4, np.full(x.size, limit_constant_C(W1)))


@given(st.floats(3.05, 4.95), st.floats(0.01, 8.0))
def test_f_even_positive(tau, x):
    law = LimitLaw.powerlaw(tau)
    fx = limit_density_f(x, law)
    assert fx > 0
    assert limit_density_f(-x, law) == fx
    assert limit_density_f(0.0, law) == 0.0


@pytest.mark.parametrize("tau", [3.3, 4.0, 4.7])
@pytest.mark.parametrize("x", [0.3, 2.0, 9.0])
def test_truncation_contract(tau, x):
    tol = 1e-10
    a = limit_density_f(x, LimitLaw.powerlaw(tau, truncation_tol=tol))
    b = limit_density_f(x, LimitLaw.powerlaw(tau, truncation_tol=tol / 10))
    assert abs(a - b) < max(tol, 1e-15 * abs(a))


def test_quartic_coefficient_forms():
    m = empirical_moments(make_powerlaw_weights(1000, 4.5))
    z_form, x_form = quartic_coefficients(m)
    assert z_form * m.m2**2 / m.m1**4 == pytest.approx(x_form, rel=1e-15)


def test_window_density():
    kappa = window_coefficient(GRG, empirical_moments(homogeneous_weights(1)))
    assert kappa == pytest.approx(math.sqrt(2), rel=1e-15)
    law = LimitLaw.finite_fourth(1.0, window_b=1.0, kappa=kappa)
    assert window_density(1.0, law) == pytest.approx(1.8659558610908094532, rel=1e-14)
    assert window_density(0.0, law) == 1.0
    assert window_coefficient(ICW, limiting_moments(4.0)) == pytest.approx(9 / 3.375, rel=1e-15)


@pytest.mark.parametrize("law", [W1, LimitLaw.powerlaw(4.0)], ids=["w1", "tau4"])
def test_window_reduces_to_f(law):
    x = np.linspace(-6, 6, 100)
    np.testing.assert_array_equal(window_density(x, law), np.exp(-limit_density_f(x, law)))


def test_normalizer_closed_form():
    assert density_normalizer(W1) == pytest.approx(2 * 12**0.25 * special.gamma(1.25), abs=1e-12)


def test_normalizer_powerlaw():
    from scipy import integrate

    law = LimitLaw.powerlaw(4.0)
    z = density_normalizer(law)
    half, _ = integrate.quad(lambda x: math.exp(-limit_density_f(x, law)), 0, 12, epsabs=0, epsrel=1e-11, limit=200)
    assert z == pytest.approx(2 * half, rel=1e-9)
    wider, _ = integrate.quad(lambda x: math.exp(-limit_density_f(x, law)), 0, 24, epsabs=0, epsrel=1e-11, limit=200)
    assert wider == pytest.approx(half, rel=1e-12)


def test_limit_mgf():
    assert limit_mgf(0.0, W1) == 1.0
    assert limit_mgf(0.7, W1) == pytest.approx(limit_mgf(-0.7, W1), rel=1e-12)
    from scipy import integrate

    num, _ = integrate.quad(lambda x: math.exp(x - x**4 / 12), -20, 20, epsrel=1e-12)
    assert limit_mgf(1.0, W1) == pytest.approx(num / density_normalizer(W1), rel=1e-10)


def test_law_construction():
    assert LimitLaw.from_source(limiting_moments(4.0)).regime == Regime("powerlaw", 4.0)
    assert LimitLaw.from_source(homogeneous_weights(5)).quartic == 1.0
    with pytest.raises(ConfigError):
        LimitLaw.from_source(limiting_moments(5.0))
    with pytest.raises(ConfigError):
        LimitLaw.powerlaw(5.0)
    with pytest.raises(ConfigError):
        LimitLaw.finite_fourth(0.0)
    with pytest.raises(ConfigError):
        LimitLaw.finite_fourth(1.0, window_b=1.0)
    with pytest.raises(ConfigError):
        LimitLaw.powerlaw(4.0, truncation_tol=0.0)
    assert LimitLaw.finite_fourth(1.0, kappa=1.0).with_window(2.0).window_b == 2.0


@pytest.mark.parametrize("tau", [3.5, 4.0, 4.5])
def test_second_order_tail_term(tau):
    # f(x) = C x^(tau-1) + (a^2/2) zeta(2/(tau-1)) x^2 + O(x): the sum over
    # i >= 1 of the x^2 part of q differs from its integral by zeta(2p)
    law = LimitLaw.powerlaw(tau)
    k = law.a**2 / 2 * special.zeta(2 / (tau - 1))
    c = limit_constant_C(law)
    gaps = [abs((limit_density_f(x, law) - c * x ** (tau - 1)) / x**2 / k - 1) for x in (30.0, 100.0)]
    assert gaps[1] < gaps[0] and gaps[1] < 2e-2
