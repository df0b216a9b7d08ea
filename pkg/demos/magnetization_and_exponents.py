"""Magnetization curves and fitted critical exponents.

Run: python3 demos/magnetization_and_exponents.py
"""

import numpy as np

from annealed_ising import (
    ModelKind,
    ModelSpec,
    Regime,
    critical_beta,
    exponent_table,
    fit_beta,
    fit_delta,
    fit_gamma,
    limiting_moments,
    thermo_point,
)
from annealed_ising.weights import homogeneous_weights

GRG = ModelKind.ANNEALED_GRG
one = homogeneous_weights(1)

for tau in (3.5, 4.5, None):
    lim = one if tau is None else limiting_moments(tau)
    nu = 1.0 if tau is None else lim.nu
    bc = critical_beta(GRG, nu)
    print(f"\n{'w=1' if tau is None else f'tau={tau}'}, beta_c={bc:.6f}")
    # spontaneous magnetization switches on above beta_c (limit B -> 0+ via a tiny field)
    for db in (-0.05, 0.01, 0.05, 0.2):
        tp = thermo_point(ModelSpec(GRG, bc + db, 1e-12), lim)
        print(f"  beta_c{db:+.2f}: M={tp.magnetization:.6f}  chi={tp.susceptibility:.4g}")

    regime = Regime.from_tau(tau)
    tab = exponent_table(regime)
    fd, fb, fg = fit_delta(GRG, lim), fit_beta(GRG, lim), fit_gamma(GRG, lim)
    print(f"  delta: fitted 1/slope={1 / fd.slope:.4f}, expected {tab.delta_exp:.4f}")
    print(f"  beta : fitted slope={fb.slope:.4f}, expected {tab.beta_exp:.4f}")
    print(f"  gamma: fitted -slope={-fg.slope:.4f}, expected {tab.gamma_exp:.4f}")

# Critical isotherm M(B) at beta_c for the homogeneous model: M ~ B^(1/3)
bc = critical_beta(ModelKind.RANK_ONE_ICW, 1.0)
for b in np.logspace(-9, -3, 4):
    m = thermo_point(ModelSpec(ModelKind.RANK_ONE_ICW, bc, b), one).magnetization
    print(f"B={b:.0e}: M={m:.6e}  M/B^(1/3)={m / b ** (1 / 3):.6f}")
