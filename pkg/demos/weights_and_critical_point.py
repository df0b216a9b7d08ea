"""Weight sequences, their moments, and where the phase transition sits.

Run: python3 demos/weights_and_critical_point.py
"""

from annealed_ising import (
    ModelKind,
    critical_beta,
    critical_beta_N,
    empirical_moments,
    homogeneous_weights,
    limiting_moments,
    make_powerlaw_weights,
)
from annealed_ising.weights import moment_convergence_report

# Power-law weights w_i = cw ((n - i + 1) / n)^(-1/(tau - 1)) have E[W^2] finite for tau > 3.
for tau in (3.5, 4.0, 5.0):
    lim = limiting_moments(tau)
    print(f"tau={tau}: limiting m1={lim.m1:.6f} m2={lim.m2:.6f} m3={lim.m3} m4={lim.m4} nu={lim.nu:.6f}")

# Empirical moments approach the limit; moments that diverge keep growing with n.
for row in moment_convergence_report(4.0, 1.0, [10**3, 10**4, 10**5, 10**6]):
    print(f"  n={row['n']:>8}  gap m1={row['gap_m1']:.2e}  gap m2={row['gap_m2']:.2e}  m4={row['m4']:.3f}")

# beta_c = asinh(1/nu) on the annealed generalized random graph and 1/nu for the rank-1 Curie-Weiss model.
lim = limiting_moments(4.0)
for kind in ModelKind:
    print(f"{kind.value}: beta_c={critical_beta(kind, lim.nu):.12f}")

# The finite-N critical point uses the empirical nu_N.
ws = make_powerlaw_weights(10**5, 4.0)
print(f"N=1e5, tau=4: nu_N={empirical_moments(ws).nu:.8f}, beta_c,N(grg)={critical_beta_N(ModelKind.ANNEALED_GRG, ws):.8f}")
print(f"homogeneous: beta_c,N(icw)={critical_beta_N(ModelKind.RANK_ONE_ICW, homogeneous_weights(100))}")
