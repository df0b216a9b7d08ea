"""Limiting densities of the rescaled total spin at criticality and inside the critical window.

Run: python3 demos/limit_density_and_window.py
"""

import numpy as np

from annealed_ising import ModelKind, homogeneous_weights, make_powerlaw_weights
from annealed_ising.clt import (
    LimitLaw,
    density_normalizer,
    limit_constant_C,
    limit_density_f,
    limit_mgf,
    window_mgf_pair,
)

quartic = LimitLaw.finite_fourth(1.0)
print(f"bounded fourth moment, w=1: f(x)=x^4/12, normalizer={density_normalizer(quartic):.12f}")

for tau in (3.5, 4.0, 4.5):
    law = LimitLaw.powerlaw(tau)
    c = limit_constant_C(law)
    xs = np.array([1.0, 10.0, 100.0])
    f = limit_density_f(xs, law)
    print(f"tau={tau}: C={c:.10f}, normalizer={density_normalizer(law):.10f}")
    # the ratio f(x)/(C x^(tau-1)) tends to 1, but a negative x^2 correction keeps it
    # visibly below 1 at moderate x when tau is close to 3
    for x, fx in zip(xs, f):
        print(f"   x={x:>5}: f={fx:.6e}  f/(C x^(tau-1))={fx / (c * x ** (tau - 1)):.5f}")

print("\nmoment generating function of the limit, E[exp(r X)]:")
for r in (0.5, 1.0, 2.0):
    print(f"  r={r}: w=1 {limit_mgf(r, quartic):.8f}  tau=4 {limit_mgf(r, LimitLaw.powerlaw(4.0)):.8f}")

print("\nfinite-N MGF inside the window beta = beta_c,N + b N^(-(delta-1)/(delta+1)) vs the limit:")
for name, ws in (("w=1", homogeneous_weights(10**5)), ("tau=4", make_powerlaw_weights(10**5, 4.0))):
    for b in (-1.0, 1.0):
        fin, lim = window_mgf_pair(ws, ModelKind.ANNEALED_GRG, b, 1.0)
        print(f"  {name} b={b:+}: finite N {fin:.6f}  limit {lim:.6f}")
