"""log of integrals of exp(-h(z)) over the real line, for h growing at infinity."""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize

from .._special import gk_quad
from ..errors import NumericalError

# exp(-CUT) relative mass is dropped beyond the integration hull
CUT = 80.0
_GRID = 801


def _outer_limit(h, side, scale, h0):
    """Double |z| from ``scale`` until h is increasing and CUT above the lowest value seen."""
    z = side * scale
    prev, lowest = h0, h0
    for _ in range(2000):
        v = h(z)
        lowest = min(lowest, v)
        if v - lowest >= CUT and v > prev:
            return z
        prev = v
        z *= 2.0
    raise NumericalError("could not find where the integrand becomes negligible")


def hull(h, scale, h_vec=None):
    """Integration interval, grid minima and minimum value of h.

    Returns ``(lo, hi, minima, hmin)`` with h - hmin > CUT outside [lo, hi]
    (h is checked on a dense grid; the caller's h must be unimodal on each
    side of its outermost minima, which holds for all exponents used here).
    """
    h_vec = h_vec or (lambda zs: np.array([h(z) for z in zs]))
    h0 = h(0.0)
    lo = _outer_limit(h, -1.0, scale, h0)
    hi = _outer_limit(h, 1.0, scale, h0)
    zs = np.linspace(lo, hi, _GRID)
    zs[np.argmin(np.abs(zs))] = 0.0
    hs = h_vec(zs)
    minima = []
    for i in range(1, _GRID - 1):
        if hs[i] <= hs[i - 1] and hs[i] <= hs[i + 1]:
            res = optimize.minimize_scalar(
                h, bounds=(zs[i - 1], zs[i + 1]), method="bounded", options={"xatol": 1e-12 * max(abs(zs[i]), scale)}
            )
            zm, hm = (res.x, res.fun) if res.fun <= hs[i] else (zs[i], hs[i])
            minima.append((zm, hm))
    if not minima:
        i = int(np.argmin(hs))
        minima.append((zs[i], hs[i]))
    hmin = min(m[1] for m in minima)
    inside = np.nonzero(hs - hmin <= CUT + 20.0)[0]
    a = zs[max(inside[0] - 1, 0)]
    b = zs[min(inside[-1] + 1, _GRID - 1)]
    return a, b, sorted(m[0] for m in minima), hmin


def log_integral(h, scale, h_vec=None, epsrel=1e-13):
    """log of the integral of exp(-h(z)) over the real line.

    ``h`` is a scalar callable, ``h_vec`` an optional vectorized version,
    ``scale`` a rough width of the region where h varies by O(1).
    """
    h_vec = h_vec or (lambda zs: np.array([h(z) for z in zs]))
    a, b, minima, hmin = hull(h, scale, h_vec)
    val, _ = gk_quad(
        lambda zs: np.exp(-(h_vec(zs) - hmin)), a, b, epsrel=epsrel, breaks=minima, what="exp(-h) integral"
    )
    if not val > 0:
        raise NumericalError("integral of exp(-h) vanished", tolerance=epsrel)
    return math.log(val) - hmin
