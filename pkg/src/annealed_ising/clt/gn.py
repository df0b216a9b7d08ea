"""The exponent G_N of the Hubbard-Stratonovich representation.

For weights w_1..w_N, effective coupling theta and alpha_N = sqrt(theta / m1),

    G_N(z; r) = z^2 / 2 - (1/N) sum_i log cosh(alpha_N w_i z + r / N^lam),

and the tilted partition function of P~_N (weights exp{theta/(2 l_N) (sum w s)^2})
is

    Z~_N E~[exp(r S_N / N^lam)] = 2^N sqrt(N / 2 pi) int exp(-N G_N(z; r)) dz.

Here z is the Gaussian auxiliary variable divided by sqrt(N); given z the
spins are independent with P(s_i = +1) = e^{x_i} / (2 cosh x_i),
x_i = alpha_N w_i z + r / N^lam.

N G_N is evaluated as

    (1/2) z^2 N (1 - theta nu_N) - z s alpha_N sum w - N s^2 / 2 + sum_i q(x_i),

s = r / N^lam, q(x) = x^2/2 - log cosh x, which removes the cancellation
between N z^2 / 2 and the log cosh sum at criticality. Terms with small
|x_i| are summed through the Taylor series of q using precomputed power
sums of the weights, so that one evaluation costs O(#large weights), not O(N).
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np
from scipy import special

from .._special import LOGCOSH, logcosh, quartic_gap, tanhc_minus_one
from ..criticality import Regime, exponent_table
from ..errors import ConfigError
from ..weights import WeightSequence, empirical_moments
from ._laplace import log_integral

_RHO = 0.5  # series used where |x| <= _RHO
_K = 20  # series terms x^4 .. x^(2K)
_DIRECT = 64  # at most this many distinct weights: always sum directly

_kk, _jj = np.meshgrid(np.arange(2, _K + 1), np.arange(2 * _K + 1), indexing="ij")
_mask = _jj <= 2 * _kk
_SER_K = _kk[_mask]
_SER_J = _jj[_mask]
_SER_C = -LOGCOSH[_SER_K] * special.comb(2 * _SER_K, _SER_J)


def default_lambda(ws: WeightSequence) -> float:
    """delta / (delta + 1) for the regime of the weight sequence."""
    tau = ws.tau if ws.tau is not None and ws.tau < 5 else None
    return exponent_table(Regime.from_tau(tau)).lam


class GnFunction:
    """N G_N(z; r) for one weight sequence and coupling.

    Parameters
    ----------
    ws : WeightSequence
    theta : float
        Effective coupling (sinh beta for the annealed GRG).
    lam : float, optional
        Scaling exponent of S_N; defaults to delta / (delta + 1) of the
        sequence's regime (3/4 for bounded fourth moments).
    """

    def __init__(self, ws: WeightSequence, theta: float, lam: float | None = None):
        if ws.w is None:
            raise ConfigError("G_N needs a materialized weight vector")
        if not (theta >= 0 and math.isfinite(theta)):
            raise ConfigError(f"theta must be finite and >= 0, got {theta}")
        self.ws = ws
        self.n = ws.n
        self.theta = float(theta)
        self.lam = default_lambda(ws) if lam is None else float(lam)
        self.moments = empirical_moments(ws)
        s1, s2 = ws.power_sums[:2]
        self.alpha = math.sqrt(self.theta * self.n / s1)
        self.sum_w = s1
        # N - alpha^2 sum w^2
        self.curvature = self.n * (1.0 - self.theta * (s2 / s1))
        vals, counts = np.unique(ws.w, return_counts=True)
        self._a = self.alpha * vals[::-1]
        self._c = counts[::-1].astype(float)
        self._setup_series()

    def _setup_series(self):
        a, c = self._a, self._c
        if a.size <= _DIRECT or self.alpha == 0:
            self._starts = np.array([a.size])
            return
        # blocks of a-values within a factor sqrt(2); starts are descending in a
        starts = [0]
        while True:
            nxt = int(np.searchsorted(-a, -a[starts[-1]] / math.sqrt(2.0), side="right"))
            if nxt >= a.size:
                break
            starts.append(nxt)
        starts = np.array(starts)
        ends = np.append(starts[1:], a.size)
        J = 2 * _K + 1
        R = np.zeros((starts.size, J))
        for b, (s, e) in enumerate(zip(starts, ends)):
            u = a[s:e] / a[s]
            p = c[s:e].copy()
            for j in range(J):
                R[b, j] = p.sum()
                p *= u
        Q = R.copy()
        jpow = np.arange(J)
        for b in range(starts.size - 2, -1, -1):
            Q[b] += (a[starts[b + 1]] / a[starts[b]]) ** jpow * Q[b + 1]
        self._starts = starts
        self._Q = Q

    def _shift(self, r):
        return r / self.n**self.lam

    def ng(self, z: float, r: float = 0.0) -> float:
        """N G_N(z; r)."""
        s = self._shift(r)
        z = float(z)
        quad = 0.5 * z * z * self.curvature - z * s * self.alpha * self.sum_w - 0.5 * self.n * s * s
        a, c = self._a, self._c
        az = abs(z)
        if self.alpha == 0:
            return quad + self.n * float(quartic_gap(np.array([s]))[0])
        if self._starts.size == 1 and self._starts[0] == a.size:
            return quad + float(np.dot(c, quartic_gap(a * z + s)))
        starts = self._starts
        if abs(s) >= _RHO:
            b = starts.size
        elif az == 0:
            b = 0
        else:
            thr = (_RHO - abs(s)) / az
            b = int(np.searchsorted(-a[starts], -thr, side="left"))
        head_end = a.size if b >= starts.size else starts[b]
        total = float(np.dot(c[:head_end], quartic_gap(a[:head_end] * z + s)))
        if b < starts.size:
            t = a[starts[b]] * z
            pz = t ** np.arange(2 * _K + 1)
            ps = s ** np.arange(2 * _K + 1)
            total += float(np.sum(_SER_C * pz[_SER_J] * ps[2 * _SER_K - _SER_J] * self._Q[b, _SER_J]))
        return quad + total

    def ng_direct(self, z: float, r: float = 0.0) -> float:
        """N G_N(z; r) by the defining sum (reference implementation)."""
        s = self._shift(r)
        return 0.5 * self.n * z * z - float(np.dot(self._c, logcosh(self._a * z + s)))

    def ng_vec(self, zs, r: float = 0.0) -> np.ndarray:
        """N G_N(z; r) for an array of z (same split as :meth:`ng`, batched)."""
        zs = np.asarray(zs, dtype=float)
        flat = zs.ravel()
        s = self._shift(r)
        out = 0.5 * flat * flat * self.curvature - flat * s * self.alpha * self.sum_w - 0.5 * self.n * s * s
        a, c = self._a, self._c
        if self.alpha == 0:
            return (out + self.n * quartic_gap(np.array([s]))[0]).reshape(zs.shape)
        starts = self._starts
        if starts.size == 1 and starts[0] == a.size:
            b = np.full(flat.size, 1)
        elif abs(s) >= _RHO:
            b = np.full(flat.size, starts.size)
        else:
            with np.errstate(divide="ignore"):
                thr = (_RHO - abs(s)) / np.abs(flat)
            b = np.searchsorted(-a[starts], -thr, side="left")
        for bb in np.unique(b):
            rows = np.nonzero(b == bb)[0]
            head_end = a.size if bb >= starts.size else starts[bb]
            if head_end:
                step = max(1, 4_000_000 // head_end)
                for k in range(0, rows.size, step):
                    rr = rows[k : k + step]
                    out[rr] += quartic_gap(flat[rr, None] * a[None, :head_end] + s) @ c[:head_end]
            if bb < starts.size and head_end < a.size:
                t = a[starts[bb]] * flat[rows]
                pz = t[:, None] ** _SER_J[None, :]
                coef = _SER_C * s ** (2 * _SER_K - _SER_J) * self._Q[bb, _SER_J]
                out[rows] += pz @ coef
        return out.reshape(zs.shape)

    def ng_slope_ratio(self, z: float) -> float:
        """(d/dz N G_N(z; 0)) / z; zero exactly at the stationary points z != 0."""
        x = self._a * z
        # N - sum a^2 tanh(x)/x = curvature - sum a^2 (tanh(x)/x - 1)
        return self.curvature - float(np.dot(self._c * self._a**2, tanhc_minus_one(x)))

    @property
    def scale(self) -> float:
        """Width of the Gaussian part of exp(-N G_N) away from criticality."""
        return 1.0 / math.sqrt(self.n)

    def log_integral(self, r: float = 0.0) -> float:
        """log of the integral of exp(-N G_N(z; r)) dz."""
        return log_integral(lambda z: self.ng(z, r), 0.25 * self.scale, lambda zs: self.ng_vec(zs, r))

    @cached_property
    def log_integral0(self) -> float:
        return self.log_integral(0.0)


def g_n(z: float, r: float, gn: GnFunction) -> float:
    """G_N(z; r) = z^2/2 - (1/N) sum_i log cosh(alpha_N w_i z + r / N^lam)."""
    return gn.ng(z, r) / gn.n


def mgf_ratio(r: float, gn: GnFunction) -> float:
    """E~[exp(r S_N / N^lam)] as a ratio of two exp(-N G_N) integrals."""
    if r == 0:
        return 1.0
    return math.exp(gn.log_integral(r) - gn.log_integral0)


def log_partition(gn: GnFunction) -> float:
    """log Z~_N = N log 2 + (1/2) log(N / 2 pi) + log int exp(-N G_N(z; 0)) dz."""
    n = gn.n
    return n * math.log(2.0) + 0.5 * math.log(n / (2.0 * math.pi)) + gn.log_integral0
