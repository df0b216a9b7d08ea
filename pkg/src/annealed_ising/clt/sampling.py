"""Exact sampling of S_N under P~_N at B = 0.

The Hubbard-Stratonovich representation makes P~_N a mixture: draw z with
density proportional to exp(-N G_N(z; 0)) (z is the standard Gaussian
auxiliary field divided by sqrt(N)), then draw independent spins with
P(s_i = +1 | z) = e^{x_i} / (2 cosh x_i), x_i = alpha_N w_i z.

z is drawn by rejection from a piecewise-constant envelope on 4096 cells of
roughly equal mass. On every cell N G_N is monotone (the cell edges include
its stationary points), so the envelope exp(-min over the edges) dominates
the density and the draw is exact; the squeeze exp(-max over the edges)
accepts most proposals without evaluating N G_N. Mass beyond the point where
N G_N exceeds its minimum by 80 is dropped (relative size < e^-80).

Given |z|, the number of up spins is a Poisson-binomial variable. With few
distinct weights it is a sum of binomials. Otherwise the sorted weights are
cut into blocks spanning a factor 1.02; inside a block with extreme
probabilities lo <= p_i <= hi, a uniform U_i < lo gives an up spin for sure,
lo <= U_i < hi leaves the spin undecided, and the undecided vertices form a
uniformly random subset. Each undecided vertex i is up with probability
(p_i - lo) / (hi - lo). This reproduces the Poisson-binomial law exactly
while touching only a few vertices per sample.
"""

from __future__ import annotations

import numpy as np
from scipy import optimize, special

from ..errors import ConfigError, NumericalError
from ..model import ModelSpec
from ..weights import WeightSequence
from ._laplace import _outer_limit
from .gn import GnFunction

N_CELLS = 4096
_GROUPED = 256
_BLOCK_RATIO = 1.02
_BATCH = 8192
_SAFETY = 1e-9


class _ZSampler:
    """Rejection sampler for |z| with density proportional to exp(-N G_N(z; 0)) on z >= 0."""

    def __init__(self, gn: GnFunction):
        self.gn = gn
        h = gn.ng
        zhi = _outer_limit(h, 1.0, 0.25 * gn.scale, 0.0)
        stationary = [0.0]
        if gn.curvature < 0:
            # (dh/dz)/z increases with z and starts negative: one positive root
            ratio = gn.ng_slope_ratio
            z0 = optimize.brentq(ratio, zhi * 1e-12, zhi, xtol=1e-15 * zhi, rtol=1e-15)
            stationary.append(z0)
        fine = np.union1d(np.linspace(0.0, zhi, 20001), stationary)
        hf = gn.ng_vec(fine)
        hmin = hf.min()
        dens = np.exp(-(hf - hmin))
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(fine))])
        if not cdf[-1] > 0:
            raise NumericalError("z density underflows on the whole grid")
        nodes = np.interp(np.linspace(0.0, cdf[-1], N_CELLS + 1), cdf, fine)
        nodes = np.union1d(nodes, stationary + [zhi])
        hn = gn.ng_vec(nodes)
        self.hmin = min(hmin, hn.min())
        lo_edge, hi_edge = hn[:-1], hn[1:]
        self.left = nodes[:-1]
        self.width = np.diff(nodes)
        self.env = np.exp(-(np.minimum(lo_edge, hi_edge) - self.hmin)) * (1.0 + _SAFETY)
        self.squeeze = np.exp(-(np.maximum(lo_edge, hi_edge) - self.hmin)) * (1.0 - _SAFETY)
        mass = self.env * self.width
        self.cum = np.cumsum(mass) / mass.sum()
        self.proposals = 0
        self.evaluations = 0

    def draw(self, k: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(0)
        while out.size < k:
            m = int((k - out.size) * 1.05) + 16
            self.proposals += m
            cell = np.minimum(np.searchsorted(self.cum, rng.random(m), side="right"), self.cum.size - 1)
            z = self.left[cell] + rng.random(m) * self.width[cell]
            v = rng.random(m) * self.env[cell]
            ok = v <= self.squeeze[cell]
            todo = np.nonzero(~ok)[0]
            if todo.size:
                self.evaluations += todo.size
                ok[todo] = v[todo] <= np.exp(-(self.gn.ng_vec(z[todo]) - self.hmin))
            out = np.concatenate([out, z[ok]])
        return out[:k]


class _SpinCounter:
    """Exact draws of the number of up spins given z >= 0."""

    def __init__(self, gn: GnFunction):
        self.n = gn.n
        self.a = gn._a  # distinct alpha w, descending
        self.c = gn._c.astype(np.int64)
        self.grouped = self.a.size <= _GROUPED or gn.alpha == 0
        if not self.grouped:
            a = self.a
            starts = [0]
            while True:
                nxt = int(np.searchsorted(-a, -a[starts[-1]] / _BLOCK_RATIO, side="right"))
                if nxt >= a.size:
                    break
                starts.append(nxt)
            self.starts = np.array(starts)
            self.ends = np.append(self.starts[1:], a.size)
            cum = np.concatenate([[0], np.cumsum(self.c)])
            self.vstart = cum[self.starts]
            self.nb = cum[self.ends] - self.vstart
            # vertex position -> index of its distinct weight
            self.value_of = None if np.all(self.c == 1) else np.repeat(np.arange(a.size), self.c)

    def draw(self, z: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        if self.grouped:
            p = special.expit(2.0 * z[:, None] * self.a[None, :])
            return rng.binomial(self.c[None, :], p).sum(axis=1)
        lo = special.expit(2.0 * z[:, None] * self.a[None, self.ends - 1])
        hi = special.expit(2.0 * z[:, None] * self.a[None, self.starts])
        nb = np.broadcast_to(self.nb[None, :], lo.shape)
        sure = rng.binomial(nb, lo)
        rest_p = np.where(lo < 1.0, (hi - lo) / np.where(lo < 1.0, 1.0 - lo, 1.0), 0.0)
        unc = rng.binomial(nb - sure, np.clip(rest_p, 0.0, 1.0))
        up = sure.sum(axis=1)
        total = int(unc.sum())
        if total:
            samp, blk = np.nonzero(unc)
            reps = unc[samp, blk]
            samp = np.repeat(samp, reps)
            blk = np.repeat(blk, reps)
            off = self._distinct_offsets(samp, blk, rng)
            vert = self.vstart[blk] + off
            idx = vert if self.value_of is None else self.value_of[vert]
            p = special.expit(2.0 * z[samp] * self.a[idx])
            l_, h_ = lo[samp, blk], hi[samp, blk]
            q = np.clip((p - l_) / (h_ - l_), 0.0, 1.0)
            acc = rng.random(total) < q
            up += np.bincount(samp[acc], minlength=z.size)
        return up

    def _distinct_offsets(self, samp, blk, rng):
        """Uniform offsets in each block, redrawn until distinct within every (sample, block).

        The procedure only compares offsets for equality, so it is invariant
        under relabelling the vertices of a block; the chosen set is
        therefore a uniformly random subset of the right size.
        """
        nb = self.nb[blk]
        off = rng.integers(0, nb)
        base = (samp.astype(np.int64) * self.nb.size + blk) * int(self.nb.max())
        while True:
            code = base + off
            order = np.argsort(code)
            cs = code[order]
            dup = np.zeros(off.size, dtype=bool)
            dup[1:] = cs[1:] == cs[:-1]
            if not dup.any():
                return off
            redo = order[dup]
            off[redo] = rng.integers(0, nb[redo])


def exact_sample(ws: WeightSequence, spec: ModelSpec, n_samples: int, seed: int, *, return_z: bool = False):
    """Draw ``n_samples`` exact samples of S_N under P~_N.

    Parameters
    ----------
    ws : WeightSequence
    spec : ModelSpec
        Only ``spec.theta`` is used; ``b_field`` must be 0.
    n_samples : int
    seed : int
        Seed for ``numpy.random.default_rng``; output is a deterministic
        function of (inputs, seed).
    return_z : bool
        Also return the auxiliary z values (signed).

    Returns
    -------
    ndarray of int64 (and ndarray of float if ``return_z``)
    """
    if spec.b_field != 0:
        raise ConfigError("exact sampling is implemented for B = 0 only")
    if not (isinstance(n_samples, (int, np.integer)) and n_samples >= 1):
        raise ConfigError(f"n_samples must be a positive integer, got {n_samples!r}")
    rng = np.random.default_rng(seed)
    gn = GnFunction(ws, spec.theta)
    zs = _ZSampler(gn)
    counter = _SpinCounter(gn)
    out = np.empty(n_samples, dtype=np.int64)
    zout = np.empty(n_samples)
    for s in range(0, n_samples, _BATCH):
        k = min(_BATCH, n_samples - s)
        z = zs.draw(k, rng)
        up = counter.draw(z, rng)
        sign = np.where(rng.random(k) < 0.5, -1, 1)
        out[s : s + k] = sign * (2 * up - gn.n)
        zout[s : s + k] = sign * z
    return (out, zout) if return_z else out


def s_scaled(samples, n: int, lam: float) -> np.ndarray:
    """S_N / N^lam."""
    return np.asarray(samples, dtype=float) / n**lam
