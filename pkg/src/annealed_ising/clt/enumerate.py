"""Brute-force laws of the total spin for small systems (n <= 22)."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..errors import ConfigError
from ..model import ModelKind, ModelSpec, edge_probability_matrix, grg_coupling
from ..weights import WeightSequence

MAX_ENUMERATE = 22
_CHUNK_BITS = 16


@dataclass(frozen=True)
class SpinLaw:
    """Law of S_N on {-N, -N+2, ..., N}.

    ``log_partition`` is log of the total Boltzmann weight (the normalizer
    of the enumerated measure).
    """

    support: np.ndarray
    probabilities: np.ndarray
    log_partition: float

    def mgf(self, t: float) -> float:
        """E[exp(t S_N)]."""
        return float(np.exp(special.logsumexp(t * self.support, b=self.probabilities)))

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["s", "probability"])
        for s, p in zip(self.support, self.probabilities):
            wr.writerow([int(s), repr(float(p))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SpinLaw":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip() for h in rows[0]] != ["s", "probability"]:
            raise ConfigError("spin-law CSV must have header 's,probability'")
        body = [r for r in rows[1:] if r]
        return cls(
            np.array([int(r[0]) for r in body]), np.array([float(r[1]) for r in body]), math.nan
        )


def _configs(n, start, stop):
    """Spin configurations with indices start..stop-1 as a (k, n) +-1 array."""
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1
    return 2.0 * bits - 1.0


def enumerate_spin_law(ws: WeightSequence, spec: ModelSpec, measure: str = "tilde") -> SpinLaw:
    """Exact law of S_N by summing over all 2^n configurations.

    ``measure="tilde"`` weights configurations by
    exp{theta/(2 l_N) (sum_i w_i s_i)^2 + B S_N}. ``measure="exact"`` uses
    exp{(1/2) sum_{i,j} J_ij s_i s_j + B S_N} with the annealed GRG
    couplings J_ij = grg_coupling(beta, p_ij), diagonal included (it only
    shifts all energies by the same constant). For an ICW ``spec`` the GRG
    inverse temperature with the same theta, asinh(theta), is used.
    """
    if measure not in ("tilde", "exact"):
        raise ConfigError(f"measure must be 'tilde' or 'exact', got {measure!r}")
    n = ws.n
    if n > MAX_ENUMERATE:
        raise ConfigError(f"enumeration is limited to n <= {MAX_ENUMERATE}, got {n}")
    w = ws.w
    B = spec.b_field
    if measure == "exact":
        beta = spec.beta if spec.kind is ModelKind.ANNEALED_GRG else math.asinh(spec.theta)
        J = grg_coupling(beta, edge_probability_matrix(ws))

        def energy(x):
            return 0.5 * np.einsum("ki,ki->k", x @ J, x) + B * x.sum(axis=1)

    else:
        c = spec.theta / ws.ell

        def energy(x):
            m = x @ w
            return 0.5 * c * m * m + B * x.sum(axis=1)

    # ferromagnetic couplings and B >= 0: all spins up has the largest energy
    shift = float(energy(np.ones((1, n)))[0])
    total = 1 << n
    step = 1 << _CHUNK_BITS
    acc = np.zeros(n + 1)
    for start in range(0, total, step):
        x = _configs(n, start, min(start + step, total))
        up = ((x + 1.0) / 2.0).sum(axis=1).astype(np.int64)
        acc += np.bincount(up, weights=np.exp(energy(x) - shift), minlength=n + 1)
    z = acc.sum()
    support = 2 * np.arange(n + 1) - n
    return SpinLaw(support, acc / z, shift + math.log(z))


def tv_distance(p: SpinLaw, q: SpinLaw) -> float:
    """Total variation distance between two laws on the same support."""
    if not np.array_equal(p.support, q.support):
        raise ConfigError("laws live on different supports")
    return 0.5 * float(np.abs(p.probabilities - q.probabilities).sum())


def empirical_law(samples, n: int) -> SpinLaw:
    """Empirical law of integer samples of S_N."""
    s = np.asarray(samples, dtype=np.int64)
    if np.any((s + n) % 2) or np.any(np.abs(s) > n):
        raise ConfigError("samples are not values of S_N")
    counts = np.bincount((s + n) // 2, minlength=n + 1)
    return SpinLaw(2 * np.arange(n + 1) - n, counts / counts.sum(), math.nan)
