"""Model kinds, edge probabilities, couplings and the degree law."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConfigError
from .weights import WeightSequence


class ModelKind(enum.Enum):
    """Annealed Ising on the generalized random graph, or rank-1 inhomogeneous Curie-Weiss."""

    ANNEALED_GRG = "grg"
    RANK_ONE_ICW = "icw"

    def effective_coupling(self, beta: float) -> float:
        return math.sinh(beta) if self is ModelKind.ANNEALED_GRG else float(beta)

    def beta_from_coupling(self, theta: float) -> float:
        return math.asinh(theta) if self is ModelKind.ANNEALED_GRG else float(theta)

    def dcoupling_dbeta(self, beta: float) -> float:
        return math.cosh(beta) if self is ModelKind.ANNEALED_GRG else 1.0


@dataclass(frozen=True)
class ModelSpec:
    """Model kind, inverse temperature and external field.

    ``theta`` is the only parameter the mean-field quantities see: sinh(beta)
    for the annealed GRG and beta itself for the ICW.
    """

    kind: ModelKind
    beta: float
    b_field: float = 0.0

    def __post_init__(self):
        if not (self.beta >= 0 and math.isfinite(self.beta)):
            raise ConfigError(f"beta must be a finite nonnegative real, got {self.beta}")
        if not (self.b_field >= 0 and math.isfinite(self.b_field)):
            raise ConfigError(f"field B must be finite and >= 0, got {self.b_field}")

    @property
    def theta(self) -> float:
        return self.kind.effective_coupling(self.beta)

    @classmethod
    def from_theta(cls, kind: ModelKind, theta: float, b_field: float = 0.0) -> "ModelSpec":
        return cls(kind, kind.beta_from_coupling(theta), b_field)


def _check_index(ws: WeightSequence, *idx):
    for i in idx:
        if not 1 <= i <= ws.n:
            raise ConfigError(f"vertex index {i} outside 1..{ws.n}")


def edge_probability(ws: WeightSequence, i: int, j: int) -> float:
    """GRG edge probability w_i w_j / (l_N + w_i w_j), 1-based indices."""
    _check_index(ws, i, j)
    x = ws.w[i - 1] * ws.w[j - 1]
    return float(x / (ws.ell + x))


def edge_probability_matrix(ws: WeightSequence) -> np.ndarray:
    ww = np.outer(ws.w, ws.w)
    return ww / (ws.ell + ww)


def grg_coupling(beta, p):
    """Annealed GRG coupling (1/2) log[(e^b p + 1 - p) / (e^-b p + 1 - p)].

    Written as (1/2)[log1p(p expm1(b)) - log1p(p expm1(-b))] so small p and
    small beta lose no digits. Vectorized over ``p``.
    """
    p = np.asarray(p, dtype=float)
    out = 0.5 * (np.log1p(p * np.expm1(beta)) - np.log1p(p * np.expm1(-beta)))
    return float(out) if out.ndim == 0 else out


def coupling_expansion_gap(beta: float, p):
    """grg_coupling minus its second-order expansion p sinh b - p^2 sinh b (cosh b - 1)."""
    p = np.asarray(p, dtype=float)
    s = math.sinh(beta)
    out = grg_coupling(beta, p) - (p * s - p * p * s * (math.cosh(beta) - 1.0))
    return float(out) if np.ndim(out) == 0 else out


def rank1_coupling(ws: WeightSequence, i: int, j: int, theta: float) -> float:
    """ICW coupling theta w_i w_j / l_N."""
    _check_index(ws, i, j)
    return float(theta * ws.w[i - 1] * ws.w[j - 1] / ws.ell)


def degree_pmf(k: int, ws: WeightSequence) -> float:
    """Mixed-Poisson degree law (1/n) sum_i e^{-w_i} w_i^k / k!."""
    if k < 0:
        return 0.0
    w = ws.w
    logt = -w + k * np.log(w) - special.gammaln(k + 1)
    return float(np.mean(np.exp(logt)))
