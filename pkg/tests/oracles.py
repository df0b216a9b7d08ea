"""Brute-force reference computations used by several test modules."""

import itertools
import math

import numpy as np


def all_spins(n):
    return np.array(list(itertools.product((-1.0, 1.0), repeat=n)))


def tilde_law(w, theta, b_field=0.0):
    """(support, probabilities, log Z) of P~_N by listing all 2^n configurations."""
    w = np.asarray(w, dtype=float)
    s = all_spins(w.size)
    energy = theta / (2 * w.sum()) * (s @ w) ** 2 + b_field * s.sum(axis=1)
    top = energy.max()
    weights = np.exp(energy - top)
    total = s.sum(axis=1).astype(int)
    support = np.arange(-w.size, w.size + 1, 2)
    probs = np.array([weights[total == v].sum() for v in support])
    return support, probs / probs.sum(), top + math.log(weights.sum())


def exact_law(w, beta, b_field=0.0):
    """Law of S_N under the annealed GRG measure with J_ij = (1/2) log((e^b p + 1 - p)/(e^-b p + 1 - p))."""
    w = np.asarray(w, dtype=float)
    ww = np.outer(w, w)
    p = ww / (w.sum() + ww)
    J = 0.5 * np.log((math.exp(beta) * p + 1 - p) / (math.exp(-beta) * p + 1 - p))
    s = all_spins(w.size)
    energy = 0.5 * np.einsum("ki,ij,kj->k", s, J, s) + b_field * s.sum(axis=1)
    weights = np.exp(energy - energy.max())
    total = s.sum(axis=1).astype(int)
    support = np.arange(-w.size, w.size + 1, 2)
    probs = np.array([weights[total == v].sum() for v in support])
    return support, probs / probs.sum()
