"""Vertex-weight sequences and their moments.

A weight sequence is either an explicit vector of positive reals or the
deterministic power-law family ``w_i = cw * (n / i) ** (1 / (tau - 1))``.
Moment sums are exactly rounded (``math.fsum``) so that sequences with
10**7 terms of mixed magnitude keep full precision.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ConfigError

#: Sequences longer than this are never materialized; moments are streamed.
MAX_MATERIALIZED = 10**7
_CHUNK = 1 << 20


@dataclass(frozen=True)
class WeightSequence:
    """Finite vector of strictly positive vertex weights.

    Attributes
    ----------
    n : int
        Number of vertices.
    w : ndarray or None
        The weights (read-only). ``None`` only for power-law sequences with
        ``n > MAX_MATERIALIZED``; those are generated chunk by chunk.
    tau, cw : float or None
        Set for the deterministic power-law family.
    """

    n: int
    w: np.ndarray | None = field(repr=False)
    tau: float | None = None
    cw: float | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("a weight sequence needs at least one vertex")
        if self.w is not None:
            w = np.array(self.w, dtype=float)
            if w.ndim != 1 or w.size != self.n:
                raise ConfigError("w must be a 1-d vector of length n")
            if not np.all(np.isfinite(w)) or np.any(w <= 0):
                raise ConfigError("weights must be finite and strictly positive")
            w.setflags(write=False)
            object.__setattr__(self, "w", w)
        elif self.tau is None:
            raise ConfigError("explicit sequences must carry their weights")

    @classmethod
    def from_array(cls, w) -> "WeightSequence":
        w = np.asarray(w, dtype=float)
        return cls(n=int(w.size), w=w)

    @property
    def is_powerlaw(self) -> bool:
        return self.tau is not None

    def chunks(self, size: int = _CHUNK):
        """Yield the weights in index order, in chunks of at most ``size``."""
        if self.w is not None:
            for s in range(0, self.n, size):
                yield self.w[s : s + size]
            return
        p = 1.0 / (self.tau - 1.0)
        for s in range(0, self.n, size):
            i = np.arange(s + 1, min(s + size, self.n) + 1, dtype=float)
            yield self.cw * (self.n / i) ** p

    @cached_property
    def power_sums(self) -> tuple[float, float, float, float]:
        """(sum w, sum w^2, sum w^3, sum w^4), exactly rounded."""
        parts = [[], [], [], []]
        for c in self.chunks():
            c2 = c * c
            for k, arr in enumerate((c, c2, c2 * c, c2 * c2)):
                parts[k].append(math.fsum(arr))
        return tuple(math.fsum(p) for p in parts)

    @property
    def ell(self) -> float:
        """Total weight l_N."""
        return self.power_sums[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["i", "w"])
        i = 1
        for c in self.chunks():
            for x in c:
                wr.writerow([i, repr(float(x))])
                i += 1
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "WeightSequence":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip() for h in rows[0]] != ["i", "w"]:
            raise ConfigError("weight CSV must have header 'i,w'")
        body = [r for r in rows[1:] if r]
        idx = [int(r[0]) for r in body]
        if idx != list(range(1, len(body) + 1)):
            raise ConfigError("weight CSV indices must run 1..n in order")
        return cls.from_array([float(r[1]) for r in body])


def make_powerlaw_weights(n: int, tau: float, cw: float = 1.0) -> WeightSequence:
    """Deterministic power-law weights ``w_i = cw * (n/i)**(1/(tau-1))``, i = 1..n."""
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ConfigError(f"n must be a positive integer, got {n!r}")
    if not 3.0 < tau < 5.0:
        raise ConfigError(f"tau must lie in (3, 5), got {tau}")
    if not cw > 0:
        raise ConfigError(f"cw must be positive, got {cw}")
    n = int(n)
    if n > MAX_MATERIALIZED:
        return WeightSequence(n=n, w=None, tau=float(tau), cw=float(cw))
    i = np.arange(1, n + 1, dtype=float)
    w = cw * (n / i) ** (1.0 / (tau - 1.0))
    return WeightSequence(n=n, w=w, tau=float(tau), cw=float(cw))


def homogeneous_weights(n: int, c: float = 1.0) -> WeightSequence:
    """Constant weights w_i = c (the classical Curie-Weiss case for c = 1)."""
    if n < 1:
        raise ConfigError("n must be positive")
    return WeightSequence.from_array(np.full(int(n), float(c)))


@dataclass(frozen=True)
class MomentSet:
    """First four moments of a weight law.

    Divergent moments are stored as ``None``; use :attr:`divergent` or
    :meth:`is_finite` rather than comparing with ``inf``.

    ``tau``/``cw`` are carried for the limiting power law so that
    expectations of arbitrary functions can be taken against it.
    """

    m1: float
    m2: float
    m3: float | None
    m4: float | None
    source: str
    n: int | None = None
    tau: float | None = None
    cw: float | None = None

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise ConfigError("m1 and m2 must be positive")

    @property
    def nu(self) -> float:
        return self.m2 / self.m1

    @property
    def divergent(self) -> frozenset[int]:
        return frozenset(k for k, m in ((3, self.m3), (4, self.m4)) if m is None)

    def is_finite(self, k: int) -> bool:
        return k not in self.divergent

    def to_json(self) -> str:
        def enc(v):
            return "inf" if v is None else v

        return json.dumps(
            {
                "n": self.n,
                "m1": self.m1,
                "m2": self.m2,
                "m3": enc(self.m3),
                "m4": enc(self.m4),
                "nu": self.nu,
                "source": self.source,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MomentSet":
        d = json.loads(text)

        def dec(v):
            return None if v == "inf" else float(v)

        ms = cls(
            m1=float(d["m1"]),
            m2=float(d["m2"]),
            m3=dec(d["m3"]),
            m4=dec(d["m4"]),
            source=d["source"],
            n=d["n"],
        )
        if not math.isclose(ms.nu, d["nu"], rel_tol=1e-12):
            raise ConfigError("nu does not equal m2/m1")
        return ms


def empirical_moments(ws: WeightSequence) -> MomentSet:
    """E[W_N^k] = (1/n) sum_i w_i^k for k = 1..4.

    Materialized sequences are averaged as r + mean(w^k - r) with r the
    first term, which returns c^k exactly for constant weights.
    """
    n = ws.n
    if ws.w is None:
        m = [s / n for s in ws.power_sums]
    else:
        w = ws.w
        w2 = w * w
        m = [float(p[0]) + math.fsum(p - p[0]) / n for p in (w, w2, w2 * w, w2 * w2)]
    return MomentSet(
        m1=m[0], m2=m[1], m3=m[2], m4=m[3], source="empirical", n=n, tau=ws.tau, cw=ws.cw
    )


def limiting_moment(k: int, tau: float, cw: float = 1.0) -> float:
    """E[W^k] for the limit law with tail P(W > w) = (cw / w)**(tau - 1), w >= cw."""
    if k >= tau - 1:
        raise ConfigError(f"E[W^{k}] diverges for tau = {tau}")
    return cw**k * (tau - 1.0) / (tau - 1.0 - k)


def limiting_moments(tau: float, cw: float = 1.0) -> MomentSet:
    """Moments of the limit law of the deterministic power-law sequence.

    ``tau = 5`` is accepted: it is the boundary case with a log-divergent
    fourth moment.
    """
    if not 3.0 < tau <= 5.0:
        raise ConfigError(f"tau must lie in (3, 5], got {tau}")
    if not cw > 0:
        raise ConfigError(f"cw must be positive, got {cw}")
    m = [limiting_moment(k, tau, cw) if k < tau - 1 else None for k in (1, 2, 3, 4)]
    return MomentSet(m1=m[0], m2=m[1], m3=m[2], m4=m[3], source="limiting", tau=tau, cw=cw)


def moment_convergence_report(tau: float, cw: float, n_list) -> list[dict]:
    """Gap |m_k(n) - m_k(inf)| for each n, for every finite limiting moment.

    Rows are ``{"n": n, "m1": ..., "gap_m1": ..., ...}``; divergent limiting
    moments get their empirical value and ``gap = None``.
    """
    lim = limiting_moments(tau, cw)
    rows = []
    for n in n_list:
        emp = empirical_moments(make_powerlaw_weights(int(n), tau, cw))
        row = {"n": int(n)}
        for k in (1, 2, 3, 4):
            e = getattr(emp, f"m{k}")
            l_ = getattr(lim, f"m{k}")
            row[f"m{k}"] = e
            row[f"gap_m{k}"] = None if l_ is None else abs(e - l_)
        rows.append(row)
    return rows
