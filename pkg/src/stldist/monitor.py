"""Discrete-time traces and the quantitative (robustness) monitor."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .formula import (
    And,
    Eventually,
    FalseF,
    Formula,
    FormulaError,
    Globally,
    Not,
    Or,
    Pred,
    TrueF,
    Until,
    LE,
    horizon,
    max_dim,
)

INF = math.inf


class TraceError(ValueError):
    pass


class TraceTooShortError(TraceError):
    def __init__(self, required: int, available: int):
        self.required = required
        self.available = available
        super().__init__(
            f"trace too short: evaluating needs samples up to t={required}, trace ends at t={available}"
        )


@dataclass(frozen=True)
class Trace:
    """Finite signal prefix ``s[0:T]``.

    ``values[t][j]`` is component ``j+1`` at step ``t``.  ``domain`` holds one
    closed ``(lo, hi)`` range per component; every sample must lie inside it.
    """

    values: tuple
    domain: tuple

    def __post_init__(self):
        if len(self.values) < 1:
            raise TraceError("trace needs at least one sample")
        n = len(self.domain)
        if n < 1:
            raise TraceError("trace needs at least one dimension")
        for t, row in enumerate(self.values):
            if len(row) != n:
                raise TraceError(f"sample {t} has {len(row)} components, expected {n}")
            for j, (v, (lo, hi)) in enumerate(zip(row, self.domain)):
                if not lo <= v <= hi:
                    raise TraceError(f"sample x{j + 1}[{t}]={v} outside domain [{lo}, {hi}]")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], domain: Sequence[Sequence] | None = None) -> "Trace":
        rows = tuple(tuple(_num(v) for v in (r if _is_seq(r) else (r,))) for r in rows)
        if domain is None:
            n = len(rows[0]) if rows else 1
            domain = [(0, 1)] * n
        domain = tuple((_num(lo), _num(hi)) for lo, hi in domain)
        return cls(rows, domain)

    @property
    def T(self) -> int:
        return len(self.values) - 1

    @property
    def n(self) -> int:
        return len(self.domain)

    def __len__(self):
        return len(self.values)

    def at(self, t: int, dim: int):
        """Value of 1-based component ``dim`` at step ``t``."""
        return self.values[t][dim - 1]

    def column(self, dim: int) -> list:
        return [row[dim - 1] for row in self.values]


def _is_seq(x) -> bool:
    return hasattr(x, "__len__") and not isinstance(x, (str, bytes))


def _num(v):
    if isinstance(v, (Fraction, int)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    return float(v)


def robustness(s: Trace, f: Formula, t: int = 0):
    """Robustness degree of ``s`` against ``f`` at step ``t``.

    Non-negative values mean satisfaction.  The true and false constants
    score +inf and -inf.
    """
    need = t + horizon(f)
    if need > s.T:
        raise TraceTooShortError(need, s.T)
    if max_dim(f) > s.n:
        raise FormulaError(f"formula uses x{max_dim(f)} but the trace has {s.n} dimensions")
    return _rho(s, f, t)


def _rho(s: Trace, f: Formula, t: int):
    if isinstance(f, Pred):
        x = s.values[t][f.dim - 1]
        return f.threshold - x if f.op == LE else x - f.threshold
    if isinstance(f, TrueF):
        return INF
    if isinstance(f, FalseF):
        return -INF
    if isinstance(f, Not):
        return -_rho(s, f.arg, t)
    if isinstance(f, And):
        return min(_rho(s, f.left, t), _rho(s, f.right, t))
    if isinstance(f, Or):
        return max(_rho(s, f.left, t), _rho(s, f.right, t))
    if isinstance(f, Globally):
        return min(_rho(s, f.arg, t + k) for k in f.interval)
    if isinstance(f, Eventually):
        return max(_rho(s, f.arg, t + k) for k in f.interval)
    if isinstance(f, Until):
        best = -INF
        running = INF
        prefix = t
        for k in f.interval:
            # running = min of left over [t, t+k]
            while prefix <= t + k:
                running = min(running, _rho(s, f.left, prefix))
                prefix += 1
            best = max(best, min(_rho(s, f.right, t + k), running))
        return best
    raise FormulaError(f"unknown node {f!r}")


def satisfies(s: Trace, f: Formula, t: int = 0) -> bool:
    return robustness(s, f, t) >= 0
