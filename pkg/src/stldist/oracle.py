"""Reference semantics by explicit enumeration.

With rectangular predicates the bounded-time language of a formula is a
finite union of closed boxes in R^(n(T+1)).  This module builds that union
directly from the formula, which is exponential but independent of both
the robustness monitor and the MILP encoding, so it serves as a test oracle
for them.  Coordinates are ordered dimension-major: ``(j - 1) * (T + 1) + t``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .formula import (
    And,
    Eventually,
    FalseF,
    Formula,
    FormulaError,
    Globally,
    LE,
    Not,
    Or,
    Pred,
    TrueF,
    Until,
    horizon,
    max_dim,
)
from .geometry import contains, directed_hausdorff, intersect, prune_contained
from .monitor import Trace

DEFAULT_BUDGET = 200_000


class LanguageBudgetError(RuntimeError):
    """The explicit box union grew past the configured budget."""


@dataclass(frozen=True)
class LanguageBoxUnion:
    n: int
    T: int
    domain: tuple
    boxes: tuple

    def coord(self, dim: int, t: int) -> int:
        return (dim - 1) * (self.T + 1) + t

    @property
    def empty(self) -> bool:
        return not self.boxes

    def contains_trace(self, s: Trace) -> bool:
        point = [s.values[t][j] for j in range(self.n) for t in range(self.T + 1)]
        return any(all(lo <= x <= hi for x, (lo, hi) in zip(point, b)) for b in self.boxes)

    def full_box(self) -> tuple:
        return tuple(self.domain[j] for j in range(self.n) for _ in range(self.T + 1))


INF = math.inf


class _Builder:
    """Builds box unions over the unbounded space; clipping to the domain
    happens once at the end so that predicate boundaries at the domain edge
    survive complementation (``!(x >= 0)`` still admits ``x = 0``)."""

    def __init__(self, n, T, domain, budget):
        self.n, self.T, self.domain, self.budget = n, T, domain, budget
        self.full = tuple((-INF, INF) for _ in range(n * (T + 1)))
        self.bounds = tuple(domain[j] for j in range(n) for _ in range(T + 1))
        self.memo: dict = {}

    def clip(self, boxes):
        out = []
        for b in boxes:
            c = intersect(b, self.bounds)
            if c is not None:
                out.append(c)
        return prune_contained(out)

    def _check(self, boxes):
        if len(boxes) > self.budget:
            raise LanguageBudgetError(f"language exceeds {self.budget} boxes")
        return boxes

    def build(self, f: Formula, t: int) -> list:
        key = (f, t)
        if key not in self.memo:
            self.memo[key] = self._build(f, t)
        return self.memo[key]

    def _build(self, f, t):
        if isinstance(f, TrueF):
            return [self.full]
        if isinstance(f, FalseF):
            return []
        if isinstance(f, Pred):
            c = (f.dim - 1) * (self.T + 1) + t
            box = list(self.full)
            box[c] = (-INF, f.threshold) if f.op == LE else (f.threshold, INF)
            return [tuple(box)]
        if isinstance(f, Not):
            return self.complement(self.build(f.arg, t))
        if isinstance(f, And):
            return self.meet(self.build(f.left, t), self.build(f.right, t))
        if isinstance(f, Or):
            return self.join(self.build(f.left, t), self.build(f.right, t))
        if isinstance(f, Globally):
            out = [self.full]
            for k in f.interval:
                out = self.meet(out, self.build(f.arg, t + k))
            return out
        if isinstance(f, Eventually):
            out: list = []
            for k in f.interval:
                out = self.join(out, self.build(f.arg, t + k))
            return out
        if isinstance(f, Until):
            out = []
            prefix = [self.full]
            j = t
            for k in f.interval:
                while j <= t + k:
                    prefix = self.meet(prefix, self.build(f.left, j))
                    j += 1
                out = self.join(out, self.meet(prefix, self.build(f.right, t + k)))
            return out
        raise FormulaError(f"unknown node {f!r}")

    def meet(self, A, B):
        out = []
        for a in A:
            for b in B:
                c = intersect(a, b)
                if c is not None:
                    out.append(c)
        return self._check(prune_contained(out))

    def join(self, A, B):
        return self._check(prune_contained(list(A) + list(B)))

    def complement(self, A):
        # closed complement: boundaries belong to both sides
        out = [self.full]
        for a in A:
            pieces = []
            for c, (lo, hi) in enumerate(a):
                if lo > -INF:
                    piece = list(self.full)
                    piece[c] = (-INF, lo)
                    pieces.append(tuple(piece))
                if hi < INF:
                    piece = list(self.full)
                    piece[c] = (hi, INF)
                    pieces.append(tuple(piece))
            out = self.meet(out, pieces)
            if not out:
                break
        return out


def language(f: Formula, domain=None, T: int | None = None, budget: int = DEFAULT_BUDGET) -> LanguageBoxUnion:
    """The bounded-time language of ``f`` as an explicit box union."""
    if T is None:
        T = horizon(f)
    if horizon(f) > T:
        raise FormulaError(f"formula horizon {horizon(f)} exceeds T={T}")
    if domain is None:
        domain = [(0, 1)] * max(1, max_dim(f))
    domain = tuple((Fraction(lo), Fraction(hi)) for lo, hi in domain)
    if max_dim(f) > len(domain):
        raise FormulaError(f"formula uses x{max_dim(f)} but the domain has {len(domain)} dimensions")
    b = _Builder(len(domain), T, domain, budget)
    return LanguageBoxUnion(len(domain), T, domain, tuple(b.clip(b.build(f, 0))))


def brute_directed_ph(A: LanguageBoxUnion, B: LanguageBoxUnion) -> Fraction:
    """Exact sup-inf L-inf distance from the traces of A to those of B.

    Zero when B is empty is not meaningful, so an empty B raises as well as
    an empty A.
    """
    if (A.n, A.T) != (B.n, B.T):
        raise ValueError("languages over different signal spaces")
    if A.empty:
        raise ValueError("directed distance from an empty language")
    if B.empty:
        raise ValueError("directed distance to an empty language")
    return directed_hausdorff(A.boxes, B.boxes)


def sample_satisfying(lang: LanguageBoxUnion, count: int, seed: int = 0, grain: int = 10**6) -> list:
    """Deterministic traces drawn uniformly from randomly chosen boxes.

    Coordinates are rationals on a grid of ``grain`` steps per box side so
    membership stays exact.
    """
    if lang.empty:
        raise ValueError("cannot sample an empty language")
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        box = lang.boxes[rng.randrange(len(lang.boxes))]
        point = [lo + (hi - lo) * Fraction(rng.randint(0, grain), grain) for lo, hi in box]
        rows = [[point[j * (lang.T + 1) + t] for j in range(lang.n)] for t in range(lang.T + 1)]
        out.append(Trace.from_rows(rows, lang.domain))
    return out


# -- space-time projection on a grid ---------------------------------------

HELD = "held"
EXTENDED = "extended"


def _slices(lang: LanguageBoxUnion):
    """Per time step, the value-space boxes reachable by language members."""
    out = []
    for t in range(lang.T + 1):
        boxes = [tuple(b[lang.coord(j, t)] for j in range(1, lang.n + 1)) for b in lang.boxes]
        out.append(prune_contained(boxes))
    return out


def _grid(domain, k):
    axes = []
    for lo, hi in domain:
        step = (hi - lo) / (2 ** k)
        axes.append([lo + step * (i + Fraction(1, 2)) for i in range(2 ** k)])
    cell = Fraction(1)
    for lo, hi in domain:
        cell *= (hi - lo) / (2 ** k)
    return list(product(*axes)), cell


def _inside(point, boxes):
    return any(all(lo <= x <= hi for x, (lo, hi) in zip(point, b)) for b in boxes)


def _covered(slices, convention):
    """Per unit time slab, a predicate telling whether a value point is covered."""
    if convention == HELD:
        # slab [t, t+1] holds v when it is reachable at both ends
        return [lambda v, a=slices[t], b=slices[t + 1]: _inside(v, a) and _inside(v, b)
                for t in range(len(slices) - 1)]
    if convention == EXTENDED:
        return [lambda v, a=s: _inside(v, a) for s in slices]
    raise ValueError(f"unknown convention {convention!r}")


def _refine(measure_at, resolution, max_level):
    prev = measure_at(1)
    for k in range(2, max_level + 1):
        cur = measure_at(k)
        if abs(cur - prev) < resolution:
            return cur
        prev = cur
    raise LanguageBudgetError(f"grid measure did not settle within {resolution} by level {max_level}")


def grid_projection_measure(f: Formula, resolution=Fraction(1, 100), domain=None, T: int | None = None,
                            convention: str = HELD, max_level: int = 12) -> Fraction:
    """Grid estimate of the space-time area swept by the traces of ``f``.

    ``held`` covers the slab between samples t and t+1 with the values that
    are reachable at both samples; ``extended`` holds each sample value over
    [t, t+1].  The value grid is halved until two successive estimates
    differ by less than ``resolution``.
    """
    lang = language(f, domain, T)
    if lang.n > 2:
        raise ValueError("grid projection supports at most two dimensions")
    slabs = _covered(_slices(lang), convention)

    def measure_at(k):
        points, cell = _grid(lang.domain, k)
        return sum(cell * sum(1 for v in points if cov(v)) for cov in slabs)

    return _refine(measure_at, resolution, max_level)


def grid_projection_symdiff(f1: Formula, f2: Formula, resolution=Fraction(1, 100), domain=None,
                            T: int | None = None, convention: str = HELD, max_level: int = 12) -> Fraction:
    """Grid estimate of the area of the symmetric difference of two projections."""
    if T is None:
        T = max(horizon(f1), horizon(f2))
    if domain is None:
        domain = [(0, 1)] * max(1, max_dim(f1), max_dim(f2))
    l1, l2 = language(f1, domain, T), language(f2, domain, T)
    if l1.n > 2:
        raise ValueError("grid projection supports at most two dimensions")
    s1, s2 = _covered(_slices(l1), convention), _covered(_slices(l2), convention)

    def measure_at(k):
        points, cell = _grid(l1.domain, k)
        return sum(cell * sum(1 for v in points if a(v) != b(v)) for a, b in zip(s1, s2))

    return _refine(measure_at, resolution, max_level)


def is_subset(A: LanguageBoxUnion, B: LanguageBoxUnion) -> bool:
    """Box-wise containment test (sufficient, exact when A's boxes each fit in one B box)."""
    return all(any(contains(b, a) for b in B.boxes) for a in A.boxes)
