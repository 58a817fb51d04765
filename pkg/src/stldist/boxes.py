"""Area-of-satisfaction boxes.

A formula built from predicates, conjunction, disjunction, globally and
eventually is turned into a tree of box sets.  Leaves hold space-time boxes
whose union approximates the region a satisfying signal sweeps through;
``Choice`` nodes record a disjunction, where either side may be picked.
Values are normalized by a per-dimension maximum so boxes live in
``[0, 1]^n x [0, T]``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

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
)
from .geometry import union_measure

DEFAULT_MAX_RESOLUTIONS = 2 ** 16
JSON_VERSION = 1

_ZERO, _ONE = Fraction(0), Fraction(1)


class AosError(FormulaError):
    """The formula is outside the fragment the box construction handles."""


class AosBudgetError(RuntimeError):
    """Too many choice resolutions."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True, order=True)
class SpaceTimeBox:
    """Box over ``[lt, ut]`` in time; ``bounds`` holds ``(dim, lv, uv)``
    for the constrained dimensions, sorted by dim.  Other dimensions span
    ``[0, 1]``."""

    lt: Fraction
    ut: Fraction
    bounds: tuple = ()

    def __post_init__(self):
        if self.lt > self.ut:
            raise ValueError(f"time window [{self.lt}, {self.ut}] is reversed")
        for d, lv, uv in self.bounds:
            if not (0 <= lv <= uv <= 1):
                raise ValueError(f"value range [{lv}, {uv}] of x{d} is outside [0, 1]")

    @classmethod
    def make(cls, lt, ut, bounds=()) -> "SpaceTimeBox":
        return cls(_q(lt), _q(ut), tuple(sorted((int(d), _q(lv), _q(uv)) for d, lv, uv in bounds)))

    @property
    def dims(self) -> frozenset:
        return frozenset(d for d, _, _ in self.bounds)

    def range_of(self, dim: int):
        for d, lv, uv in self.bounds:
            if d == dim:
                return lv, uv
        return _ZERO, _ONE

    def with_window(self, lt, ut) -> "SpaceTimeBox":
        return SpaceTimeBox(lt, ut, self.bounds)

    def to_geometry(self, n: int, extend: bool = False) -> tuple:
        """Plain box ``((lt, ut), (lv1, uv1), ...)`` over time and all n dims."""
        ut = self.ut + 1 if extend else self.ut
        return ((self.lt, ut),) + tuple(self.range_of(j) for j in range(1, n + 1))

    def to_json(self) -> dict:
        return {
            "lt": float(self.lt),
            "ut": float(self.ut),
            "dims": [{"dim": d, "lv": float(lv), "uv": float(uv)} for d, lv, uv in self.bounds],
        }


def box(t1, t2, x1, x2, dim: int) -> SpaceTimeBox:
    """One-dimension shorthand: ``[t1, t2] x [x1, x2]`` on ``dim``."""
    return SpaceTimeBox.make(t1, t2, [(dim, x1, x2)])


class BoxExpr:
    __slots__ = ()


@dataclass(frozen=True)
class Leaf(BoxExpr):
    boxes: tuple = ()

    @property
    def empty(self) -> bool:
        return not self.boxes


@dataclass(frozen=True)
class Choice(BoxExpr):
    left: BoxExpr
    right: BoxExpr


EMPTY = Leaf(())


@dataclass(frozen=True)
class AosConfig:
    x_max: tuple = ()          # per-dimension normalization, default 1
    delta: Fraction = _ONE     # eventually window width
    T: int | None = None       # default: formula horizon
    extend: bool = False       # hold each sample over [t, t+1]
    max_resolutions: int = DEFAULT_MAX_RESOLUTIONS

    def __post_init__(self):
        object.__setattr__(self, "x_max", tuple(_q(x) for x in self.x_max))
        object.__setattr__(self, "delta", _q(self.delta))
        if any(x <= 0 for x in self.x_max):
            raise ValueError("x_max must be positive")
        if self.delta <= 0:
            raise ValueError("delta must be positive")

    def scale(self, dim: int) -> Fraction:
        return self.x_max[dim - 1] if dim <= len(self.x_max) else _ONE


# -- box algebra ---------------------------------------------------------------


def overlap(b1: SpaceTimeBox, b2: SpaceTimeBox):
    """Common closed time window of two boxes, or None."""
    lo, hi = max(b1.lt, b2.lt), min(b1.ut, b2.ut)
    return (lo, hi) if lo <= hi else None


def _meet_bounds(a: SpaceTimeBox, b: SpaceTimeBox):
    """Intersected value ranges, or None when some shared dim is disjoint."""
    out = {}
    for d, lv, uv in a.bounds + b.bounds:
        plo, phi = out.get(d, (_ZERO, _ONE))
        lo, hi = max(plo, lv), min(phi, uv)
        if lo > hi:
            return None
        out[d] = (lo, hi)
    return tuple((d, lo, hi) for d, (lo, hi) in sorted(out.items()))


def combine(b1: SpaceTimeBox, b2: SpaceTimeBox) -> list:
    """Split two time-overlapping boxes into the overlap window, where value
    ranges intersect, and the remainder slices of each.  An empty result
    means the two boxes cannot both hold on the overlap window."""
    w = overlap(b1, b2)
    if w is None:
        raise ValueError("boxes do not overlap in time")
    inner = _meet_bounds(b1, b2)
    if inner is None:
        return []
    out = [SpaceTimeBox(w[0], w[1], inner)]
    for b in (b1, b2):
        if b.lt < w[0]:
            out.append(b.with_window(b.lt, w[0]))
        if b.ut > w[1]:
            out.append(b.with_window(w[1], b.ut))
    return sorted(set(out))


def _contains(outer: SpaceTimeBox, inner: SpaceTimeBox) -> bool:
    if not (outer.lt <= inner.lt and inner.ut <= outer.ut):
        return False
    for d, lv, uv in outer.bounds:
        ilo, ihi = inner.range_of(d)
        if ilo < lv or ihi > uv:
            return False
    return True


def prune(boxes) -> tuple:
    """Sorted, duplicate-free, without boxes inside another box."""
    unique = sorted(set(boxes), key=lambda b: (b.lt - b.ut, len(b.bounds), b))
    kept: list = []
    for b in unique:
        if not any(_contains(k, b) for k in kept):
            kept.append(b)
    return tuple(sorted(kept))


def conjoin(A: Sequence[SpaceTimeBox], B: Sequence[SpaceTimeBox]):
    """Conjunction of two box sets by a sweep over time.

    Every breakpoint and every gap between breakpoints is an elementary
    segment.  Where one side alone is present its boxes are kept; where both
    are present pairwise intersections are kept, and if none survives the
    whole conjunction is unsatisfiable (``None``).
    """
    if not A or not B:
        return None
    cuts = sorted({b.lt for b in A} | {b.ut for b in A} | {b.lt for b in B} | {b.ut for b in B})
    segments = [(c, c) for c in cuts] + list(zip(cuts, cuts[1:]))
    out = []
    for lo, hi in segments:
        ca = [b for b in A if b.lt <= lo and hi <= b.ut]
        cb = [b for b in B if b.lt <= lo and hi <= b.ut]
        if ca and cb:
            met = [m for a in ca for b in cb if (m := _meet_bounds(a, b)) is not None]
            if not met:
                return None
            out.extend(SpaceTimeBox(lo, hi, m) for m in met)
        elif lo == hi:
            # one side alone at a point: only zero-width boxes add anything
            out.extend(b for b in ca + cb if b.lt == b.ut)
        else:
            out.extend(b.with_window(lo, hi) for b in ca + cb)
    return prune(out)


# -- conversion --------------------------------------------------------------


def leaf_count(e: BoxExpr) -> int:
    if isinstance(e, Leaf):
        return 1
    return leaf_count(e.left) + leaf_count(e.right)


class _Converter:
    def __init__(self, cfg: AosConfig, T: int):
        self.cfg, self.T = cfg, T

    def check(self, e: BoxExpr) -> BoxExpr:
        if leaf_count(e) > self.cfg.max_resolutions:
            raise AosBudgetError(f"more than {self.cfg.max_resolutions} choice resolutions")
        return e

    def convert(self, f: Formula) -> BoxExpr:
        if isinstance(f, TrueF):
            return Leaf((SpaceTimeBox(_ZERO, _q(self.T)),))
        if isinstance(f, FalseF):
            return EMPTY
        if isinstance(f, Pred):
            mu = _q(f.threshold) / self.cfg.scale(f.dim)
            lo, hi = (_ZERO, min(mu, _ONE)) if f.op == LE else (max(mu, _ZERO), _ONE)
            if lo > hi:
                return EMPTY
            return Leaf((SpaceTimeBox(_ZERO, _ZERO, ((f.dim, lo, hi),)),))
        if isinstance(f, Not):
            raise AosError("negation is not supported; convert to negation normal form first")
        if isinstance(f, Until):
            raise AosError("until is not supported by the box construction")
        if isinstance(f, And):
            return self.check(self.conj(self.convert(f.left), self.convert(f.right)))
        if isinstance(f, Or):
            return self.check(Choice(self.convert(f.left), self.convert(f.right)))
        if isinstance(f, Globally):
            return self.shift(self.convert(f.arg), f.interval.lo, f.interval.hi)
        if isinstance(f, Eventually):
            inner = self.convert(f.arg)
            windows = self.windows(f.interval.lo, f.interval.hi)
            parts = [self.shift(inner, a, b) for a, b in windows]
            out = parts[-1]
            for p in reversed(parts[:-1]):
                out = Choice(p, out)
            return self.check(out)
        raise AosError(f"unknown node {f!r}")

    def windows(self, t1: int, t2: int) -> list:
        if t1 == t2:
            return [(_q(t1), _q(t1))]
        out, a, d = [], _q(t1), self.cfg.delta
        while a < t2:
            out.append((a, min(a + d, _q(t2))))
            a += d
        return out

    def shift(self, e: BoxExpr, t1, t2) -> BoxExpr:
        if isinstance(e, Choice):
            return Choice(self.shift(e.left, t1, t2), self.shift(e.right, t1, t2))
        T = _q(self.T)
        return Leaf(prune(b.with_window(min(b.lt + t1, T), min(b.ut + t2, T)) for b in e.boxes))

    def conj(self, a: BoxExpr, b: BoxExpr) -> BoxExpr:
        if isinstance(a, Choice):
            return Choice(self.conj(a.left, b), self.conj(a.right, b))
        if isinstance(b, Choice):
            return Choice(self.conj(a, b.left), self.conj(a, b.right))
        out = conjoin(a.boxes, b.boxes)
        return EMPTY if out is None else Leaf(out)


def aos(f: Formula, cfg: AosConfig | None = None) -> BoxExpr:
    """Area-of-satisfaction box expression of a negation- and until-free formula."""
    cfg = cfg or AosConfig()
    T = horizon(f) if cfg.T is None else cfg.T
    if horizon(f) > T:
        raise FormulaError(f"formula horizon {horizon(f)} exceeds T={T}")
    return _Converter(cfg, T).convert(f)


def resolutions(e: BoxExpr) -> Iterator[tuple]:
    """Every box set reachable by picking one side of each choice, lazily."""
    if isinstance(e, Leaf):
        yield e.boxes
        return
    yield from resolutions(e.left)
    yield from resolutions(e.right)


def union_area(boxes: Sequence[SpaceTimeBox], n: int, extend: bool = False) -> Fraction:
    """Exact measure of the union of boxes in ``[0, T] x [0, 1]^n``."""
    return union_measure([b.to_geometry(n, extend) for b in boxes])


def expr_dims(e: BoxExpr) -> int:
    return max((d for r in resolutions(e) for b in r for d in b.dims), default=0)


# -- export --------------------------------------------------------------------


def expr_to_json(e: BoxExpr) -> dict:
    if isinstance(e, Leaf):
        return {"leaf": [b.to_json() for b in e.boxes]}
    return {"choice": [expr_to_json(e.left), expr_to_json(e.right)]}


def export_json(e: BoxExpr, T=None, indent: int | None = 2) -> str:
    doc = {"version": JSON_VERSION, "T": None if T is None else float(T),
           "resolutions": leaf_count(e), "expr": expr_to_json(e)}
    return json.dumps(doc, indent=indent)


def expr_from_json(doc) -> BoxExpr:
    if "leaf" in doc:
        return Leaf(prune(SpaceTimeBox.make(
            Fraction(str(b["lt"])), Fraction(str(b["ut"])),
            [(d["dim"], Fraction(str(d["lv"])), Fraction(str(d["uv"]))) for d in b["dims"]])
            for b in doc["leaf"]))
    left, right = doc["choice"]
    return Choice(expr_from_json(left), expr_from_json(right))
