"""STL abstract syntax and structural rewrites.

Formulae are immutable trees of frozen dataclasses, so they hash, compare
structurally and can be shared between threads.  Thresholds are kept as
:class:`fractions.Fraction` whenever they come from decimal text so that
robustness values and distances stay exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Iterator, Union

Number = Union[Fraction, int, float]

LE = "<="
GE = ">="


class FormulaError(ValueError):
    """Raised for structurally invalid formulae or unsupported rewrites."""


@dataclass(frozen=True)
class Interval:
    lo: int
    hi: int

    def __post_init__(self):
        if not (isinstance(self.lo, int) and isinstance(self.hi, int)):
            raise FormulaError(f"interval bounds must be integers, got [{self.lo},{self.hi}]")
        if self.lo < 0 or self.lo > self.hi:
            raise FormulaError(f"invalid interval [{self.lo},{self.hi}]")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


class Formula:
    """Base class of all STL nodes."""

    __slots__ = ()

    def __and__(self, other: "Formula") -> "Formula":
        return And(self, other)

    def __or__(self, other: "Formula") -> "Formula":
        return Or(self, other)

    def __invert__(self) -> "Formula":
        return Not(self)

    def __str__(self):
        from .parser import to_text

        return to_text(self)

    def children(self) -> tuple["Formula", ...]:
        return ()


@dataclass(frozen=True, eq=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True, eq=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True, eq=True)
class Pred(Formula):
    """Rectangular predicate ``x<dim> op threshold`` with 1-based ``dim``."""

    dim: int
    op: str
    threshold: Number

    def __post_init__(self):
        if self.op not in (LE, GE):
            raise FormulaError(f"unsupported comparison {self.op!r}")
        if not isinstance(self.dim, int) or self.dim < 1:
            raise FormulaError(f"predicate dimension must be a positive integer, got {self.dim!r}")
        if not isinstance(self.threshold, Real):
            raise FormulaError(f"threshold must be real, got {self.threshold!r}")


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Until(Formula):
    left: Formula
    interval: Interval
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Eventually(Formula):
    interval: Interval
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class Globally(Formula):
    interval: Interval
    arg: Formula

    def children(self):
        return (self.arg,)


TRUE = TrueF()
FALSE = FalseF()


def G(lo: int, hi: int, arg: Formula) -> Globally:
    return Globally(Interval(lo, hi), arg)


def F(lo: int, hi: int, arg: Formula) -> Eventually:
    return Eventually(Interval(lo, hi), arg)


def U(left: Formula, lo: int, hi: int, right: Formula) -> Until:
    return Until(left, Interval(lo, hi), right)


def le(dim: int, threshold) -> Pred:
    return Pred(dim, LE, _exact(threshold))


def ge(dim: int, threshold) -> Pred:
    return Pred(dim, GE, _exact(threshold))


def _exact(value):
    # strings and ints go exact; floats stay floats
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    return value


def conjunction(*parts: Formula) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disjunction(*parts: Formula) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def walk(f: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def predicates(f: Formula) -> list[Pred]:
    return [n for n in walk(f) if isinstance(n, Pred)]


def max_dim(f: Formula) -> int:
    return max((p.dim for p in predicates(f)), default=0)


def has_negation(f: Formula) -> bool:
    return any(isinstance(n, Not) for n in walk(f))


def horizon(f: Formula) -> int:
    if isinstance(f, (TrueF, FalseF, Pred)):
        return 0
    if isinstance(f, Not):
        return horizon(f.arg)
    if isinstance(f, (And, Or)):
        return max(horizon(f.left), horizon(f.right))
    if isinstance(f, Until):
        return f.interval.hi + max(horizon(f.left), horizon(f.right))
    if isinstance(f, (Eventually, Globally)):
        return f.interval.hi + horizon(f.arg)
    raise FormulaError(f"unknown node {f!r}")


def expand_until(f: Until) -> Formula:
    """Rewrite a bounded until as a finite disjunction over its interval.

    ``a U[lo,hi] b`` holds at t iff for some k in [lo,hi], b holds at t+k and
    a holds at every step of [t, t+k].  Robustness is preserved exactly.
    """
    terms = [And(Eventually(Interval(k, k), f.right), Globally(Interval(0, k), f.left))
             for k in f.interval]
    return disjunction(*terms)


def to_nnf(f: Formula) -> Formula:
    """Push negations down to predicates and flip them away."""
    return _nnf(f, negate=False)


def _nnf(f: Formula, negate: bool) -> Formula:
    if isinstance(f, TrueF):
        return FALSE if negate else TRUE
    if isinstance(f, FalseF):
        return TRUE if negate else FALSE
    if isinstance(f, Pred):
        if not negate:
            return f
        return Pred(f.dim, GE if f.op == LE else LE, f.threshold)
    if isinstance(f, Not):
        return _nnf(f.arg, not negate)
    if isinstance(f, And):
        left, right = _nnf(f.left, negate), _nnf(f.right, negate)
        return Or(left, right) if negate else And(left, right)
    if isinstance(f, Or):
        left, right = _nnf(f.left, negate), _nnf(f.right, negate)
        return And(left, right) if negate else Or(left, right)
    if isinstance(f, Globally):
        arg = _nnf(f.arg, negate)
        return Eventually(f.interval, arg) if negate else Globally(f.interval, arg)
    if isinstance(f, Eventually):
        arg = _nnf(f.arg, negate)
        return Globally(f.interval, arg) if negate else Eventually(f.interval, arg)
    if isinstance(f, Until):
        if negate:
            return _nnf(expand_until(f), True)
        return Until(_nnf(f.left, False), f.interval, _nnf(f.right, False))
    raise FormulaError(f"unknown node {f!r}")


def relax(f: Formula, eps) -> Formula:
    """Loosen every predicate threshold by ``eps``.

    ``x >= mu`` becomes ``x >= mu - eps`` and ``x <= mu`` becomes
    ``x <= mu + eps``; robustness at every time shifts by exactly ``eps``.
    """
    if eps < 0:
        raise FormulaError("relaxation must be non-negative")
    if has_negation(f):
        raise FormulaError("relax requires a negation-free formula; apply to_nnf first")
    return _map_preds(f, lambda p: Pred(p.dim, p.op,
                                        p.threshold + eps if p.op == LE else p.threshold - eps))


def scale(f: Formula, factors) -> Formula:
    """Divide each predicate threshold by the factor of its dimension."""
    return _map_preds(f, lambda p: Pred(p.dim, p.op, p.threshold / factors[p.dim - 1]))


def _map_preds(f: Formula, fn) -> Formula:
    if isinstance(f, Pred):
        return fn(f)
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Not):
        return Not(_map_preds(f.arg, fn))
    if isinstance(f, And):
        return And(_map_preds(f.left, fn), _map_preds(f.right, fn))
    if isinstance(f, Or):
        return Or(_map_preds(f.left, fn), _map_preds(f.right, fn))
    if isinstance(f, Until):
        return Until(_map_preds(f.left, fn), f.interval, _map_preds(f.right, fn))
    if isinstance(f, Eventually):
        return Eventually(f.interval, _map_preds(f.arg, fn))
    if isinstance(f, Globally):
        return Globally(f.interval, _map_preds(f.arg, fn))
    raise FormulaError(f"unknown node {f!r}")


def depth(f: Formula) -> int:
    kids = f.children()
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def disjuncts(f: Formula, limit: int = 1024) -> list[Formula]:
    """Split the top level of a negation-free formula into alternatives.

    The disjunction of the returned formulae holds at time 0 exactly when
    ``f`` does.  Or nodes, eventually operators and until operators are
    expanded (an alternative "at step k" becomes ``F[k,k]``), and
    conjunctions and globally operators distribute over their children's
    alternatives while the product stays within ``limit``.
    """
    if isinstance(f, FalseF):
        return []
    if isinstance(f, Or):
        return disjuncts(f.left, limit) + disjuncts(f.right, limit)
    if isinstance(f, Until):
        return disjuncts(expand_until(f), limit)
    if isinstance(f, Eventually) or (isinstance(f, Globally) and f.interval.lo == f.interval.hi):
        inner = disjuncts(f.arg, limit)
        out = []
        for k in f.interval:
            out.extend(_at(k, d) for d in inner)
        return out if len(out) <= limit else [f]
    if isinstance(f, Globally):
        inner = disjuncts(f.arg, limit)
        if len(inner) == 1 and inner[0] == f.arg:
            return [f]
        if not inner:
            return []
        if len(inner) ** (f.interval.hi - f.interval.lo + 1) > limit:
            return [f]
        out = [TRUE]
        for k in f.interval:
            out = [_and(a, _at(k, d)) for a in out for d in inner]
        return out
    if isinstance(f, And):
        left, right = disjuncts(f.left, limit), disjuncts(f.right, limit)
        if not left or not right:
            return []
        if len(left) * len(right) > limit:
            return [f]
        return [_and(a, b) for a in left for b in right]
    return [f]


def _at(k: int, f: Formula) -> Formula:
    if k == 0:
        return f
    if isinstance(f, (TrueF, FalseF)):
        return f
    if isinstance(f, Eventually) and f.interval.lo == f.interval.hi:
        return Eventually(Interval(k + f.interval.lo, k + f.interval.hi), f.arg)
    return Eventually(Interval(k, k), f)


def _and(a: Formula, b: Formula) -> Formula:
    if isinstance(a, TrueF):
        return b
    if isinstance(b, TrueF):
        return a
    return And(a, b)
