"""Hypothesis strategies shared by the test modules."""
from fractions import Fraction

from hypothesis import strategies as st

from stldist.formula import (
    TRUE,
    And,
    Eventually,
    Globally,
    Interval,
    Not,
    Or,
    Pred,
    Until,
)
from stldist.monitor import Trace

GRID5 = [Fraction(k, 4) for k in range(5)]


def thresholds(grid=None):
    if grid is not None:
        return st.sampled_from(grid)
    return st.integers(0, 20).map(lambda k: Fraction(k, 20))


def intervals(max_hi):
    return st.integers(0, max_hi).flatmap(lambda lo: st.integers(lo, max_hi).map(lambda hi: Interval(lo, hi)))


def formulas(max_dim=1, max_depth=3, max_hi=3, grid=None, negation=True, until=True, true_leaf=True):
    """Random formulae of AST depth at most ``max_depth``."""
    preds = st.builds(Pred, st.integers(1, max_dim), st.sampled_from(["<=", ">="]), thresholds(grid))
    leaves = st.one_of(preds, st.just(TRUE)) if true_leaf else preds

    def extend(sub):
        options = [
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Globally, intervals(max_hi), sub),
            st.builds(Eventually, intervals(max_hi), sub),
        ]
        if negation:
            options.append(st.builds(Not, sub))
        if until:
            options.append(st.builds(Until, sub, intervals(max_hi), sub))
        return st.one_of(options)

    return st.recursive(leaves, extend, max_leaves=2 ** max_depth).filter(lambda f: _depth(f) <= max_depth)


def _depth(f):
    kids = f.children()
    return 0 if not kids else 1 + max(_depth(k) for k in kids)


def traces(T, n=1, grid=None):
    value = st.sampled_from(grid) if grid is not None else st.integers(0, 100).map(lambda k: Fraction(k, 100))
    row = st.lists(value, min_size=n, max_size=n)
    return st.lists(row, min_size=T + 1, max_size=T + 1).map(lambda rows: Trace.from_rows(rows, [(0, 1)] * n))
