"""Big-M encoding of STL satisfaction.

Each (subformula, time) pair gets one activation binary ``z``; ``z = 1``
forces the subformula to hold at that time.  Only this direction is
encoded because the formulae are negation free and we only ever assert
truth, so the reverse implications can never be binding.  Subformulae that
are decided by the variable bounds alone fold into constants and get no
binary.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from ..formula import (
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
    has_negation,
    horizon,
    to_nnf,
)
from .model import MilpModel

ASSERT_TRUE = "assert-true"
ASSERT_FALSE = "assert-false"


class Encoder:
    """Adds satisfaction constraints for formulae to a shared model.

    ``trace_vars[j][t]`` names the variable for component ``j+1`` at step ``t``.
    """

    def __init__(self, model: MilpModel, trace_vars: Sequence[Sequence[str]], prefix: str = "z"):
        self.model = model
        self.trace_vars = trace_vars
        self.prefix = prefix
        self._memo: dict = {}
        self._count = 0
        self.big_m: list = []

    def encode(self, f: Formula, polarity: str = ASSERT_TRUE, eps_var: str | None = None):
        """Constrain the model so that ``f`` holds (or fails) at time 0.

        With ``eps_var`` the formula is read as its relaxation by that
        variable; failing the relaxation is encoded as satisfying the NNF
        negation with thresholds tightened by the same amount.  Returns the
        root literal: a binary name or a Python bool for decided roots.
        """
        if polarity == ASSERT_TRUE:
            if has_negation(f):
                raise FormulaError("encoding needs a negation-free formula; apply to_nnf first")
            target, eps_sign = f, 1
        elif polarity == ASSERT_FALSE:
            if has_negation(f):
                raise FormulaError("encoding needs a negation-free formula; apply to_nnf first")
            target, eps_sign = to_nnf(Not(f)), -1
        else:
            raise ValueError(f"unknown polarity {polarity!r}")
        T = len(self.trace_vars[0]) - 1
        if horizon(target) > T:
            raise FormulaError(f"formula horizon {horizon(target)} exceeds trace bound T={T}")
        return self._pin(self.literal(target, 0, eps_var, eps_sign))

    def assert_holds(self, target: Formula, eps_var: str | None = None, eps_sign: int = 1) -> None:
        """Constrain negation-free ``target`` to hold at time 0.

        Conjunctive structure is asserted directly (predicates become plain
        linear rows) and binaries are only introduced below disjunctions.
        With ``eps_var`` thresholds move by ``eps_sign * eps``: +1 relaxes,
        -1 tightens (the form used for violating a relaxation).
        """
        T = len(self.trace_vars[0]) - 1
        if horizon(target) > T:
            raise FormulaError(f"formula horizon {horizon(target)} exceeds trace bound T={T}")
        self._assert(target, 0, eps_var, eps_sign)

    def _assert(self, f, t, eps_var, eps_sign):
        if isinstance(f, TrueF):
            return
        if isinstance(f, And):
            self._assert(f.left, t, eps_var, eps_sign)
            self._assert(f.right, t, eps_var, eps_sign)
        elif isinstance(f, Globally):
            for k in f.interval:
                self._assert(f.arg, t + k, eps_var, eps_sign)
        elif isinstance(f, Pred):
            row = self._pred_row(f, t, eps_var, eps_sign)
            if row is False:
                self.model.add_constraint({}, ">=", 1, name=f"{self.prefix}_unsat")
            elif row is not True:
                coefs, rhs = row[0], row[1]
                self.model.add_constraint(coefs, "<=", rhs)
        else:
            self._pin(self.literal(f, t, eps_var, eps_sign))

    def _pin(self, root):
        if root is False:
            self.model.add_constraint({}, ">=", 1, name=f"{self.prefix}_unsat")
        elif root is not True:
            self.model.add_constraint({root: 1}, ">=", 1, name=f"{self.prefix}_root")
        return root

    def _new_binary(self) -> str:
        name = f"{self.prefix}{self._count}"
        self._count += 1
        return self.model.add_binary(name)

    def literal(self, f: Formula, t: int, eps_var, eps_sign):
        key = (f, t, eps_var, eps_sign)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        lit = self._literal(f, t, eps_var, eps_sign)
        self._memo[key] = lit
        return lit

    def _literal(self, f, t, eps_var, eps_sign):
        if isinstance(f, TrueF):
            return True
        if isinstance(f, FalseF):
            return False
        if isinstance(f, Pred):
            return self._predicate(f, t, eps_var, eps_sign)
        if isinstance(f, And):
            return self._all([self.literal(f.left, t, eps_var, eps_sign),
                              self.literal(f.right, t, eps_var, eps_sign)])
        if isinstance(f, Or):
            return self._any([self.literal(f.left, t, eps_var, eps_sign),
                              self.literal(f.right, t, eps_var, eps_sign)])
        if isinstance(f, Globally):
            return self._all([self.literal(f.arg, t + k, eps_var, eps_sign) for k in f.interval])
        if isinstance(f, Eventually):
            return self._any([self.literal(f.arg, t + k, eps_var, eps_sign) for k in f.interval])
        if isinstance(f, Until):
            terms = []
            for k in f.interval:
                parts = [self.literal(f.right, t + k, eps_var, eps_sign)]
                parts += [self.literal(f.left, t + j, eps_var, eps_sign) for j in range(k + 1)]
                terms.append(self._all(parts))
            return self._any(terms)
        if isinstance(f, Not):
            raise FormulaError("encoding needs a negation-free formula; apply to_nnf first")
        raise FormulaError(f"unknown node {f!r}")

    def _all(self, lits):
        if any(l is False for l in lits):
            return False
        rest = list(dict.fromkeys(l for l in lits if l is not True))
        if not rest:
            return True
        if len(rest) == 1:
            return rest[0]
        z = self._new_binary()
        for l in rest:
            self.model.add_constraint({z: 1, l: -1}, "<=", 0)
        return z

    def _any(self, lits):
        if any(l is True for l in lits):
            return True
        rest = list(dict.fromkeys(l for l in lits if l is not False))
        if not rest:
            return False
        if len(rest) == 1:
            return rest[0]
        z = self._new_binary()
        coefs = {z: 1}
        for l in rest:
            coefs[l] = coefs.get(l, 0) - 1
        self.model.add_constraint(coefs, "<=", 0)
        return z

    def _pred_row(self, p: Pred, t: int, eps_var, eps_sign):
        """Linear form ``g <= rhs`` of the (shifted) predicate plus the range of g.

        Returns True or False when the bounds alone decide the predicate.
        """
        if p.dim > len(self.trace_vars):
            raise FormulaError(f"predicate on x{p.dim} but only {len(self.trace_vars)} dimensions")
        x = self.trace_vars[p.dim - 1][t]
        lo, hi = self.model.bounds(x)
        mu = Fraction(p.threshold)
        # normalise both forms to  g := dir*x - sgn*eps <= dir*mu
        direction = 1 if p.op == LE else -1
        if eps_var is None:
            rng = _g_range(direction, lo, hi, mu, 0, 0, 0)
            coefs = {x: direction}
        else:
            e_lo, e_hi = self.model.bounds(eps_var)
            rng = _g_range(direction, lo, hi, mu, eps_sign, e_lo, e_hi)
            coefs = {x: direction, eps_var: -eps_sign}
        if isinstance(rng, bool):
            return rng
        rhs, g_max = rng
        return coefs, rhs, g_max

    def _predicate(self, p: Pred, t: int, eps_var, eps_sign):
        """``z = 1`` implies ``x <= mu + s*eps`` (or ``x >= mu - s*eps``)."""
        row = self._pred_row(p, t, eps_var, eps_sign)
        if row is True or row is False:
            return row
        coefs, rhs, g_max = row
        big_m = g_max - rhs
        z = self._new_binary()
        coefs[z] = big_m
        # g <= rhs + M (1 - z)
        self.model.add_constraint(coefs, "<=", rhs + big_m, name=f"{z}_pred")
        self.big_m.append((z, big_m, g_max - rhs))
        return z


@lru_cache(maxsize=4096)
def _g_range(direction, lo, hi, mu, eps_sign, e_lo, e_hi):
    """Range check of ``g = dir*x - sgn*eps`` against ``rhs = dir*mu``.

    True or False when the bounds decide ``g <= rhs``, else ``(rhs, max g)``.
    """
    rhs = direction * mu
    g_max = max(direction * lo, direction * hi) + max(-eps_sign * e_lo, -eps_sign * e_hi)
    g_min = min(direction * lo, direction * hi) + min(-eps_sign * e_lo, -eps_sign * e_hi)
    if g_max <= rhs:
        return True
    if g_min > rhs:
        return False
    return rhs, g_max


def trace_variables(model: MilpModel, domain, T: int, prefix: str = "x") -> list:
    """Declare ``x<j>_<t>`` for every component and step, bounded by the domain."""
    out = []
    for j, (lo, hi) in enumerate(domain, start=1):
        out.append([model.add_continuous(f"{prefix}{j}_{t}", lo, hi) for t in range(T + 1)])
    return out


def encode_satisfaction(model: MilpModel, f: Formula, trace_vars, polarity: str = ASSERT_TRUE,
                        eps_var: str | None = None, prefix: str = "z"):
    return Encoder(model, trace_vars, prefix).encode(f, polarity, eps_var)
