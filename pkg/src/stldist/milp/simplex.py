"""Dense two-phase primal simplex over exact rationals.

Variables carry finite or infinite upper bounds and are handled with the
bounded-variable method: a nonbasic variable sitting at its upper bound is
complemented (``x = u - x'``) so every nonbasic column always rests at zero.
Entries are ``gmpy2.mpq`` when available and ``Fraction`` otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    Q = Fraction

# consecutive degenerate pivots before switching to Bland's rule
_BLAND_AFTER = 30


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: object = None
    x: list | None = None
    pivots: int = 0


def to_fraction(q) -> Fraction:
    if isinstance(q, Fraction):
        return q
    return Fraction(int(q.numerator), int(q.denominator))


class _Tableau:
    def __init__(self, rows, rhs, basis, upper, n_cols):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.upper = upper  # per column, None means +inf
        self.flipped = [False] * n_cols
        self.n_cols = n_cols
        self.d = [Q(0)] * n_cols
        self.z0 = Q(0)
        self.pivots = 0

    def complement(self, k):
        u = self.upper[k]
        for i, row in enumerate(self.rows):
            a = row[k]
            if a:
                self.rhs[i] -= a * u
                row[k] = -a
        if self.d[k]:
            self.z0 += self.d[k] * u
            self.d[k] = -self.d[k]
        self.flipped[k] = not self.flipped[k]

    def pivot(self, r, j):
        row_r = self.rows[r]
        p = row_r[j]
        if p != 1:
            inv = 1 / p
            nz = []
            for k, v in enumerate(row_r):
                if v:
                    row_r[k] = v * inv
                    nz.append(k)
            self.rhs[r] *= inv
        else:
            nz = [k for k, v in enumerate(row_r) if v]
        rhs_r = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[j]
            if f:
                for k in nz:
                    row[k] -= f * row_r[k]
                self.rhs[i] -= f * rhs_r
        f = self.d[j]
        if f:
            d = self.d
            for k in nz:
                d[k] -= f * row_r[k]
            self.z0 += f * rhs_r
        self.basis[r] = j
        self.pivots += 1

    def optimize(self, allowed, max_pivots):
        """Maximize ``z0 + d.x`` over columns in ``allowed``."""
        degenerate = 0
        basic = set(self.basis)
        while True:
            if max_pivots is not None and self.pivots > max_pivots:
                raise BudgetExceeded(f"simplex pivot budget {max_pivots} exceeded")
            bland = degenerate >= _BLAND_AFTER
            j = -1
            best = 0
            for k in allowed:
                dk = self.d[k]
                if dk > 0 and k not in basic:
                    if bland:
                        j = k
                        break
                    if dk > best:
                        best, j = dk, k
            if j < 0:
                return "optimal"
            limit = self.upper[j]
            leave = -1
            leave_upper = False
            for i, row in enumerate(self.rows):
                a = row[j]
                if a > 0:
                    ratio = self.rhs[i] / a
                    at_upper = False
                elif a < 0:
                    ub = self.upper[self.basis[i]]
                    if ub is None:
                        continue
                    ratio = (ub - self.rhs[i]) / (-a)
                    at_upper = True
                else:
                    continue
                if (limit is None or ratio < limit
                        or (leave >= 0 and ratio == limit and bland and self.basis[i] < self.basis[leave])):
                    limit, leave, leave_upper = ratio, i, at_upper
            if limit is None:
                return "unbounded"
            if leave < 0:
                # entering variable reaches its own bound first
                self.complement(j)
                degenerate = 0 if limit > 0 else degenerate + 1
                continue
            old = self.basis[leave]
            self.pivot(leave, j)
            basic.discard(old)
            basic.add(j)
            if leave_upper:
                self.complement(old)
            degenerate = 0 if limit > 0 else degenerate + 1


def solve_lp(c, rows, lower, upper, max_pivots=None) -> LpResult:
    """Maximize ``c.x`` subject to ``rows`` and ``lower <= x <= upper``.

    ``rows`` is a list of ``(coefs, sense, rhs)`` where ``coefs`` maps column
    index to coefficient.  ``lower`` must be finite; ``upper`` entries may be
    None.  Returned values are Fractions.
    """
    n = len(c)
    lower = [Q(v) for v in lower]
    upper = [None if u is None else Q(u) - lo for u, lo in zip(upper, lower)]
    for u in upper:
        if u is not None and u < 0:
            return LpResult("infeasible")

    prepared = []
    n_slack = sum(1 for _, sense, _ in rows if sense != "=")
    for coefs, sense, rhs in rows:
        b = Q(rhs) - sum((Q(a) * lower[k] for k, a in coefs.items()), Q(0))
        prepared.append(({k: Q(a) for k, a in coefs.items() if a}, sense, b))

    n_art = 0
    plan = []
    for coefs, sense, b in prepared:
        if sense == "<=":
            need_art = b < 0
        elif sense == ">=":
            need_art = b > 0
        else:
            need_art = True
        plan.append(need_art)
        n_art += need_art

    n_cols = n + n_slack + n_art
    tab_rows, rhs, basis = [], [], []
    col_upper = upper + [None] * (n_slack + n_art)
    slack = n
    art = n + n_slack
    art_rows = []
    for (coefs, sense, b), need_art in zip(prepared, plan):
        row = [Q(0)] * n_cols
        for k, a in coefs.items():
            row[k] = a
        slack_col = None
        if sense != "=":
            slack_col = slack
            row[slack] = Q(1) if sense == "<=" else Q(-1)
            slack += 1
        if b < 0 or (sense == ">=" and not need_art):
            row = [-v for v in row]
            b = -b
        if need_art:
            row[art] = Q(1)
            basis.append(art)
            art_rows.append(len(tab_rows))
            art += 1
        else:
            basis.append(slack_col)
        tab_rows.append(row)
        rhs.append(b)

    tab = _Tableau(tab_rows, rhs, basis, col_upper, n_cols)
    real_cols = list(range(n + n_slack))

    if n_art:
        for i in art_rows:
            row = tab.rows[i]
            for k in real_cols:
                if row[k]:
                    tab.d[k] += row[k]
            tab.z0 -= tab.rhs[i]
        tab.optimize(real_cols, max_pivots)
        if tab.z0 < 0:
            return LpResult("infeasible", pivots=tab.pivots)
        # drive zero-valued artificials out of the basis
        drop = []
        for i, bcol in enumerate(tab.basis):
            if bcol >= n + n_slack:
                row = tab.rows[i]
                k = next((k for k in real_cols if row[k]), None)
                if k is None:
                    drop.append(i)
                else:
                    tab.pivot(i, k)
        for i in reversed(drop):
            del tab.rows[i]
            del tab.rhs[i]
            del tab.basis[i]

    # phase 2 pricing
    cq = [Q(v) for v in c] + [Q(0)] * (n_cols - n)
    cbar = [(-cq[k] if tab.flipped[k] else cq[k]) for k in range(n_cols)]
    tab.d = list(cbar)
    tab.z0 = Q(0)
    for i, bcol in enumerate(tab.basis):
        cb = cbar[bcol]
        if cb:
            row = tab.rows[i]
            for k in range(n_cols):
                if row[k]:
                    tab.d[k] -= cb * row[k]
            tab.z0 += cb * tab.rhs[i]
    status = tab.optimize(real_cols, max_pivots)
    if status == "unbounded":
        return LpResult("unbounded", pivots=tab.pivots)

    vals = [Q(0)] * n_cols
    for i, bcol in enumerate(tab.basis):
        vals[bcol] = tab.rhs[i]
    x = []
    for k in range(n):
        v = vals[k]
        if tab.flipped[k]:
            v = tab.upper[k] - v
        x.append(to_fraction(v + lower[k]))
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LpResult("optimal", value, x, tab.pivots)
