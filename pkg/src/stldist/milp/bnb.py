"""Branch-and-bound over exact LP relaxations."""
from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass

from .model import MilpModel, MilpSolution
from .simplex import BudgetExceeded, Q, solve_lp, to_fraction

log = logging.getLogger(__name__)

HALF = Q(1, 2)


class SolverBudgetError(RuntimeError):
    """Node or pivot budget ran out before optimality was proven."""


@dataclass
class SolverConfig:
    max_nodes: int = 200_000
    max_pivots: int | None = 5_000_000
    node_order: str = "best"  # "best" | "depth"


def _compile(model: MilpModel):
    names = model.variables
    index = {v: i for i, v in enumerate(names)}
    lower = []
    upper = []
    for v in names:
        lb, ub = model.bounds(v)
        lower.append(Q(lb))
        upper.append(Q(ub))
    rows = []
    for con in model.constraints:
        coefs = {}
        for v, c in con.coefs:
            coefs[index[v]] = Q(c)
        rows.append((coefs, con.sense, Q(con.rhs)))
    sign = 1 if model.sense == "max" else -1
    c = [Q(sign * model.objective.get(v, 0)) for v in names]
    binaries = [index[v] for v in model.binaries]
    return names, c, rows, lower, upper, binaries, sign


def _propagate(rows, lower, upper, integer, strict=None, rounds=25):
    """Activity-based bound tightening.

    ``strict`` optionally names a variable whose lower bound is strict (the
    objective variable once an incumbent exists: only strictly better points
    matter).  Strictness is carried through the derived bounds, so integer
    bounds round past exact integers and touching bounds become conflicts.

    Returns ``(rows, lower, upper)`` with redundant rows dropped, or None when
    some row cannot be satisfied within the bounds.
    """
    lower = list(lower)
    upper = list(upper)
    n = len(lower)
    ls = [False] * n  # lower bound is strict
    us = [False] * n
    if strict is not None:
        ls[strict] = True
    le_rows = []
    for coefs, sense, rhs in rows:
        if sense in ("<=", "="):
            le_rows.append((coefs, rhs, (coefs, sense, rhs)))
        if sense in (">=", "="):
            le_rows.append(({k: -a for k, a in coefs.items()}, -rhs, (coefs, sense, rhs)))
    active = le_rows
    for _ in range(rounds):
        changed = False
        keep = []
        for coefs, rhs, orig in active:
            lo_act = 0
            hi_act = 0
            n_strict = 0  # terms whose minimum is strict
            for k, a in coefs.items():
                if a > 0:
                    lo_act += a * lower[k]
                    hi_act += a * upper[k]
                    n_strict += ls[k]
                else:
                    lo_act += a * upper[k]
                    hi_act += a * lower[k]
                    n_strict += us[k]
            if lo_act > rhs or (lo_act == rhs and n_strict):
                return None
            if hi_act <= rhs:
                continue
            keep.append((coefs, rhs, orig))
            for k, a in coefs.items():
                if a > 0:
                    own = ls[k]
                    rest_strict = n_strict - own > 0
                    bound = (rhs - (lo_act - a * lower[k])) / a
                    if integer[k]:
                        f = Q(math.floor(bound))
                        bound, st = (f - 1 if rest_strict and f == bound else f), False
                    else:
                        st = rest_strict
                    if bound < upper[k] or (bound == upper[k] and st and not us[k]):
                        if bound < lower[k] or (bound == lower[k] and (st or ls[k])):
                            return None
                        upper[k], us[k] = bound, st
                        changed = True
                else:
                    own = us[k]
                    rest_strict = n_strict - own > 0
                    bound = (rhs - (lo_act - a * upper[k])) / a
                    if integer[k]:
                        c = Q(math.ceil(bound))
                        bound, st = (c + 1 if rest_strict and c == bound else c), False
                    else:
                        st = rest_strict
                    if bound > lower[k] or (bound == lower[k] and st and not ls[k]):
                        if bound > upper[k] or (bound == upper[k] and (st or us[k])):
                            return None
                        lower[k], ls[k] = bound, st
                        changed = True
        active = keep
        if not changed:
            break
    kept = []
    seen = set()
    for _, _, orig in active:
        if id(orig) not in seen:
            seen.add(id(orig))
            kept.append(orig)
    return kept, lower, upper


def _cutoff_bound(c, lower, upper, best):
    """Tighten the single objective variable to beat ``best``; returns its index."""
    nz = [k for k, ck in enumerate(c) if ck]
    if best is None or len(nz) != 1 or c[nz[0]] < 0:
        return None
    k = nz[0]
    floor = best / c[k]
    if floor >= upper[k]:
        return -1
    if floor < lower[k]:
        return None
    lower[k] = floor
    return k


def _node_lp(c, rows, lower, upper, integer, fixed, max_pivots, best=None):
    """Solve the relaxation with ``fixed`` binaries and propagated bounds substituted out.

    Returns None for infeasible nodes and for nodes whose objective bound
    from the propagated variable bounds alone cannot beat ``best``.
    """
    lower = list(lower)
    upper = list(upper)
    for k, v in fixed.items():
        lower[k] = upper[k] = Q(v)
    strict = _cutoff_bound(c, lower, upper, best)
    if strict == -1:
        return None
    prop = _propagate(rows, lower, upper, integer, strict)
    if prop is None:
        return None
    rows, lower, upper = prop
    if best is not None:
        if sum(max(ci * lo, ci * hi) for ci, lo, hi in zip(c, lower, upper)) <= best:
            return None
    free = [k for k in range(len(c)) if lower[k] != upper[k]]
    pos = {k: i for i, k in enumerate(free)}
    sub_rows = []
    for coefs, sense, rhs in rows:
        new = {}
        for k, a in coefs.items():
            if k in pos:
                new[pos[k]] = a
            else:
                rhs -= a * lower[k]
        if new:
            sub_rows.append((new, sense, rhs))
        elif not ((0 <= rhs) if sense == "<=" else (0 >= rhs) if sense == ">=" else rhs == 0):
            return None
    res = solve_lp([c[k] for k in free], sub_rows, [lower[k] for k in free],
                   [upper[k] for k in free], max_pivots)
    if res.status != "optimal":
        return None if res.status == "infeasible" else res
    x = list(lower)
    for k, v in zip(free, res.x):
        x[k] = Q(v)
    res.x = x
    res.value = sum((ci * xi for ci, xi in zip(c, x)), Q(0))
    return res


def solve(model: MilpModel, config: SolverConfig | None = None, cutoff=None) -> MilpSolution:
    """Exact optimum of ``model`` by LP-based branch-and-bound.

    Branches on the most fractional binary (ties to the lowest index).  With
    ``node_order="best"`` open nodes are explored best bound first, with
    ``"depth"`` last in first out.  When ``cutoff`` is given only solutions
    strictly better than it are sought; if none exists the status is
    ``"cutoff"``.
    """
    config = config or SolverConfig()
    model.validate()
    names, c, rows, lower, upper, binaries, sign = _compile(model)
    integer = [False] * len(names)
    for k in binaries:
        integer[k] = True
    prop = _propagate(rows, lower, upper, integer)
    if prop is None:
        return MilpSolution("infeasible")
    rows, lower, upper = prop

    counter = itertools.count()
    open_nodes = [(0, next(counter), {})]
    incumbent = None
    best = None if cutoff is None else sign * Q(cutoff)
    nodes = 0
    pivots = 0
    depth_first = config.node_order == "depth"
    while open_nodes:
        if depth_first:
            bound, _, fixed = open_nodes.pop()
        else:
            bound, _, fixed = heapq.heappop(open_nodes)
        if best is not None and fixed and -bound <= best:
            continue
        nodes += 1
        if nodes > config.max_nodes:
            raise SolverBudgetError(f"branch-and-bound node budget {config.max_nodes} exceeded")
        budget = None if config.max_pivots is None else config.max_pivots - pivots
        try:
            res = _node_lp(c, rows, lower, upper, integer, fixed, budget, best)
        except BudgetExceeded as exc:
            raise SolverBudgetError(str(exc)) from exc
        if res is None:
            continue
        pivots += res.pivots
        if res.status == "unbounded":
            raise SolverBudgetError("LP relaxation unbounded; all variables must be bounded")
        if best is not None and res.value <= best:
            continue
        branch = None
        score = None
        for k in binaries:
            v = res.x[k]
            if v.denominator != 1:
                s = abs(v - HALF)
                if score is None or s < score:
                    branch, score = k, s
        if branch is None:
            incumbent, best = res.x, res.value
            continue
        for val in ((1, 0) if depth_first else (0, 1)):
            child = dict(fixed)
            child[branch] = val
            item = (-res.value, next(counter), child)
            if depth_first:
                open_nodes.append(item)
            else:
                heapq.heappush(open_nodes, item)

    log.debug("branch-and-bound finished: %d nodes, %d pivots", nodes, pivots)
    if incumbent is None:
        status = "infeasible" if cutoff is None else "cutoff"
        return MilpSolution(status, nodes=nodes, pivots=pivots)
    assignment = {v: to_fraction(x) for v, x in zip(names, incumbent)}
    return MilpSolution("optimal", to_fraction(sign * best), assignment, nodes, pivots)
