"""Pompeiu-Hausdorff distance between STL formulae.

The directed distance from f1 to f2 is the largest eps for which some trace
satisfies f1 yet violates f2 relaxed by eps (0 when no trace does).  It is
found by exact mixed-integer programming.  By default the program is split
along the top-level disjunctions of f1 and of the negation of f2; each part
is a much smaller program and parts that cannot beat the incumbent are cut
off at the root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .boxes import AosBudgetError, BoxExpr, DEFAULT_MAX_RESOLUTIONS, leaf_count, resolutions
from .formula import Formula, FormulaError, Not, disjuncts, horizon, max_dim, predicates, to_nnf
from .milp import (
    SolverConfig,
    build_feasibility_program,
    build_ph_program,
    build_trace_distance_program,
    solve,
)
from .milp.programs import (
    add_violation_target,
    linf_diameter,
    trace_from_assignment,
    violation_base,
)
from .geometry import hausdorff
from .monitor import Trace, TraceTooShortError

__all__ = [
    "EmptyLanguageError",
    "PhResult",
    "directed_ph",
    "directed_ph_with_witness",
    "ph",
    "ph_boxsets",
    "trace_to_formula_distance",
]


# most sub-programs one directed distance is split into
PART_LIMIT = 1024


class EmptyLanguageError(ValueError):
    """The formula admits no trace over the domain."""


@dataclass(frozen=True)
class PhResult:
    directed_12: Fraction
    directed_21: Fraction
    undirected: Fraction
    witness: Trace | None = None


def _setup(formulas, domain, T):
    if domain is None:
        n = max(1, max(max_dim(f) for f in formulas))
        domain = [(0, 1)] * n
    domain = [(Fraction(lo), Fraction(hi)) for lo, hi in domain]
    if T is None:
        T = max(horizon(f) for f in formulas)
    return domain, T


def _witness_of(f: Formula, domain, T, config):
    sol = solve(build_feasibility_program(f, domain, T), config)
    if not sol.optimal:
        raise EmptyLanguageError(f"no trace over the domain satisfies {f}")
    return trace_from_assignment(sol.assignment, domain, T)


def directed_ph_with_witness(f1: Formula, f2: Formula, domain=None, T: int | None = None,
                             config: SolverConfig | None = None, decompose: bool = True):
    """Directed distance and a trace of f1 attaining it.

    Raises :class:`EmptyLanguageError` when f1 is unsatisfiable and
    :class:`SolverBudgetError` when the solver budget runs out.
    """
    domain, T = _setup((f1, f2), domain, T)
    f1, f2 = to_nnf(f1), to_nnf(f2)
    fallback = _witness_of(f1, domain, T, config)
    if not decompose:
        sol = solve(build_ph_program(f1, f2, domain, T), config)
        if not sol.optimal:
            return Fraction(0), fallback
        return sol.objective_value, trace_from_assignment(sol.assignment, domain, T)

    cap = linf_diameter(domain)
    best = Fraction(0)
    witness = None
    rights = disjuncts(to_nnf(Not(f2)), PART_LIMIT)
    lefts = disjuncts(f1, PART_LIMIT)
    if len(lefts) * len(rights) > PART_LIMIT:
        lefts = [f1]
    for d1 in lefts:
        base = violation_base(d1, domain, T)
        for d2 in rights:
            # only strictly positive optima can change the answer
            sol = solve(add_violation_target(base.copy(), d2, domain, T), config, cutoff=best)
            if sol.optimal:
                best = sol.objective_value
                witness = trace_from_assignment(sol.assignment, domain, T)
                if best >= cap:
                    return best, witness
    return best, witness or fallback


def directed_ph(f1: Formula, f2: Formula, domain=None, T: int | None = None,
                config: SolverConfig | None = None, decompose: bool = True) -> Fraction:
    return directed_ph_with_witness(f1, f2, domain, T, config, decompose)[0]


def ph(f1: Formula, f2: Formula, domain=None, T: int | None = None,
       config: SolverConfig | None = None, decompose: bool = True) -> PhResult:
    """Both directed distances and their maximum.

    The witness is a trace of whichever formula realizes the maximum.
    """
    domain, T = _setup((f1, f2), domain, T)
    d12, w12 = directed_ph_with_witness(f1, f2, domain, T, config, decompose)
    d21, w21 = directed_ph_with_witness(f2, f1, domain, T, config, decompose)
    return PhResult(d12, d21, max(d12, d21), w12 if d12 >= d21 else w21)


def _distance_candidates(s: Trace, f: Formula) -> list[Fraction]:
    # the language is a finite union of boxes whose faces lie on predicate
    # thresholds or domain bounds, so the L-inf distance from s is 0 or the
    # gap between some sample and one of those values
    levels = {j: {Fraction(lo), Fraction(hi)} for j, (lo, hi) in enumerate(s.domain, 1)}
    for p in predicates(f):
        levels[p.dim].add(Fraction(p.threshold))
    out = {Fraction(0)}
    for row in s.values:
        for j, v in enumerate(row, 1):
            out.update(abs(Fraction(v) - mu) for mu in levels[j])
    return sorted(out)


def trace_to_formula_distance(s: Trace, f: Formula, config: SolverConfig | None = None) -> Fraction:
    """L-inf distance from ``s`` to the nearest trace satisfying ``f``.

    Rather than minimizing d directly (a weak relaxation), the candidate
    distances are binary-searched with a feasibility program at each one.
    """
    if horizon(f) > s.T:
        raise TraceTooShortError(horizon(f), s.T)
    if max_dim(f) > s.n:
        raise FormulaError(f"formula uses x{max_dim(f)} but the trace has {s.n} dimensions")
    f = to_nnf(f)

    def reachable(r):
        return solve(build_trace_distance_program(s.values, f, s.domain, s.T, within=r), config).optimal

    cands = _distance_candidates(s, f)
    lo, hi = 0, len(cands) - 1
    if not reachable(cands[hi]):
        raise EmptyLanguageError(f"no trace over the domain satisfies {f}")
    while lo < hi:
        mid = (lo + hi) // 2
        if reachable(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


SLICE = "slice"
METRIC = "metric"


def _slice_distance(r1, r2, T, n) -> Fraction:
    # per elementary time segment, compare the value sets present there;
    # a segment no box covers leaves the signal free, i.e. the whole cube
    cube = ((Fraction(0), Fraction(1)),) * n
    cuts = sorted({Fraction(0), Fraction(T)} | {b.lt for b in r1 + r2} | {b.ut for b in r1 + r2})
    segments = [(c, c) for c in cuts] + list(zip(cuts, cuts[1:]))
    worst = Fraction(0)
    for lo, hi in segments:
        sets = []
        for r in (r1, r2):
            vals = [tuple(b.range_of(j) for j in range(1, n + 1)) for b in r if b.lt <= lo and hi <= b.ut]
            sets.append(vals or [cube])
        worst = max(worst, hausdorff(sets[0], sets[1]))
    return worst


def _metric_distance(r1, r2, T, n) -> Fraction:
    scale = Fraction(1, T) if T else Fraction(1)
    boxes = [[((b.lt * scale, b.ut * scale),) + tuple(b.range_of(j) for j in range(1, n + 1)) for b in r]
             for r in (r1, r2)]
    return hausdorff(boxes[0], boxes[1])


def ph_boxsets(e1: BoxExpr, e2: BoxExpr, T, n: int, mode: str = METRIC,
               max_pairs: int = DEFAULT_MAX_RESOLUTIONS) -> Fraction:
    """L-inf Hausdorff distance between two box expressions.

    ``metric`` (the default) treats time, divided by ``T``, as one more
    coordinate of the space-time point sets.  ``slice`` compares, at every
    instant, the value sets the two sides allow (an instant no box covers
    allows everything).
    Choices are resolved to the closest pair.
    """
    if mode == SLICE:
        dist = _slice_distance
    elif mode == METRIC:
        dist = _metric_distance
    else:
        raise ValueError(f"mode must be {SLICE!r} or {METRIC!r}, got {mode!r}")
    if leaf_count(e1) * leaf_count(e2) > max_pairs:
        raise AosBudgetError(f"more than {max_pairs} resolution pairs")
    r1s = [r for r in resolutions(e1) if r]
    r2s = [r for r in resolutions(e2) if r]
    if not r1s or not r2s:
        raise EmptyLanguageError("box expression has no nonempty resolution")
    return min(dist(r1, r2, T, n) for r1 in r1s for r2 in r2s)
