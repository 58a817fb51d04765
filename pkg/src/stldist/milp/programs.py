"""Mixed-integer programs used by the Pompeiu-Hausdorff computations."""
from __future__ import annotations

from fractions import Fraction

from ..formula import Formula, FormulaError, horizon, max_dim, to_nnf
from .encoding import ASSERT_FALSE, ASSERT_TRUE, Encoder, trace_variables
from .model import MilpModel

EPS = "eps"


def _check(formulas, domain, T):
    for f in formulas:
        if horizon(f) > T:
            raise FormulaError(f"formula horizon {horizon(f)} exceeds T={T}")
        if max_dim(f) > len(domain):
            raise FormulaError(f"formula uses x{max_dim(f)} but the domain has {len(domain)} dimensions")


def linf_diameter(domain) -> Fraction:
    return max(Fraction(hi) - Fraction(lo) for lo, hi in domain)


def build_ph_program(f1: Formula, f2: Formula, domain, T: int) -> MilpModel:
    """``max eps`` s.t. the trace satisfies ``f1`` and violates ``f2`` relaxed by eps."""
    f1, f2 = to_nnf(f1), to_nnf(f2)
    _check((f1, f2), domain, T)
    model = MilpModel(name="directed_ph")
    xs = trace_variables(model, domain, T)
    model.add_continuous(EPS, 0, linf_diameter(domain))
    Encoder(model, xs, prefix="a").encode(f1, ASSERT_TRUE)
    Encoder(model, xs, prefix="b").encode(f2, ASSERT_FALSE, eps_var=EPS)
    model.set_objective({EPS: 1}, "max")
    return model


def build_violation_program(f1: Formula, target: Formula, domain, T: int) -> MilpModel:
    """``max eps`` s.t. the trace satisfies ``f1`` and ``target`` tightened by eps.

    ``target`` is a negation-free formula standing for (part of) the NNF
    negation of some ``f2``; satisfying it with every threshold tightened by
    eps is the same as violating ``f2`` relaxed by eps.
    """
    return add_violation_target(violation_base(f1, domain, T), target, domain, T)


def violation_base(f1: Formula, domain, T: int) -> MilpModel:
    """The source half of :func:`build_violation_program`, reusable via ``copy``."""
    _check((f1,), domain, T)
    model = MilpModel(name="directed_ph_part")
    xs = trace_variables(model, domain, T)
    model.add_continuous(EPS, 0, linf_diameter(domain))
    Encoder(model, xs, prefix="a").assert_holds(f1)
    model.set_objective({EPS: 1}, "max")
    return model


def add_violation_target(model: MilpModel, target: Formula, domain, T: int) -> MilpModel:
    _check((target,), domain, T)
    xs = [[f"x{j}_{t}" for t in range(T + 1)] for j in range(1, len(domain) + 1)]
    Encoder(model, xs, prefix="b").assert_holds(target, EPS, -1)
    return model


def build_feasibility_program(f: Formula, domain, T: int) -> MilpModel:
    f = to_nnf(f)
    _check((f,), domain, T)
    model = MilpModel(name="feasibility")
    xs = trace_variables(model, domain, T)
    Encoder(model, xs, prefix="a").encode(f, ASSERT_TRUE)
    model.set_objective({}, "max")
    return model


def build_trace_distance_program(values, f: Formula, domain, T: int, within=None) -> MilpModel:
    """``min d`` s.t. a trace within L-inf distance d of ``values`` satisfies ``f``.

    With ``within`` set, d is fixed to that value and the program only asks
    whether such a trace exists.
    """
    f = to_nnf(f)
    _check((f,), domain, T)
    model = MilpModel(name="trace_distance")
    xs = trace_variables(model, domain, T)
    if within is None:
        model.add_continuous("d", 0, linf_diameter(domain))
    else:
        model.add_continuous("d", Fraction(within), Fraction(within))
    for j, row in enumerate(xs):
        for t, x in enumerate(row):
            v = Fraction(values[t][j])
            model.add_constraint({x: 1, "d": -1}, "<=", v)
            model.add_constraint({x: 1, "d": 1}, ">=", v)
    Encoder(model, xs, prefix="a").encode(f, ASSERT_TRUE)
    model.set_objective({"d": 1} if within is None else {}, "min")
    return model


def trace_from_assignment(assignment, domain, T: int):
    from ..monitor import Trace

    rows = [[assignment[f"x{j}_{t}"] for j in range(1, len(domain) + 1)] for t in range(T + 1)]
    return Trace.from_rows(rows, domain)
