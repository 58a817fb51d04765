import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from stldist.formula import FALSE, TRUE, FormulaError, le
from stldist.monitor import Trace, TraceError, TraceTooShortError, robustness, satisfies
from stldist.parser import parse_formula

from strategies import formulas, traces


def test_example_traces(example2):
    s1, s2 = example2.traces["s1"], example2.traces["s2"]
    phi = example2.formulas
    assert robustness(s1, phi["phi1"]) == Fraction(1, 10)
    assert robustness(s2, phi["phi1"]) == Fraction(-3, 5)
    assert robustness(s2, phi["phi3"]) == Fraction(1, 10)


def test_constants():
    s = Trace.from_rows([[0]])
    assert robustness(s, TRUE) == math.inf
    assert robustness(s, FALSE) == -math.inf


def test_zero_counts_as_satisfied():
    s = Trace.from_rows([["0.5"]])
    assert robustness(s, le(1, "0.5")) == 0
    assert satisfies(s, le(1, "0.5"))


def test_until_semantics():
    # left must hold from t up to and including the step where right holds
    f = parse_formula("x1 <= 0.5 U[1,2] x1 >= 0.8")
    good = Trace.from_rows([["0.1"], ["0.9"], ["0"]])
    bad = Trace.from_rows([["0.9"], ["0.9"], ["0"]])
    assert robustness(good, f) == Fraction(-4, 10)  # x1 <= 0.5 fails at step 1
    assert robustness(bad, f) < 0
    ok = Trace.from_rows([["0.1"], ["0.2"], ["0.5"]])
    assert robustness(ok, parse_formula("x1 <= 0.5 U[1,2] x1 >= 0.5")) == 0


def test_short_trace_names_horizon():
    s = Trace.from_rows([[0]] * 5)
    with pytest.raises(TraceTooShortError) as err:
        robustness(s, parse_formula("G[0,20] x1 <= 1"))
    assert err.value.required == 20 and err.value.available == 4


def test_later_start_needs_more_samples():
    s = Trace.from_rows([[0]] * 21)
    with pytest.raises(TraceTooShortError):
        robustness(s, parse_formula("G[0,20] x1 <= 1"), t=1)


def test_dimension_mismatch():
    with pytest.raises(FormulaError):
        robustness(Trace.from_rows([[0]]), parse_formula("x2 <= 1"))


def test_trace_validation():
    with pytest.raises(TraceError):
        Trace.from_rows([["1.5"]])
    with pytest.raises(TraceError):
        Trace.from_rows([])
    with pytest.raises(TraceError):
        Trace(((Fraction(0),), (Fraction(0), Fraction(1))), ((0, 1),))


def test_float_values_fall_back_to_floats():
    s = Trace.from_rows([[0.25]])
    assert robustness(s, le(1, "0.5")) == pytest.approx(0.25)


@settings(max_examples=100, deadline=None)
@given(formulas(max_depth=3), traces(9))
def test_negation_flips_sign(f, s):
    from stldist.formula import Not

    assert robustness(s, Not(f)) == -robustness(s, f)
