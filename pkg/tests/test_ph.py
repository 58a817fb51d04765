from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stldist.boxes import AosConfig, aos, box, Leaf
from stldist.formula import FormulaError
from stldist.milp import SolverBudgetError, SolverConfig
from stldist.monitor import Trace, TraceTooShortError, robustness
from stldist.oracle import sample_satisfying
from stldist.parser import parse_formula
from stldist.ph import (
    METRIC,
    SLICE,
    EmptyLanguageError,
    directed_ph,
    directed_ph_with_witness,
    ph,
    ph_boxsets,
    trace_to_formula_distance,
)

from conftest import UNIT
from strategies import traces


def test_undirected_examples(suite):
    assert ph(suite["phi2"], suite["phi3"], UNIT, 20).undirected == Fraction(14, 25)
    assert ph(suite["top"], suite["top"], UNIT, 20).undirected == 0


def test_directed_pair(suite):
    res = ph(suite["phi5"], suite["phi3"], UNIT, 20)
    assert (res.directed_12, res.directed_21) == (0, Fraction(3, 5))


@pytest.mark.parametrize("a, b", [("phi3", "phi1"), ("phi2", "phi1"), ("phi5", "phi6"), ("phi1", "phi2"), ("top", "phi2")])
def test_monolithic_program_agrees(suite, a, b):
    assert directed_ph(suite[a], suite[b], UNIT, 20, decompose=False) == directed_ph(suite[a], suite[b], UNIT, 20)


def test_witness_realizes_distance(suite):
    d, w = directed_ph_with_witness(suite["phi3"], suite["phi1"], UNIT, 20)
    assert robustness(w, suite["phi3"]) >= 0
    # the witness is d away from phi1's language
    assert trace_to_formula_distance(w, suite["phi1"]) == d


def test_empty_source(suite):
    empty = parse_formula("x1 >= 0.6 & x1 <= 0.4")
    with pytest.raises(EmptyLanguageError):
        directed_ph(empty, suite["phi1"], UNIT, 20)


def test_solver_budget(suite):
    with pytest.raises(SolverBudgetError):
        directed_ph(suite["top"], suite["phi6"], UNIT, 20, SolverConfig(max_nodes=1), decompose=False)


def test_trace_distance_examples(example2):
    phi, s1, s2 = example2.formulas, example2.traces["s1"], example2.traces["s2"]
    assert trace_to_formula_distance(s1, phi["phi1"]) == 0
    assert trace_to_formula_distance(s2, phi["phi1"]) == Fraction(3, 5)
    flat = Trace.from_rows([["0.45"]] * 21)
    assert trace_to_formula_distance(flat, phi["phi2"]) == Fraction(1, 100)


def test_trace_distance_checks_length(suite):
    with pytest.raises(TraceTooShortError):
        trace_to_formula_distance(Trace.from_rows([[0]] * 3), suite["phi1"])


def test_trace_distance_checks_dims():
    with pytest.raises(FormulaError):
        trace_to_formula_distance(Trace.from_rows([[0]]), parse_formula("x2 <= 1"))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["phi1", "phi2", "phi3", "phi5", "phi6"]), traces(20))
def test_signed_distance(example2, name, s):
    # a violating trace sits exactly -robustness away from the language
    f = example2.formulas[name]
    d = trace_to_formula_distance(s, f)
    if d > 0:
        assert robustness(s, f) == -d
    else:
        assert robustness(s, f) >= 0


def test_zero_iff_inclusion(suite, directed_table, languages):
    for a in ("phi1", "phi2", "phi4", "phi5"):
        for b in ("phi1", "phi2", "phi3"):
            d = directed_table[a, b]
            if d == 0:
                assert all(robustness(s, suite[b]) >= 0 for s in sample_satisfying(languages[a], 100, seed=3)), (a, b)
            else:
                # the witness lies in a's language and d away from b's
                _, w = directed_ph_with_witness(suite[a], suite[b], UNIT, 20)
                assert robustness(w, suite[a]) >= 0 and robustness(w, suite[b]) < 0, (a, b)


def test_neighbourhood(suite, ph_table, languages):
    # a trace satisfying phi with margin eps satisfies every formula within eps of phi;
    # top has infinite margin and is left out
    checked = 0
    for a in suite:
        if a == "top":
            continue
        lang = languages[a]
        # box centres carry the widest margins; uniform samples sit near faces
        centres = [
            Trace.from_rows([[(b[lang.coord(j, t)][0] + b[lang.coord(j, t)][1]) / 2 for j in range(1, lang.n + 1)]
                             for t in range(lang.T + 1)], lang.domain)
            for b in lang.boxes[:50]
        ]
        for s in centres + sample_satisfying(lang, 30, seed=11):
            rho = robustness(s, suite[a])
            for b in suite:
                if 0 < ph_table[a, b] <= rho:
                    checked += 1
                    assert robustness(s, suite[b]) >= 0, (a, b)
    assert checked > 0


# -- box sets -----------------------------------------------------------------


def test_boxsets_identical():
    e = Leaf((box(0, 20, "0.2", "0.4", 1),))
    assert ph_boxsets(e, e, 20, 1) == 0


def test_boxsets_band_widths():
    a = Leaf((box(0, 20, "0.2", "0.4", 1),))
    b = Leaf((box(0, 20, "0.2", "0.44", 1),))
    assert ph_boxsets(a, b, 20, 1, SLICE) == Fraction(1, 25)
    assert ph_boxsets(a, b, 20, 1, METRIC) == Fraction(1, 25)


def test_boxsets_gap(suite):
    cfg = AosConfig(T=20)
    a, b = aos(suite["phi1"], cfg), aos(suite["phi5"], cfg)
    # at t = 11 phi5 leaves the signal free
    assert ph_boxsets(a, b, 20, 1, SLICE) == Fraction(3, 5)
    assert ph_boxsets(a, b, 20, 1, METRIC) == Fraction(1, 20)


def test_boxsets_choice_takes_closest(suite):
    cfg = AosConfig(T=20)
    assert ph_boxsets(aos(suite["phi3"], cfg), aos(suite["phi3"], cfg), 20, 1) == 0


def test_boxsets_empty_rejected():
    with pytest.raises(EmptyLanguageError):
        ph_boxsets(Leaf(()), Leaf((box(0, 1, 0, 1, 1),)), 1, 1)


def test_boxsets_bad_mode():
    e = Leaf((box(0, 1, 0, 1, 1),))
    with pytest.raises(ValueError):
        ph_boxsets(e, e, 1, 1, "nope")
