from fractions import Fraction

import pytest
from hypothesis import given, settings

from stldist.formula import (
    TRUE,
    And,
    Eventually,
    Globally,
    Interval,
    Not,
    Until,
    ge,
    le,
)
from stldist.parser import ParseError, format_number, parse_formula, to_text

from strategies import formulas


def test_globally_of_band():
    f = parse_formula("G[0,20](x1 >= 0.2 & x1 <= 0.4)")
    assert f == Globally(Interval(0, 20), And(ge(1, "0.2"), le(1, "0.4")))


def test_true_constant():
    assert parse_formula("T") == TRUE


def test_eventually():
    f = parse_formula("F[0,4](x1 >= 0.2 & x1 <= 0.4)")
    assert isinstance(f, Eventually) and f.interval == Interval(0, 4)


def test_thresholds_are_exact():
    f = parse_formula("x1 <= 0.44")
    assert f.threshold == Fraction(11, 25)


def test_precedence():
    # ! binds tighter than temporal ops, which bind tighter than &, then |
    f = parse_formula("!x1 <= 1 & G[0,1] x2 >= 0 | x1 >= 0.5")
    assert f.left.left == Not(le(1, 1))
    assert f.left.right == Globally(Interval(0, 1), ge(2, 0))
    assert f.right == ge(1, "0.5")


def test_until_is_right_associative():
    f = parse_formula("x1 <= 1 U[0,2] x1 >= 0 U[1,3] x2 <= 1")
    assert isinstance(f, Until) and isinstance(f.right, Until)


def test_whitespace_and_comments():
    f = parse_formula("  G [ 0 , 3 ]\n  ( x1<=0.5 )  # trailing remark")
    assert f == Globally(Interval(0, 3), le(1, "0.5"))


@pytest.mark.parametrize("text, where", [
    ("G[0,2](x1 <= 0.5", 16),
    ("x1 <= ", 6),
    ("G[3,1] x1 <= 1", 2),
    ("x1 <= 1 &", 9),
])
def test_syntax_errors_report_position(text, where):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert err.value.pos == where


def test_dimension_out_of_range():
    with pytest.raises(ParseError, match="x3"):
        parse_formula("x3 <= 1", dims=2)


def test_unbounded_interval_rejected():
    with pytest.raises(ParseError):
        parse_formula("G[0,inf] x1 <= 1")


@pytest.mark.parametrize("value, text", [
    (Fraction(1, 25), "0.04"),
    (Fraction(-3, 5), "-0.6"),
    (Fraction(7), "7"),
    (Fraction(171875, 300000), repr(float(Fraction(171875, 300000)))),
])
def test_format_number(value, text):
    assert format_number(value) == text


@settings(max_examples=200, deadline=None)
@given(formulas(max_dim=2, max_depth=4))
def test_print_parse_round_trip(f):
    assert parse_formula(to_text(f)) == f


def test_format_exact_never_rounds():
    from fractions import Fraction

    from stldist.parser import format_exact

    assert format_exact(Fraction(14, 25)) == "0.56"
    assert format_exact(Fraction(16, 21)) == "16/21"
    assert format_exact(3) == "3"
