"""Text grammar for STL formulae.

::

    phi  := "T" | "F" | pred | "!" phi | phi "&" phi | phi "|" phi
          | phi "U[" int "," int "]" phi | "F[" int "," int "]" phi
          | "G[" int "," int "]" phi | "(" phi ")"
    pred := "x" index ("<=" | ">=") decimal

Binding strength, tightest first: ``!``/``F[]``/``G[]`` prefixes, ``U[]``
(right associative), ``&``, ``|`` (both left associative).  A bare ``F``
not followed by ``[`` is the false constant.  Whitespace is ignored and
``#`` starts a comment running to the end of the line.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .formula import (
    FALSE,
    TRUE,
    And,
    Eventually,
    FalseF,
    Formula,
    Globally,
    Interval,
    Not,
    Or,
    Pred,
    TrueF,
    Until,
)


class ParseError(ValueError):
    def __init__(self, message: str, pos: int, text: str):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<temporal>[FGU])\s*\[
  | (?P<pred>x(?P<dim>\d+)\s*(?P<op><=|>=)\s*(?P<num>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))
  | (?P<const>[TF])
  | (?P<punct>[!&|(),\]])
  | (?P<int>\d+)
    """,
    re.VERBOSE,
)
_PARTIAL_PRED = re.compile(r"x\d+\s*(?P<op><=|>=)?\s*")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            partial = _PARTIAL_PRED.match(text, pos)
            if partial:
                want = "a number" if partial.group("op") else "'<=' or '>='"
                raise ParseError(f"expected {want} in predicate", partial.end(), text)
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if m.group("ws") is not None:
            pass
        elif m.group("temporal") is not None:
            out.append(("temporal", m.group("temporal"), m.start()))
        elif m.group("pred") is not None:
            out.append(("pred", (int(m.group("dim")), m.group("op"), m.group("num")), m.start()))
        elif m.group("const") is not None:
            out.append(("const", m.group("const"), m.start()))
        elif m.group("punct") is not None:
            out.append(("punct", m.group("punct"), m.start()))
        else:
            out.append((kind, m.group(0), m.start()))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str, dims: int | None):
        self.text = text
        self.dims = dims
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            got = tok[1] if tok[1] is not None else "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", tok[2], self.text)
        return tok

    def error(self, message):
        raise ParseError(message, self.peek()[2], self.text)

    def parse(self) -> Formula:
        f = self.disjunction()
        if self.peek()[0] != "eof":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return f

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[:2] == ("punct", "|"):
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.until()
        while self.peek()[:2] == ("punct", "&"):
            self.take()
            left = And(left, self.until())
        return left

    def until(self):
        left = self.unary()
        if self.peek()[:2] == ("temporal", "U"):
            self.take()
            interval = self.interval()
            return Until(left, interval, self.until())
        return left

    def interval(self) -> Interval:
        start = self.peek()[2]
        lo = int(self.expect("int")[1])
        self.expect("punct", ",")
        hi = int(self.expect("int")[1])
        self.expect("punct", "]")
        if lo > hi:
            raise ParseError(f"empty interval [{lo},{hi}]", start, self.text)
        return Interval(lo, hi)

    def unary(self):
        kind, value, pos = self.peek()
        if kind == "punct" and value == "!":
            self.take()
            return Not(self.unary())
        if kind == "temporal":
            if value == "U":
                self.error("until needs a left operand")
            self.take()
            interval = self.interval()
            arg = self.unary()
            return Globally(interval, arg) if value == "G" else Eventually(interval, arg)
        if kind == "punct" and value == "(":
            self.take()
            inner = self.disjunction()
            self.expect("punct", ")")
            return inner
        if kind == "const":
            self.take()
            return TRUE if value == "T" else FALSE
        if kind == "pred":
            self.take()
            dim, op, num = value
            if dim < 1 or (self.dims is not None and dim > self.dims):
                raise ParseError(f"predicate dimension x{dim} outside 1..{self.dims}", pos, self.text)
            return Pred(dim, op, Fraction(num))
        if kind == "eof":
            self.error("unexpected end of input")
        self.error(f"unexpected token {value!r}")


def parse_formula(text: str, dims: int | None = None) -> Formula:
    """Parse formula text; ``dims`` bounds the admissible predicate indices."""
    return _Parser(text, dims).parse()


# printing ------------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_UNTIL, _PREC_UNARY = 1, 2, 3, 4


def format_number(value) -> str:
    """Shortest exact decimal for terminating fractions, repr otherwise."""
    if isinstance(value, Fraction) or isinstance(value, int):
        value = Fraction(value)
        den = value.denominator
        twos = fives = 0
        while den % 2 == 0:
            den //= 2
            twos += 1
        while den % 5 == 0:
            den //= 5
            fives += 1
        if den == 1:
            digits = max(twos, fives)
            scaled = value * 10**digits
            sign = "-" if scaled < 0 else ""
            s = str(abs(scaled.numerator))
            if digits == 0:
                return sign + s
            s = s.rjust(digits + 1, "0")
            s = s[:-digits] + "." + s[-digits:]
            return sign + s
        return repr(float(value))
    return repr(float(value))


def format_exact(value) -> str:
    """Like :func:`format_number` but never rounds: other fractions print as p/q."""
    if isinstance(value, (Fraction, int)):
        text = format_number(value)
        if Fraction(text) == value:
            return text
        return f"{value.numerator}/{value.denominator}"
    return format_number(value)


def _prec(f: Formula) -> int:
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Until):
        return _PREC_UNTIL
    return _PREC_UNARY


def _wrap(f: Formula, needed: bool) -> str:
    s = to_text(f)
    return f"({s})" if needed else s


def to_text(f: Formula) -> str:
    if isinstance(f, TrueF):
        return "T"
    if isinstance(f, FalseF):
        return "F"
    if isinstance(f, Pred):
        return f"x{f.dim} {f.op} {format_number(f.threshold)}"
    if isinstance(f, Not):
        return "!" + _wrap(f.arg, _prec(f.arg) < _PREC_UNARY)
    if isinstance(f, (And, Or)):
        p = _prec(f)
        sym = " & " if isinstance(f, And) else " | "
        return _wrap(f.left, _prec(f.left) < p) + sym + _wrap(f.right, _prec(f.right) <= p)
    if isinstance(f, Until):
        return (_wrap(f.left, _prec(f.left) <= _PREC_UNTIL) + f" U{f.interval} "
                + _wrap(f.right, _prec(f.right) < _PREC_UNTIL))
    if isinstance(f, (Eventually, Globally)):
        op = "F" if isinstance(f, Eventually) else "G"
        return f"{op}{f.interval} " + _wrap(f.arg, _prec(f.arg) < _PREC_UNARY)
    raise TypeError(f"not a formula: {f!r}")
