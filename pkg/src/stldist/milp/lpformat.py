"""CPLEX LP text format export and import.

Coefficients are written as exact decimals.  Rationals without a finite
decimal expansion are written to 30 significant digits and counted in a
leading comment line so the loss of exactness is visible.
"""
from __future__ import annotations

import re
from decimal import Decimal, localcontext
from fractions import Fraction

from ..parser import format_number
from .model import MilpModel, ModelError

_ZERO_VAR = "__zero"
_TERMS_PER_LINE = 8


def _is_terminating(q: Fraction) -> bool:
    den = q.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    return den == 1


class _Writer:
    def __init__(self):
        self.inexact = 0

    def num(self, q) -> str:
        q = Fraction(q)
        if _is_terminating(q):
            return format_number(q)
        self.inexact += 1
        with localcontext() as ctx:
            ctx.prec = 30
            return str(Decimal(q.numerator) / Decimal(q.denominator))

    def expr(self, terms) -> str:
        parts = []
        for i, (v, c) in enumerate(terms):
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            mag = self.num(abs(c))
            if i == 0:
                parts.append(f"{'-' if c < 0 else ''}{mag} {v}")
            else:
                parts.append(f"{sign} {mag} {v}")
        lines = [" ".join(parts[i:i + _TERMS_PER_LINE]) for i in range(0, len(parts), _TERMS_PER_LINE)]
        return "\n   ".join(lines)


def export_lp(m: MilpModel) -> str:
    """Render ``m`` in CPLEX LP format."""
    w = _Writer()
    out = []
    variables = m.variables
    zero_var = None
    if any(not c.coefs for c in m.constraints):
        zero_var = variables[0] if variables else _ZERO_VAR
    out.append("Maximize" if m.sense == "max" else "Minimize")
    if m.objective:
        out.append(f" obj: {w.expr(m.objective.items())}")
    else:
        out.append(" obj: 0")
    out.append("Subject To")
    for con in m.constraints:
        terms = con.coefs if con.coefs else ((zero_var, Fraction(0)),)
        out.append(f" {con.name}: {w.expr(terms)} {con.sense} {w.num(con.rhs)}")
    bounds = [f" {w.num(lb)} <= {v} <= {w.num(ub)}" for v, (lb, ub) in m.continuous.items()]
    if zero_var == _ZERO_VAR:
        bounds.append(f" 0 <= {_ZERO_VAR} <= 0")
    if bounds:
        out.append("Bounds")
        out.extend(bounds)
    if m.binaries:
        out.append("Binaries")
        for i in range(0, len(m.binaries), 10):
            out.append(" " + " ".join(m.binaries[i:i + 10]))
    out.append("End")
    text = "\n".join(out) + "\n"
    if w.inexact:
        text = f"\\ inexact coefficients: {w.inexact} rounded to 30 significant digits\n" + text
    return text


_SECTION = re.compile(
    r"^\s*(maximi[sz]e|maximum|max|minimi[sz]e|minimum|min|subject\s+to|such\s+that|st|s\.t\.|"
    r"bounds?|binar(?:y|ies)|bin|generals?|end)\s*$",
    re.IGNORECASE,
)
_TOKEN = re.compile(
    r"\s*(?:(?P<label>[A-Za-z_][\w.\[\]]*)\s*:|(?P<sense><=|>=|=<|=>|<|>|=)|"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(?P<sign>[-+])|(?P<name>[A-Za-z_][\w.\[\]]*))"
)


def _tokens(text):
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ModelError(f"cannot parse LP text near {text[pos:pos + 20]!r}")
        pos = m.end()
        yield m.lastgroup, m.group(m.lastgroup)


def _norm_sense(s):
    return {"=<": "<=", "<": "<=", "=>": ">=", ">": ">="}.get(s, s)


def _linear(tokens):
    """Parse ``[+-] [num] name ...`` into a coefficient list."""
    terms = []
    sign = 1
    coef = None
    for kind, val in tokens:
        if kind == "sign":
            sign = -sign if val == "-" else sign
        elif kind == "num":
            coef = Fraction(val)
        elif kind == "name":
            terms.append((val, sign * (coef if coef is not None else Fraction(1))))
            sign, coef = 1, None
        else:
            raise ModelError(f"unexpected {val!r} in linear expression")
    if coef is not None:
        if coef != 0:
            raise ModelError("constant terms are not supported")
    return terms


def parse_lp(text: str) -> MilpModel:
    """Read the subset of LP format produced by :func:`export_lp`."""
    sections: dict[str, list[str]] = {}
    current = None
    sense = "max"
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0]
        if not line.strip():
            continue
        m = _SECTION.match(line)
        if m:
            key = m.group(1).lower()
            if key.startswith("max"):
                current, sense = "obj", "max"
            elif key.startswith("min"):
                current, sense = "obj", "min"
            elif key.startswith(("subject", "such", "st", "s.t")):
                current = "st"
            elif key.startswith("bound"):
                current = "bounds"
            elif key.startswith("bin"):
                current = "binaries"
            elif key.startswith("general"):
                raise ModelError("general integer variables are not supported")
            else:
                current = "end"
            sections.setdefault(current, [])
            continue
        if current is None:
            raise ModelError(f"text before the objective section: {line!r}")
        sections.setdefault(current, []).append(line)

    model = MilpModel(name="parsed")
    obj_tokens = list(_tokens(" ".join(sections.get("obj", []))))
    if obj_tokens and obj_tokens[0][0] == "label":
        obj_tokens = obj_tokens[1:]
    objective = {}
    for v, c in _linear(obj_tokens):
        objective[v] = objective.get(v, Fraction(0)) + c

    constraints = []
    toks = list(_tokens(" ".join(sections.get("st", []))))
    i = 0
    while i < len(toks):
        name = None
        if toks[i][0] == "label":
            name = toks[i][1]
            i += 1
        start = i
        while i < len(toks) and toks[i][0] != "sense":
            i += 1
        if i >= len(toks):
            raise ModelError("constraint without a comparison")
        lhs = _linear(toks[start:i])
        con_sense = _norm_sense(toks[i][1])
        i += 1
        rhs_sign = 1
        while i < len(toks) and toks[i][0] == "sign":
            rhs_sign = -rhs_sign if toks[i][1] == "-" else rhs_sign
            i += 1
        if i >= len(toks) or toks[i][0] != "num":
            raise ModelError("constraint without a numeric right-hand side")
        rhs = rhs_sign * Fraction(toks[i][1])
        i += 1
        constraints.append((name, lhs, con_sense, rhs))

    bounds = {}
    for line in sections.get("bounds", []):
        toks_b = list(_tokens(line))
        kinds = [k for k, _ in toks_b]
        vals = [v for _, v in toks_b]

        def number(j):
            s = 1
            while kinds[j] == "sign":
                s = -s if vals[j] == "-" else s
                j += 1
            return s * Fraction(vals[j]), j + 1

        j = 0
        if kinds[0] in ("num", "sign"):
            lb, j = number(0)
            j += 1  # <=
            var = vals[j]
            j += 1
            lo_hi = [lb, None]
            if j < len(kinds):
                ub, _ = number(j + 1)
                lo_hi[1] = ub
        else:
            var = vals[0]
            op = _norm_sense(vals[1])
            v, _ = number(2)
            lo_hi = list(bounds.get(var, [Fraction(0), None]))
            if op == "<=":
                lo_hi[1] = v
            elif op == ">=":
                lo_hi[0] = v
            else:
                lo_hi = [v, v]
        bounds[var] = lo_hi

    binaries = " ".join(sections.get("binaries", [])).split()
    bin_set = set(binaries)
    seen = []
    for v in list(objective) + [v for _, lhs, _, _ in constraints for v, _ in lhs] + list(bounds):
        if v not in seen:
            seen.append(v)
    for v in list(bounds) + [v for v in seen if v not in bounds]:
        if v in bin_set or v == _ZERO_VAR or v in model.continuous:
            continue
        lo_hi = bounds.get(v)
        if lo_hi is None or lo_hi[1] is None:
            raise ModelError(f"variable {v} needs finite bounds")
        model.add_continuous(v, lo_hi[0], lo_hi[1])
    for v in binaries:
        model.add_binary(v)
    for name, lhs, con_sense, rhs in constraints:
        model.add_constraint([(v, c) for v, c in lhs if v != _ZERO_VAR], con_sense, rhs, name)
    model.set_objective(objective, sense)
    return model
