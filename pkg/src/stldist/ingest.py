"""Loading traces, formulae and bundled corpora.

A corpus directory holds ``meta.json``, ``formulas/*.stl`` and optionally
``traces/*.csv``.  Values are kept raw; :func:`normalize` divides by the
per-dimension maxima on demand.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .formula import FormulaError, Formula, horizon, max_dim
from .monitor import Trace, TraceError
from .parser import ParseError, format_exact, parse_formula

BUNDLED = ("example2", "genetic", "tli")


class CorpusError(ValueError):
    """A corpus file is malformed or inconsistent; the message names the file."""


@dataclass(frozen=True)
class CorpusMeta:
    dims: int
    domain: tuple
    x_max: tuple
    T: int

    @classmethod
    def from_json(cls, doc: dict, where: str = "meta.json") -> "CorpusMeta":
        try:
            dims = int(doc["dims"])
            domain = tuple((Fraction(str(lo)), Fraction(str(hi))) for lo, hi in doc["domain"])
            x_max = tuple(Fraction(str(x)) for x in doc.get("x_max", [hi for _, hi in domain]))
            T = int(doc["T"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"{where}: bad metadata ({exc})") from exc
        if len(domain) != dims or len(x_max) != dims:
            raise CorpusError(f"{where}: domain and x_max need {dims} entries")
        if any(x <= 0 for x in x_max):
            raise CorpusError(f"{where}: x_max must be positive")
        return cls(dims, domain, x_max, T)

    def to_json(self) -> dict:
        return {
            "dims": self.dims,
            "domain": [[float(lo), float(hi)] for lo, hi in self.domain],
            "x_max": [float(x) for x in self.x_max],
            "T": self.T,
        }


@dataclass(frozen=True)
class Corpus:
    meta: CorpusMeta
    formulas: dict = field(default_factory=dict)
    traces: dict = field(default_factory=dict)
    path: str = ""


# -- formulas --------------------------------------------------------------


def strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def read_formula(path, dims: int | None = None) -> Formula:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    body = strip_comments(text)
    try:
        return parse_formula(body, dims)
    except ParseError as exc:
        line = body.count("\n", 0, exc.pos) + 1
        raise CorpusError(f"{path}:{line}: {exc}") from exc
    except FormulaError as exc:
        raise CorpusError(f"{path}: {exc}") from exc


# -- traces ----------------------------------------------------------------


def parse_trace_csv(text: str, domain=None, name: str = "<trace>") -> Trace:
    """Trace from CSV text with header ``t,x1,...,xn`` and rows t = 0..T."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if any(c.strip() for c in r)]
    if not rows:
        raise TraceError(f"{name}: empty file")
    header = [c.strip() for c in rows[0]]
    n = len(header) - 1
    if n < 1 or header != ["t"] + [f"x{j}" for j in range(1, n + 1)]:
        raise TraceError(f"{name}:1: header must be t,x1,...,xn, got {','.join(header)}")
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != n + 1:
            raise TraceError(f"{name}:{lineno}: expected {n + 1} fields, got {len(row)}")
        try:
            t = int(row[0])
            sample = tuple(Fraction(c.strip()) for c in row[1:])
        except ValueError as exc:
            raise TraceError(f"{name}:{lineno}: not a number ({exc})") from exc
        if t != len(values):
            raise TraceError(f"{name}:{lineno}: expected t={len(values)}, got t={t}")
        values.append(sample)
    if not values:
        raise TraceError(f"{name}: no samples")
    if domain is None:
        domain = [(min(0, min(r[j] for r in values)), max(1, max(r[j] for r in values))) for j in range(n)]
    if len(domain) != n:
        raise TraceError(f"{name}: trace has {n} dimensions, expected {len(domain)}")
    try:
        return Trace.from_rows(values, domain)
    except TraceError as exc:
        raise TraceError(f"{name}: {exc}") from exc


def read_trace_csv(path, domain=None) -> Trace:
    path = Path(path)
    return parse_trace_csv(path.read_text(encoding="utf-8"), domain, str(path))


def trace_to_csv(s: Trace) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["t"] + [f"x{j}" for j in range(1, s.n + 1)])
    for t, row in enumerate(s.values):
        w.writerow([t] + [format_exact(v) for v in row])
    return out.getvalue()


def write_trace_csv(s: Trace, path) -> None:
    Path(path).write_text(trace_to_csv(s), encoding="utf-8")


def normalize(s: Trace, x_max) -> Trace:
    """Divide each component by its maximum so values land in [0, 1]."""
    x_max = [Fraction(x) if not isinstance(x, float) else x for x in x_max]
    if len(x_max) != s.n:
        raise TraceError(f"x_max has {len(x_max)} entries, trace has {s.n} dimensions")
    for j, m in enumerate(x_max):
        if m <= 0:
            raise TraceError("x_max must be positive")
        top = max(abs(v) for v in s.column(j + 1))
        if top > m:
            raise TraceError(f"x{j + 1} reaches {top}, above x_max={m}")
    rows = [[v / m for v, m in zip(row, x_max)] for row in s.values]
    domain = [(lo / m, hi / m) for (lo, hi), m in zip(s.domain, x_max)]
    return Trace.from_rows(rows, domain)


# -- corpora ---------------------------------------------------------------


def bundled_path(name: str) -> Path:
    if name not in BUNDLED:
        raise CorpusError(f"no bundled corpus {name!r}; choose from {', '.join(BUNDLED)}")
    return Path(str(resources.files("stldist") / "corpora" / name))


def load_corpus(path) -> Corpus:
    """Load and validate a corpus directory or a bundled corpus by name."""
    p = Path(path)
    if not p.exists() and len(p.parts) == 1:
        p = bundled_path(str(path))
    meta_file = p / "meta.json"
    if not meta_file.is_file():
        raise CorpusError(f"{p}: missing meta.json")
    try:
        doc = json.loads(meta_file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{meta_file}:{exc.lineno}: {exc.msg}") from exc
    meta = CorpusMeta.from_json(doc, str(meta_file))

    formulas = {}
    for f in sorted((p / "formulas").glob("*.stl")):
        phi = read_formula(f, meta.dims)
        if horizon(phi) > meta.T:
            raise CorpusError(f"{f}: horizon {horizon(phi)} exceeds T={meta.T}")
        formulas[f.stem] = phi
    order = doc.get("order")
    if order:
        missing = [k for k in order if k not in formulas]
        if missing:
            raise CorpusError(f"{meta_file}: order names unknown formulas {missing}")
        formulas = {k: formulas[k] for k in order} | {k: v for k, v in formulas.items() if k not in order}
    traces = {}
    for f in sorted((p / "traces").glob("*.csv")) if (p / "traces").is_dir() else []:
        try:
            s = read_trace_csv(f, meta.domain)
        except TraceError as exc:
            raise CorpusError(str(exc)) from exc
        if s.n != meta.dims:
            raise CorpusError(f"{f}: {s.n} dimensions, corpus has {meta.dims}")
        traces[f.stem] = s
    return Corpus(meta, formulas, traces, str(p))


def formula_dims(formulas) -> int:
    return max([1] + [max_dim(f) for f in formulas])
