"""Command-line front end.

Exit codes: 0 success (for ``robustness``: satisfied), 1 violated, 2 bad
input or other error, 3 empty language, 4 solver or enumeration budget
exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from .boxes import AosBudgetError, AosConfig, AosError, aos, export_json, leaf_count
from .formula import FormulaError, horizon, max_dim
from .ingest import BUNDLED, CorpusError, load_corpus, read_formula, read_trace_csv, trace_to_csv
from .milp import SolverBudgetError, SolverConfig, build_ph_program, export_lp
from .monitor import TraceError, robustness
from .oracle import LanguageBudgetError
from .parser import ParseError, format_exact
from .ph import METRIC, SLICE, EmptyLanguageError, directed_ph, ph, ph_boxsets
from .sd import NORMALIZER_T, NORMALIZER_T1, sd_boxsets, union_boxexpr

EXIT_OK, EXIT_VIOLATED, EXIT_ERROR, EXIT_EMPTY, EXIT_BUDGET = 0, 1, 2, 3, 4
OUTPUT_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    domain: tuple | None = None   # per-dim (lo, hi); default [0, 1]
    T: int | None = None          # default: largest horizon
    delta: str = "1"
    normalizer: str = NORMALIZER_T
    extend: bool = False
    ph_mode: str = METRIC
    max_nodes: int = 200_000
    max_resolutions: int = 2 ** 16
    format: str = "human"
    jobs: int = 1

    @classmethod
    def from_file(cls, path) -> "RunConfig":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if doc.get("domain") is not None:
            doc["domain"] = tuple(tuple(str(v) for v in d) for d in doc["domain"])
        if "delta" in doc:
            doc["delta"] = str(doc["delta"])
        return cls(**doc)

    def validate(self):
        if self.format not in ("human", "json", "csv"):
            raise ValueError(f"format must be human, json or csv, got {self.format!r}")
        if self.normalizer not in (NORMALIZER_T, NORMALIZER_T1):
            raise ValueError(f"normalizer must be T or T+1, got {self.normalizer!r}")
        if self.ph_mode not in (SLICE, METRIC):
            raise ValueError(f"ph mode must be slice or metric, got {self.ph_mode!r}")
        if Fraction(self.delta) <= 0:
            raise ValueError("delta must be positive")
        return self

    def solver(self) -> SolverConfig:
        return SolverConfig(max_nodes=self.max_nodes)

    def domain_for(self, formulas) -> list:
        n = max([1] + [max_dim(f) for f in formulas])
        if self.domain is None:
            return [(Fraction(0), Fraction(1))] * n
        dom = [(Fraction(lo), Fraction(hi)) for lo, hi in self.domain]
        if len(dom) < n:
            raise FormulaError(f"formulae use {n} dimensions but the domain has {len(dom)}")
        return dom

    def horizon_for(self, formulas) -> int:
        need = max([0] + [horizon(f) for f in formulas])
        if self.T is None:
            return need
        if need > self.T:
            raise FormulaError(f"formula horizon {need} exceeds T={self.T}")
        return self.T

    def aos_config(self, formulas) -> AosConfig:
        dom = self.domain_for(formulas)
        return AosConfig(x_max=[hi for _, hi in dom], delta=Fraction(self.delta),
                         T=self.horizon_for(formulas), extend=self.extend,
                         max_resolutions=self.max_resolutions)


def num(x) -> str:
    return format_exact(x)


def _emit(cfg: RunConfig, human: str, doc: dict, csv_text: str | None = None):
    if cfg.format == "json":
        print(json.dumps({"version": OUTPUT_VERSION, **doc}, indent=2))
    elif cfg.format == "csv" and csv_text is not None:
        sys.stdout.write(csv_text)
    else:
        print(human)


# -- commands ----------------------------------------------------------------


def cmd_robustness(args, cfg: RunConfig) -> int:
    f = read_formula(args.formula)
    domain = [(Fraction(lo), Fraction(hi)) for lo, hi in cfg.domain] if cfg.domain else None
    s = read_trace_csv(args.trace, domain)
    rho = robustness(s, f, args.t)
    text = num(rho) if isinstance(rho, Fraction) else str(rho)
    _emit(cfg, text, {"robustness": text, "satisfied": rho >= 0}, f"robustness\n{text}\n")
    return EXIT_OK if rho >= 0 else EXIT_VIOLATED


def cmd_ph(args, cfg: RunConfig) -> int:
    f1, f2 = read_formula(args.f1), read_formula(args.f2)
    domain, T = cfg.domain_for((f1, f2)), cfg.horizon_for((f1, f2))
    if args.export_lp:
        Path(args.export_lp).write_text(export_lp(build_ph_program(f1, f2, domain, T)), encoding="utf-8")
        print(f"wrote {args.export_lp}")
        return EXIT_OK
    res = ph(f1, f2, domain, T, cfg.solver())
    if args.witness and res.witness is not None:
        Path(args.witness).write_text(trace_to_csv(res.witness), encoding="utf-8")
    if args.directed:
        human = f"1->2: {num(res.directed_12)}, 2->1: {num(res.directed_21)}"
    else:
        human = num(res.undirected)
    doc = {"directed_12": num(res.directed_12), "directed_21": num(res.directed_21),
           "undirected": num(res.undirected)}
    csv_text = "directed_12,directed_21,undirected\n" + ",".join(doc.values()) + "\n"
    _emit(cfg, human, doc, csv_text)
    return EXIT_OK


def cmd_export_lp(args, cfg: RunConfig) -> int:
    f1, f2 = read_formula(args.f1), read_formula(args.f2)
    text = export_lp(build_ph_program(f1, f2, cfg.domain_for((f1, f2)), cfg.horizon_for((f1, f2))))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sd(args, cfg: RunConfig) -> int:
    f1, f2 = read_formula(args.f1), read_formula(args.f2)
    acfg = cfg.aos_config((f1, f2))
    n = len(cfg.domain_for((f1, f2)))
    res = sd_boxsets(aos(f1, acfg), aos(f2, acfg), acfg.T, n, cfg.normalizer, cfg.extend, cfg.max_resolutions)
    human = (f"{num(res.distance)}  (area1={num(res.area_1)}, area2={num(res.area_2)}, "
             f"overlap={num(res.overlap_area)})")
    doc = res.to_json() | {"distance": num(res.distance)}
    _emit(cfg, human, doc, f"distance\n{num(res.distance)}\n")
    return EXIT_OK


def cmd_aos(args, cfg: RunConfig) -> int:
    f = read_formula(args.formula)
    acfg = cfg.aos_config((f,))
    e = aos(f, acfg)
    text = export_json(e, acfg.T)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.output} ({leaf_count(e)} resolutions)")
    else:
        print(text)
    return EXIT_OK


def _load_formula_dir(path: str, cfg: RunConfig):
    """Ordered formulae of a corpus or a plain directory, plus a config
    filled in from the corpus metadata when the user gave none."""
    p = Path(path)
    if (p / "meta.json").is_file() or (not p.exists() and path in BUNDLED):
        corpus = load_corpus(path)
        meta = corpus.meta
        if cfg.domain is None:
            cfg = replace(cfg, domain=tuple((str(lo), str(hi)) for lo, hi in meta.domain))
        if cfg.T is None:
            cfg = replace(cfg, T=meta.T)
        return dict(corpus.formulas), cfg
    if not p.is_dir():
        raise CorpusError(f"{path}: not a directory")
    return {f.stem: read_formula(f) for f in sorted(p.glob("*.stl"))}, cfg


def _error_code(exc) -> str:
    return f"E{_exit_code(exc)}"


def _pair_directed(job):
    f1, f2, domain, T, max_nodes = job
    try:
        return num(directed_ph(f1, f2, domain, T, SolverConfig(max_nodes=max_nodes)))
    except Exception as exc:  # recorded in the cell, the table goes on
        return _error_code(exc)


def _cell_value(cell):
    return None if cell.startswith("E") else Fraction(cell)


def table_matrices(formulas: dict, cfg: RunConfig, metrics=("directed", "ph", "sd")) -> dict:
    names = list(formulas)
    fs = list(formulas.values())
    out: dict = {"names": names}
    if not fs:
        return out | {m: [] for m in metrics}
    domain, T = cfg.domain_for(fs), cfg.horizon_for(fs)
    if "directed" in metrics or "ph" in metrics:
        jobs = [(a, b, domain, T, cfg.max_nodes) for a in fs for b in fs]
        if cfg.jobs > 1:
            with ProcessPoolExecutor(cfg.jobs) as pool:
                cells = list(pool.map(_pair_directed, jobs))
        else:
            cells = [_pair_directed(j) for j in jobs]
        k = len(fs)
        directed = [cells[i * k:(i + 1) * k] for i in range(k)]
        if "directed" in metrics:
            out["directed"] = directed
        if "ph" in metrics:
            und = []
            for i in range(k):
                row = []
                for j in range(k):
                    a, b = directed[i][j], directed[j][i]
                    row.append(a if a.startswith("E") else b if b.startswith("E")
                               else num(max(Fraction(a), Fraction(b))))
                und.append(row)
            out["ph"] = und
    if "sd" in metrics:
        acfg = cfg.aos_config(fs)
        exprs = []
        for f in fs:
            try:
                exprs.append(aos(f, acfg))
            except Exception as exc:
                exprs.append(exc)
        n = len(domain)
        rows = []
        for a in exprs:
            row = []
            for b in exprs:
                if isinstance(a, Exception) or isinstance(b, Exception):
                    row.append(_error_code(a if isinstance(a, Exception) else b))
                    continue
                try:
                    row.append(num(sd_boxsets(a, b, T, n, cfg.normalizer, cfg.extend,
                                              cfg.max_resolutions).distance))
                except Exception as exc:
                    row.append(_error_code(exc))
            rows.append(row)
        out["sd"] = rows
    return out


def _matrix_csv(title, names, rows) -> str:
    lines = [f"# {title}", ",".join([""] + names)]
    lines += [",".join([n] + r) for n, r in zip(names, rows)]
    return "\n".join(lines) + "\n"


def _matrix_human(title, names, rows) -> str:
    w = max([len(n) for n in names] + [max((len(c) for r in rows for c in r), default=1), 4]) + 2
    lines = [title, "".ljust(w) + "".join(n.rjust(w) for n in names)]
    lines += [n.ljust(w) + "".join(c.rjust(w) for c in r) for n, r in zip(names, rows)]
    return "\n".join(lines)


TITLES = {"directed": "directed PH (row -> column)", "ph": "PH", "sd": "SD"}


def cmd_table(args, cfg: RunConfig) -> int:
    formulas, cfg = _load_formula_dir(args.directory, cfg)
    metrics = ("directed", "ph", "sd") if args.metric == "all" else (args.metric,)
    mats = table_matrices(formulas, cfg, metrics)
    names = mats["names"]
    human = "\n\n".join(_matrix_human(TITLES[m], names, mats[m]) for m in metrics)
    csv_text = "\n".join(_matrix_csv(TITLES[m], names, mats[m]) for m in metrics)
    _emit(cfg, human, mats, csv_text)
    return EXIT_OK


def cmd_specset(args, cfg: RunConfig) -> int:
    specs = [read_formula(p) for p in args.specs]
    target = read_formula(args.against)
    everything = specs + [target]
    acfg = cfg.aos_config(everything)
    n = len(cfg.domain_for(everything))
    union = union_boxexpr([aos(f, acfg) for f in specs])
    other = aos(target, acfg)
    res = sd_boxsets(union, other, acfg.T, n, cfg.normalizer, cfg.extend, cfg.max_resolutions)
    hd = ph_boxsets(union, other, acfg.T, n, cfg.ph_mode, cfg.max_resolutions)
    human = f"SD: {num(res.distance)}\nPH ({cfg.ph_mode}): {num(hd)}"
    doc = {"sd": num(res.distance), "ph": num(hd), "ph_mode": cfg.ph_mode,
           "union_area": num(res.area_1), "target_area": num(res.area_2)}
    _emit(cfg, human, doc, "sd,ph\n" + f"{num(res.distance)},{num(hd)}\n")
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def _exit_code(exc) -> int:
    if isinstance(exc, EmptyLanguageError):
        return EXIT_EMPTY
    if isinstance(exc, (SolverBudgetError, AosBudgetError, LanguageBudgetError)):
        return EXIT_BUDGET
    return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with run settings")
    common.add_argument("--format", choices=["human", "json", "csv"], help="output format")
    common.add_argument("--domain", help="per-dimension bounds, e.g. '0:1,0:320'")
    common.add_argument("-T", "--horizon", type=int, dest="T", help="time bound (default: largest horizon)")
    common.add_argument("--max-nodes", type=int, help="branch-and-bound node budget")

    aosp = argparse.ArgumentParser(add_help=False)
    aosp.add_argument("--delta", help="eventually window width (default 1)")
    aosp.add_argument("--extend", action="store_true", default=None, help="hold every sample over [t, t+1]")
    aosp.add_argument("--max-resolutions", type=int, help="choice resolution budget")

    p = argparse.ArgumentParser(prog="stldist", description="Distances between signal temporal logic formulae.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("robustness", parents=[common], help="robustness of a trace")
    s.add_argument("formula")
    s.add_argument("trace")
    s.add_argument("--t", type=int, default=0, help="evaluation time")
    s.set_defaults(func=cmd_robustness)

    s = sub.add_parser("ph", parents=[common], help="Pompeiu-Hausdorff distance")
    s.add_argument("f1")
    s.add_argument("f2")
    s.add_argument("--directed", action="store_true", help="print both directed distances")
    s.add_argument("--export-lp", metavar="PATH", help="write the 1->2 program instead of solving")
    s.add_argument("--witness", metavar="PATH", help="write the maximizing trace as CSV")
    s.set_defaults(func=cmd_ph)

    s = sub.add_parser("export-lp", parents=[common], help="LP file of the directed 1->2 program")
    s.add_argument("f1")
    s.add_argument("f2")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_lp)

    s = sub.add_parser("sd", parents=[common, aosp], help="symmetric-difference distance")
    s.add_argument("f1")
    s.add_argument("f2")
    s.add_argument("--normalizer", choices=[NORMALIZER_T, NORMALIZER_T1])
    s.set_defaults(func=cmd_sd)

    s = sub.add_parser("aos", parents=[common, aosp], help="box JSON of a formula")
    s.add_argument("formula")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_aos)

    s = sub.add_parser("table", parents=[common, aosp], help="pairwise distance matrices")
    s.add_argument("directory", help="corpus directory, directory of .stl files or a bundled corpus name")
    s.add_argument("--metric", choices=["all", "directed", "ph", "sd"], default="all")
    s.add_argument("--normalizer", choices=[NORMALIZER_T, NORMALIZER_T1])
    s.add_argument("--jobs", type=int, help="worker processes")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("specset", parents=[common, aosp], help="distances from a union of specifications")
    s.add_argument("specs", nargs="+")
    s.add_argument("--against", required=True)
    s.add_argument("--normalizer", choices=[NORMALIZER_T, NORMALIZER_T1])
    s.add_argument("--ph-mode", choices=[SLICE, METRIC])
    s.set_defaults(func=cmd_specset)
    return p


def _parse_domain(text: str) -> tuple:
    out = []
    for part in text.split(","):
        lo, hi = part.split(":")
        out.append((lo.strip(), hi.strip()))
    return tuple(out)


def resolve_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {}
    for key in ("format", "T", "max_nodes", "delta", "extend", "max_resolutions", "normalizer", "ph_mode", "jobs"):
        v = getattr(args, key, None)
        if v is not None:
            overrides[key] = v
    if getattr(args, "domain", None):
        overrides["domain"] = _parse_domain(args.domain)
    return replace(cfg, **overrides).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except (EmptyLanguageError, SolverBudgetError, AosBudgetError, LanguageBudgetError,
            ParseError, FormulaError, TraceError, CorpusError, AosError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
