"""Quantitative distances between signal temporal logic formulae.

Pompeiu-Hausdorff distances come from an exact mixed-integer program,
symmetric-difference distances from area-of-satisfaction boxes.  A
robustness monitor and an explicit language oracle back both up.
"""
from .boxes import AosConfig, Choice, Leaf, SpaceTimeBox, aos, combine, overlap, resolutions, union_area
from .formula import Formula, FormulaError, horizon, relax, to_nnf
from .ingest import Corpus, load_corpus, normalize
from .monitor import Trace, TraceError, TraceTooShortError, robustness, satisfies
from .parser import ParseError, parse_formula
from .ph import EmptyLanguageError, PhResult, directed_ph, ph, ph_boxsets, trace_to_formula_distance
from .sd import SdResult, sd, sd_boxsets, union_boxexpr

__version__ = "0.1.0"

__all__ = [
    "AosConfig",
    "Choice",
    "Corpus",
    "EmptyLanguageError",
    "Formula",
    "FormulaError",
    "Leaf",
    "ParseError",
    "PhResult",
    "SdResult",
    "SpaceTimeBox",
    "Trace",
    "TraceError",
    "TraceTooShortError",
    "aos",
    "combine",
    "directed_ph",
    "horizon",
    "load_corpus",
    "normalize",
    "overlap",
    "parse_formula",
    "ph",
    "ph_boxsets",
    "relax",
    "resolutions",
    "robustness",
    "satisfies",
    "sd",
    "sd_boxsets",
    "to_nnf",
    "trace_to_formula_distance",
    "union_area",
    "union_boxexpr",
]
