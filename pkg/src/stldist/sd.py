"""Symmetric-difference distance between area-of-satisfaction box sets.

For one resolution of each side the distance is the measure of the
symmetric difference of the two box unions divided by a normalizer, either
``T`` (the default) or ``T + 1``.  Over choices the smallest value wins.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .boxes import (
    DEFAULT_MAX_RESOLUTIONS,
    AosBudgetError,
    AosConfig,
    BoxExpr,
    Choice,
    EMPTY,
    Leaf,
    aos,
    leaf_count,
    prune,
    resolutions,
    union_area,
)
from .formula import Formula, horizon, max_dim

NORMALIZER_T = "T"
NORMALIZER_T1 = "T+1"


@dataclass(frozen=True)
class SdResult:
    distance: Fraction
    best_resolution_1: tuple
    best_resolution_2: tuple
    area_1: Fraction
    area_2: Fraction
    overlap_area: Fraction

    def to_json(self) -> dict:
        return {
            "distance": float(self.distance),
            "area_1": float(self.area_1),
            "area_2": float(self.area_2),
            "overlap_area": float(self.overlap_area),
            "best_resolution_1": [b.to_json() for b in self.best_resolution_1],
            "best_resolution_2": [b.to_json() for b in self.best_resolution_2],
        }


def normalizer_value(T, normalizer: str = NORMALIZER_T) -> Fraction:
    if normalizer == NORMALIZER_T:
        return Fraction(T)
    if normalizer == NORMALIZER_T1:
        return Fraction(T) + 1
    raise ValueError(f"normalizer must be {NORMALIZER_T!r} or {NORMALIZER_T1!r}, got {normalizer!r}")


def sd_boxsets(e1: BoxExpr, e2: BoxExpr, T, n: int, normalizer: str = NORMALIZER_T,
               extend: bool = False, max_pairs: int = DEFAULT_MAX_RESOLUTIONS) -> SdResult:
    """Smallest normalized symmetric difference over resolution pairs."""
    norm = normalizer_value(T, normalizer)
    if norm <= 0:
        raise ValueError("the normalizer must be positive")
    if leaf_count(e1) * leaf_count(e2) > max_pairs:
        raise AosBudgetError(f"more than {max_pairs} resolution pairs")
    r1s, r2s = list(resolutions(e1)), list(resolutions(e2))
    areas: dict = {}

    def area(boxes):
        if boxes not in areas:
            areas[boxes] = union_area(boxes, n, extend)
        return areas[boxes]

    best = None
    for r1, r2 in product(r1s, r2s):
        a1, a2 = area(r1), area(r2)
        joint = area(prune(r1 + r2))
        common = a1 + a2 - joint
        d = (2 * joint - a1 - a2) / norm
        if best is None or d < best.distance:
            best = SdResult(d, r1, r2, a1, a2, common)
    return best


def sd(f1: Formula, f2: Formula, cfg: AosConfig | None = None, normalizer: str = NORMALIZER_T) -> SdResult:
    """Symmetric-difference distance between two formulae."""
    cfg = cfg or AosConfig()
    T = cfg.T if cfg.T is not None else max(horizon(f1), horizon(f2))
    if cfg.T is None:
        cfg = AosConfig(cfg.x_max, cfg.delta, T, cfg.extend, cfg.max_resolutions)
    n = max(1, max_dim(f1), max_dim(f2))
    return sd_boxsets(aos(f1, cfg), aos(f2, cfg), T, n, normalizer, cfg.extend, cfg.max_resolutions)


def union_boxexpr(exprs: Sequence[BoxExpr]) -> BoxExpr:
    """Expression whose resolutions are unions of one resolution of each input."""
    out: BoxExpr = EMPTY
    for e in exprs:
        out = _union2(out, e)
    return out


def _union2(a: BoxExpr, b: BoxExpr) -> BoxExpr:
    if isinstance(a, Choice):
        return Choice(_union2(a.left, b), _union2(a.right, b))
    if isinstance(b, Choice):
        return Choice(_union2(a, b.left), _union2(a, b.right))
    return Leaf(prune(a.boxes + b.boxes))
