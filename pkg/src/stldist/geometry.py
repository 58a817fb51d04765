"""Exact geometry on finite unions of closed axis-aligned boxes.

A box is a tuple of ``(lo, hi)`` pairs, one per coordinate.  All boxes in
one call share the same coordinate count.  Values may be ints, Fractions or
``gmpy2.mpq``; results are returned as Fractions.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Box = tuple  # tuple[(lo, hi), ...]


def box_measure(box: Box) -> Fraction:
    out = Fraction(1)
    for lo, hi in box:
        out *= Fraction(hi) - Fraction(lo)
    return out


def contains(outer: Box, inner: Box) -> bool:
    return all(olo <= ilo and ihi <= ohi for (olo, ohi), (ilo, ihi) in zip(outer, inner))


def intersect(a: Box, b: Box) -> Box | None:
    out = []
    for (alo, ahi), (blo, bhi) in zip(a, b):
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo > hi:
            return None
        out.append((lo, hi))
    return tuple(out)


def prune_contained(boxes: Sequence[Box]) -> list:
    """Drop duplicates and boxes contained in another box of the list."""
    unique = list(dict.fromkeys(boxes))
    # larger boxes first so containers are seen before what they contain
    unique.sort(key=lambda b: [lo - hi for lo, hi in b])
    kept: list = []
    for b in unique:
        if not any(contains(k, b) for k in kept):
            kept.append(b)
    return kept


def union_measure(boxes: Sequence[Box]) -> Fraction:
    """Lebesgue measure of a union of boxes by recursive coordinate sweep."""
    boxes = [b for b in boxes if all(lo < hi for lo, hi in b)]
    if not boxes:
        return Fraction(0)
    return _sweep(boxes)


def _sweep(boxes) -> Fraction:
    if not boxes[0]:
        return Fraction(1)
    if len(boxes) == 1:
        return box_measure(boxes[0])
    cuts = sorted({b[0][0] for b in boxes} | {b[0][1] for b in boxes})
    total = Fraction(0)
    memo: dict = {}
    for lo, hi in zip(cuts, cuts[1:]):
        active = tuple(sorted(b[1:] for b in boxes if b[0][0] <= lo and b[0][1] >= hi))
        if not active:
            continue
        if active not in memo:
            memo[active] = _sweep(list(active))
        total += (Fraction(hi) - Fraction(lo)) * memo[active]
    return total


# -- Hausdorff distance under the L-inf norm -------------------------------


def _gap(u, lo, hi):
    if u < lo:
        return lo - u
    if u > hi:
        return u - hi
    return 0


def directed_hausdorff(A: Sequence[Box], B: Sequence[Box]) -> Fraction:
    """``sup over a in A of inf over b in B of |a - b|_inf`` for closed box unions.

    Exact.  Fixing all coordinates but one, the distance to B is a minimum
    of functions that each decrease then increase in that coordinate, so its
    maximum over an interval sits at an end of the interval or where a
    falling branch meets a rising one, i.e. halfway between an upper end and
    a lower end of two B intervals.  Those candidates are searched
    coordinate by coordinate with branch-and-bound.
    """
    if not A:
        raise ValueError("directed Hausdorff distance from an empty set")
    if not B:
        raise ValueError("directed Hausdorff distance to an empty set is unbounded")
    scale = _common_scale(A, B)
    Ai = [tuple((int(lo * scale), int(hi * scale)) for lo, hi in a) for a in A]
    Bi = [tuple((int(lo * scale), int(hi * scale)) for lo, hi in b) for b in B]
    best = 0
    for a in Ai:
        if any(contains(b, a) for b in Bi):
            continue
        best = max(best, _box_sup(a, Bi, best))
    return Fraction(best, scale)


def hausdorff(A: Sequence[Box], B: Sequence[Box]) -> Fraction:
    return max(directed_hausdorff(A, B), directed_hausdorff(B, A))


def _common_scale(A, B) -> int:
    # twice the lcm of denominators keeps every midpoint an integer
    den = 1
    for boxes in (A, B):
        for b in boxes:
            for lo, hi in b:
                den = math.lcm(den, Fraction(lo).denominator, Fraction(hi).denominator)
    return 2 * den


def _box_sup(a, B, floor):
    """Max over points of box ``a`` of the distance to the union of ``B``."""
    n = len(a)
    # only coordinates where some B box is narrower than a can matter
    coords = [c for c in range(n) if any(b[c][0] > a[c][0] or b[c][1] < a[c][1] for b in B)]
    if not coords:
        return 0
    cands = []  # per coordinate: list of gap vectors over B
    for c in coords:
        lo, hi = a[c]
        pts = {lo, hi}
        ends = sorted({b[c][1] for b in B})
        starts = sorted({b[c][0] for b in B})
        for e in ends:
            for s in starts:
                if e < s:
                    m = (e + s) // 2
                    if lo <= m <= hi:
                        pts.add(m)
        vecs = {tuple(_gap(u, b[c][0], b[c][1]) for b in B) for u in pts}
        cands.append(_pareto(vecs))
    # tightest coordinates first
    order = sorted(range(len(coords)), key=lambda i: -max(max(v) for v in cands[i]))
    cands = [cands[i] for i in order]
    m = len(B)
    # suffix[i][j]: best gap to B[j] obtainable on coordinates i..end
    suffix = [[0] * m for _ in range(len(cands) + 1)]
    for i in range(len(cands) - 1, -1, -1):
        row = suffix[i + 1]
        suffix[i] = [max(row[j], max(v[j] for v in cands[i])) for j in range(m)]
    best = floor

    def dfs(i, partial):
        nonlocal best
        bound = min(max(p, s) for p, s in zip(partial, suffix[i]))
        if bound <= best:
            return
        if i == len(cands):
            best = bound
            return
        for v in cands[i]:
            dfs(i + 1, [max(p, g) for p, g in zip(partial, v)])

    dfs(0, [0] * m)
    return best


def _pareto(vecs):
    vecs = sorted(vecs, key=lambda v: -sum(v))
    kept = []
    for v in vecs:
        if not any(all(x >= y for x, y in zip(k, v)) for k in kept):
            kept.append(v)
    return kept
