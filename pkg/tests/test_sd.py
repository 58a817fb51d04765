from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stldist.boxes import AosConfig, EMPTY, Leaf, aos, box, leaf_count, resolutions
from stldist.formula import And, Globally, Interval, Pred
from stldist.ingest import load_corpus
from stldist.oracle import grid_projection_symdiff
from stldist.sd import NORMALIZER_T1, normalizer_value, sd, sd_boxsets, union_boxexpr

from strategies import GRID5

CFG = AosConfig(T=20)


def test_examples(suite):
    assert sd(suite["phi1"], suite["phi5"], CFG).distance == F(9, 250)
    assert sd(suite["phi1"], suite["phi4"], CFG).distance == 0
    assert sd(suite["top"], suite["phi1"], CFG).distance == F(4, 5)
    assert sd(suite["phi2"], suite["phi5"], CFG).distance == F(11, 250)


def test_result_fields(suite):
    res = sd(suite["phi1"], suite["phi2"], CFG)
    assert (res.area_1, res.area_2, res.overlap_area) == (4, F(24, 5), 4)
    assert res.distance == F(1, 25)
    doc = res.to_json()
    assert doc["distance"] == pytest.approx(0.04) and len(doc["best_resolution_1"]) == 1


def test_choice_minimizes(suite):
    # phi3 has a resolution inside phi1's single box, the closest one is kept
    res = sd(suite["phi1"], suite["phi3"], CFG)
    assert res.distance == F(4 - F(1, 5), 20)
    assert res.best_resolution_2[0].ut - res.best_resolution_2[0].lt == 1


def test_identity_and_symmetry(sd_table):
    names = {a for a, _ in sd_table}
    for a in names:
        assert sd_table[a, a] == 0
        for b in names:
            assert sd_table[a, b] == sd_table[b, a]


def test_disjoint_unit_boxes():
    e1, e2 = Leaf((box(0, 1, 0, 1, 1),)), Leaf((box(2, 3, 0, 1, 1),))
    assert sd_boxsets(e1, e2, 20, 1).distance == F(1, 10)


def test_normalizers():
    assert normalizer_value(20) == 20
    assert normalizer_value(20, NORMALIZER_T1) == 21
    with pytest.raises(ValueError):
        normalizer_value(20, "2T")
    e1, e2 = Leaf((box(0, 1, 0, 1, 1),)), Leaf((box(2, 3, 0, 1, 1),))
    assert sd_boxsets(e1, e2, 20, 1, NORMALIZER_T1).distance == F(2, 21)


def test_longer_horizon_scales(suite):
    # the same boxes over a longer horizon only change the normalizer
    for a, b in [("phi1", "phi5"), ("phi2", "phi6"), ("phi3", "phi4")]:
        d20 = sd(suite[a], suite[b], CFG).distance
        d25 = sd(suite[a], suite[b], AosConfig(T=25)).distance
        assert d25 == d20 * 20 / 25


def test_extend_widens(suite):
    res = sd(suite["phi1"], suite["phi5"], AosConfig(T=20, extend=True))
    assert res.area_1 == F(21, 5)


def test_union_identities(suite):
    e = aos(suite["phi6"], CFG)
    assert union_boxexpr([e]) == e
    assert union_boxexpr([EMPTY, e]) == e
    # pairs of resolutions: every original resolution is among them
    twice = list(resolutions(union_boxexpr([e, e])))
    assert len(twice) == 16 and set(resolutions(e)) <= set(twice)
    assert union_boxexpr([]) == EMPTY
    u = union_boxexpr([aos(suite["phi3"], CFG), e])
    assert leaf_count(u) == 80


def test_union_grows(suite):
    a, b = aos(suite["phi1"], CFG), aos(suite["phi5"], CFG)
    u = union_boxexpr([a, b])
    assert leaf_count(u) == 1
    assert sd_boxsets(u, a, 20, 1).area_1 >= sd_boxsets(a, a, 20, 1).area_1


def test_genetic_union():
    corpus = load_corpus("genetic")
    cfg = AosConfig(x_max=corpus.meta.x_max, T=corpus.meta.T)
    low, high = (aos(corpus.formulas[k], cfg) for k in ("phi_low", "phi_high"))
    u = union_boxexpr([low, high])
    assert sd_boxsets(u, u, 300, 1).area_1 == F(1675, 8)
    assert sd_boxsets(low, low, 300, 1).area_1 == F(75, 2)
    assert sd_boxsets(u, low, 300, 1).distance == F(55, 96)
    assert sd_boxsets(u, u, 300, 1).distance == 0


def _g(dim, op, thr, T):
    return Globally(Interval(0, T), Pred(dim, op, thr))


@st.composite
def full_window_pairs(draw):
    T = draw(st.integers(1, 4))
    n = draw(st.integers(1, 2))
    part = st.tuples(st.integers(1, n), st.sampled_from(["<=", ">="]), st.sampled_from(GRID5))

    def conj():
        parts = draw(st.lists(part, min_size=1, max_size=3))
        f = _g(*parts[0], T)
        for p in parts[1:]:
            f = And(f, _g(*p, T))
        return f

    return conj(), conj(), n, T


@settings(max_examples=60, deadline=None)
@given(full_window_pairs())
def test_agrees_with_grid_projection(case):
    # with every window equal to [0, T] the boxes are exactly the swept area
    f1, f2, n, T = case
    cfg = AosConfig(T=T)
    e1, e2 = aos(f1, cfg), aos(f2, cfg)
    if e1 == EMPTY or e2 == EMPTY:
        return
    d = sd_boxsets(e1, e2, T, n).distance
    grid = grid_projection_symdiff(f1, f2, F(1, 100), [(0, 1)] * n, T)
    assert abs(d * T - grid) <= F(1, 50)
