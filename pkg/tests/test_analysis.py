from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from treechk.analysis import (
    BoundedReport,
    LandscapeReport,
    LandscapeRow,
    LinearEvidence,
    count_height_trees,
    fit_regime,
    g_d,
    g_floor,
    gap_probe,
    landscape,
    max_diameter_bound,
    threshold_S,
)
from treechk.checkers import accepts, preset, view_set_checker
from treechk.constructions import gen_increasing_caterpillar, gen_k_rake, gen_path
from treechk.core import CapExceeded, diameter, enumerate_trees


# ---------------------------------------------------------------- landscapes

def test_paths_landscape():
    # a lone vertex has degree 0, which the preset does not allow
    rep = landscape(preset("paths"), 12)
    assert [r.as_tuple() for r in rep.rows] == [(n, 1, n - 1, n - 1, False) for n in range(2, 13)]


def test_accept_all_landscape():
    rep = landscape(preset("accept-all"), 10)
    # counts of unlabeled free trees
    assert [r.accepted_count for r in rep.rows] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]
    assert all(r.min_diameter <= 2 and r.max_diameter == r.n - 1 for r in rep.rows)


def test_binary_landscape_matches_filtered_enumeration():
    ch = preset("binary")
    rep = landscape(ch, 14)
    for r in rep.rows:
        ds = [diameter(t) for t in enumerate_trees(r.n, 1) if accepts(ch, t).accept]
        assert (r.accepted_count, r.min_diameter, r.max_diameter) == (len(ds), min(ds), max(ds))
    # only even sizes carry trees with all degrees in {1,3}
    assert {r.n % 2 for r in rep.rows if r.n > 2} == {0}


@pytest.mark.slow
def test_binary_landscape_n22():
    row = landscape(preset("binary"), 22).rows[-1]
    assert row.as_tuple()[:4] == (22, 37, 6, 11)


def test_view_set_landscape_contains_its_samples():
    samples = [gen_path(6), gen_increasing_caterpillar(4)]
    ch = view_set_checker(samples, 1, 1)
    rep = landscape(ch, 9, mode="enumerate")
    assert {6, 8} <= {r.n for r in rep.rows}


def test_csv_round_trip():
    rep = landscape(preset("binary"), 10)
    rep.rows.append(LandscapeRow(11, 0, None, None, True))
    text = rep.to_csv()
    assert text.splitlines()[0] == "n,accepted_count,min_diameter,max_diameter,truncated"
    back = LandscapeReport.from_csv(text)
    assert [r.as_tuple() for r in back.rows] == [r.as_tuple() for r in rep.rows]


def test_cap_marks_rows_truncated(monkeypatch):
    monkeypatch.setenv("TREECHK_CAP", "30")
    rep = landscape(preset("accept-all"), 10)
    assert rep.rows[-1].truncated and not rep.rows[0].truncated
    with pytest.raises(CapExceeded):
        list(enumerate_trees(10, 1))


def test_families_mode():
    trees = [gen_increasing_caterpillar(i) for i in range(2, 9)] + [gen_path(5)]
    rep = landscape(None, 100, mode="families", trees=trees)
    assert [r.n for r in rep.rows] == sorted({t.n for t in trees})
    row5 = next(r for r in rep.rows if r.n == 5)
    assert row5.accepted_count == 2 and (row5.min_diameter, row5.max_diameter) == (3, 4)
    only_paths = landscape(preset("paths"), 100, mode="families", trees=trees)
    assert all(r.min_diameter == r.n - 1 for r in only_paths.rows)
    with pytest.raises(ValueError):
        landscape(None, 5)
    with pytest.raises(ValueError):
        landscape(preset("paths"), 5, mode="sample")


# ---------------------------------------------------------------- thresholds

def test_threshold_small_radii():
    assert threshold_S(3, 1, 1000) == 1.0
    assert threshold_S(1, 2, 8) == pytest.approx(8 ** (2 / 3))
    assert threshold_S(2, 2, 64) == pytest.approx((2 * 64**2) ** 0.4)
    assert threshold_S(1, 3, 1024) == pytest.approx(36 * 1024 / 100)
    assert max_diameter_bound(3, 1, 50) == 9.0
    with pytest.raises(ValueError):
        threshold_S(0, 1, 10)


@given(st.integers(4, 5), st.floats(1.0, 1e6))
def test_g_d_inverts(d, scale):
    lo = g_floor(d)
    k = d - 3
    f = lambda x: x / _iterlog(x, k)  # noqa: E731
    y = f(lo) * (1 + scale)
    x = g_d(y, d)
    assert x >= lo and f(x) == pytest.approx(y, rel=1e-9)


def _iterlog(x, k):
    for _ in range(k):
        x = math.log2(x)
    return x


def test_threshold_large_radius():
    n = 2.0**40
    s4 = threshold_S(1, 4, n)
    assert s4 == pytest.approx(4 * n / g_d(40, 4))
    # deeper iterated logs invert to smaller values, so S grows with the radius but stays sublinear
    n = 2.0**200
    assert threshold_S(1, 4, n) < threshold_S(1, 5, n) < n
    with pytest.raises(ValueError):
        g_d(1.0, 4)
    with pytest.raises(ValueError):
        g_floor(3)


# ---------------------------------------------------------------- gap probe

def test_gap_probe_finds_pumpable_tree():
    ev = gap_probe(preset("paths"), 8)
    assert isinstance(ev, LinearEvidence)
    sizes = [t.n for t in ev.replay((2, 3, 4))]
    assert sizes[1] - sizes[0] == sizes[2] - sizes[1] > 0
    assert all(accepts(preset("paths"), t).accept for t in ev.replay())
    assert ev.to_dict()["kind"] == "LinearEvidence"


def test_gap_probe_bounded_case():
    # increasing caterpillars have no equal-view pair at radius 2
    samples = [gen_increasing_caterpillar(i) for i in range(1, 6)]
    ch = view_set_checker(samples, 2, 1)
    rep = gap_probe(ch, 9)
    assert isinstance(rep, BoundedReport)
    assert rep.rows and all(r["max_diameter"] <= r["bound"] for r in rep.rows if r["bound"] is not None)
    assert rep.to_dict()["kind"] == "BoundedReport"


# ---------------------------------------------------------------- rooted counts

def _level_sequences(k: int):
    """Canonical level sequences of rooted trees (Beyer-Hedetniemi successor)."""
    seq = list(range(k))
    yield tuple(seq)
    while True:
        p = max((i for i in range(k) if seq[i] > 1), default=None)
        if p is None:
            return
        q = max(i for i in range(p) if seq[i] == seq[p] - 1)
        for i in range(p, k):
            seq[i] = seq[i - (p - q)]
        yield tuple(seq)


def test_level_sequence_oracle_counts():
    assert [sum(1 for _ in _level_sequences(k)) for k in range(1, 10)] == [1, 1, 2, 4, 9, 20, 48, 115, 286]


@pytest.mark.parametrize("k", range(1, 12))
def test_count_height_trees_against_oracle(k):
    by_height: dict[int, int] = {}
    for s in _level_sequences(k):
        by_height[max(s)] = by_height.get(max(s), 0) + 1
    for d in range(0, k + 1):
        assert count_height_trees(d, k) == by_height.get(d, 0)
        assert count_height_trees(d, k, exact=False) == sum(v for h, v in by_height.items() if h <= d)


def test_count_height_trees_examples():
    assert [count_height_trees(2, k) for k in range(1, 7)] == [0, 0, 1, 2, 4, 6]
    with pytest.raises(CapExceeded):
        count_height_trees(5, 16, cap=10)
    with pytest.raises(ValueError):
        count_height_trees(1, 0)


# ---------------------------------------------------------------- regime fitting

def _rows(f, ns):
    return [LandscapeRow(n, 1, f(n), f(n)) for n in ns]


def test_fit_regime_pass_and_fail():
    ns = [2**i for i in range(3, 16)]
    sqrt_rows = _rows(lambda n: math.isqrt(n) + 1, ns)
    assert fit_regime(sqrt_rows, "max", "Sqrt").passed
    assert not fit_regime(sqrt_rows, "max", "Log").passed
    assert not fit_regime(sqrt_rows, "max", "Linear").passed
    log_rows = _rows(lambda n: 3 * n.bit_length(), ns)
    assert fit_regime(log_rows, "min", "Log").passed
    assert fit_regime(_rows(lambda n: 7, ns), "min", "Constant").passed
    assert fit_regime(_rows(lambda n: round(n ** (2 / 3)), ns), "max", "Pow:2/3").passed
    fit = fit_regime(LandscapeReport(sqrt_rows), "max", "Sqrt", factor=1.5)
    assert fit.to_dict()["verdict"] == ("pass" if fit.hi / fit.lo <= 1.5 else "fail")


def test_fit_regime_on_rakes():
    rows = []
    for ell in (2, 4, 8, 16, 32, 64, 128):
        t = gen_k_rake(2, ell)
        rows.append(LandscapeRow(t.n, 1, diameter(t), diameter(t)))
    assert fit_regime(rows, "min", "Sqrt").passed
    assert not fit_regime(rows, "min", "Constant").passed


def test_fit_regime_errors():
    with pytest.raises(ValueError):
        fit_regime(_rows(lambda n: n, [1, 2, 3]), "max", "Linear")
    with pytest.raises(ValueError):
        fit_regime(_rows(lambda n: n, range(2, 10)), "mid", "Linear")
    with pytest.raises(ValueError):
        fit_regime(_rows(lambda n: n, range(2, 10)), "max", "Cubic")
