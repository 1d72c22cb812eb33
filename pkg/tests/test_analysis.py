import numpy as np
import pytest

from hdccic.analysis import (
    GapViolation,
    reference_sweep,
    gap_sweep,
    optimized_inner,
    region_map,
    regions_present,
    theorem_gap_audit,
)
from hdccic.channel import ExponentPoint, Topology, gains_from_exponents
from hdccic.gdof import gdof_closed_form
from hdccic.inner_bounds import inner_best


def test_gap_sweep_records():
    recs = gap_sweep(ExponentPoint(3, 4), (20, 100), 10)
    assert [r.snr_db for r in recs] == list(np.arange(20.0, 101.0, 10.0))
    for r in recs:
        assert r.gap_bits == pytest.approx(r.ob_bits - r.ib_bits)
        assert 0 <= r.gap_bits <= 5
        assert r.regime_index == 3


def test_gap_sweep_trivial_point():
    (r,) = gap_sweep(ExponentPoint(1, 1), (0, 0), 1)
    assert r.gap_bits >= 0


def test_gap_sweep_validation():
    with pytest.raises(ValueError):
        gap_sweep(ExponentPoint(1, 1), (10, 0), 1)
    with pytest.raises(ValueError):
        gap_sweep(ExponentPoint(1, 1), (0, 10), 0)


def test_optimize_never_worse():
    p = ExponentPoint(0.55, 2)
    plain = gap_sweep(p, (30, 50), 10)
    opt = gap_sweep(p, (30, 50), 10, optimize=True)
    for a, b in zip(plain, opt):
        assert b.gap_bits <= a.gap_bits + 1e-12


def test_optimized_inner_is_achievable():
    g = gains_from_exponents(ExponentPoint(0.55, 2), 40)
    best, _ = optimized_inner(g, "sym")
    assert best >= inner_best(g, "sym").sum_bits


def test_reference_sweep_is_bounded():
    recs = reference_sweep(step_db=25)
    assert all(0 <= r.gap_bits <= 8.5048 for r in recs)
    assert {r.regime_index for r in recs} == {8}


def test_audit_small_grids():
    for top in Topology:
        rep = theorem_gap_audit(top, [0, 0.5, 1.5, 3], [0, 1, 3, 5], [10, 50])
        assert rep.passed and rep.min_gap_bits >= 0
        assert rep.worst_gap_bits <= rep.theorem_bits
        assert sum(r.n_points for r in rep.per_regime.values()) == rep.n_points == 32


def test_audit_s_channel_very_strong_point():
    rep = theorem_gap_audit("s", [3], [1], [60])
    # the printed outer-bound constants leave 2.507 bits here
    assert rep.worst_gap_bits == pytest.approx(2.507, abs=1e-6)
    assert rep.per_regime[1].fd_cited and not rep.per_regime[1].within_constant


def test_audit_raises_on_violation(monkeypatch):
    import hdccic.analysis as an

    monkeypatch.setitem(an.THEOREM_GAP_BITS, Topology.Z, 0.5)
    with pytest.raises(GapViolation):
        an.theorem_gap_audit("z", [3], [4], [60])
    rep = an.theorem_gap_audit("z", [3], [4], [60], raise_on_violation=False)
    assert not rep.passed and rep.violations[0][:3] == (3.0, 4.0, 60.0)


def test_audit_report_lines():
    rep = theorem_gap_audit("z", [0.5, 3], [1, 4], [20])
    text = "\n".join(rep.summary_lines())
    assert "worst gap <= 4.507" in text


def test_region_map_counts():
    cells = region_map("sym", (0, 4), (0, 6), 0.05)
    assert regions_present(cells) == list(range(1, 11))
    assert len(cells) == 81 * 121
    assert regions_present(region_map("z", (0, 4), (0, 6), 0.1)) == [1, 2, 3, 4, 5]


def test_region_map_s_strip():
    cells = region_map("s", (2, 4), (0, 6), 0.25)
    assert {c.region for c in cells} == {1}
    assert all(c.d == 1 for c in cells)


def test_region_map_matches_closed_form():
    for c in region_map("s", (0, 2), (0, 4), 0.25):
        assert c.d == float(gdof_closed_form(ExponentPoint(c.alpha, c.beta, "s")).d)


def test_region_map_row_major():
    cells = region_map("sym", (0, 0.1), (0, 0.1), 0.05)
    assert [(c.alpha, c.beta) for c in cells[:4]] == [(0, 0), (0, 0.05), (0, 0.1), (0.05, 0)]
