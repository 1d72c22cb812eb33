"""Acceptance criteria, one test (and one printed PASS/FAIL line) each."""

import time
from fractions import Fraction as F

import numpy as np
import pytest

from hdccic.analysis import DEFAULT_BETA_GRID, DEFAULT_SNR_GRID, reference_sweep, theorem_gap_audit
from hdccic.channel import THEOREM_GAP_BITS, ExponentPoint, Topology
from hdccic.gdof import gamma_star, gdof_closed_form, maxmin_batch
from hdccic.lda import LDA_TEST_POINTS, LdaConfig, lda_normalized_sumrate, lda_scheme_for, lda_simulate


def report(capsys, name, ok, detail):
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def audits():
    out, t0 = {}, time.perf_counter()
    for top in Topology:
        out[top] = theorem_gap_audit(top, raise_on_violation=False)
    return out, time.perf_counter() - t0


def test_c1_closed_form_vs_oracle(capsys):
    t0 = time.perf_counter()
    alphas = np.round(np.arange(401) * 0.01, 10)
    betas = np.round(np.arange(601) * 0.01, 10)
    A, B = np.meshgrid(alphas, betas, indexing="ij")
    worst = 0.0
    for top in Topology:
        oracle, _ = maxmin_batch(A.ravel(), B.ravel(), top)
        closed = np.array([
            float(gdof_closed_form(ExponentPoint(float(a), float(b), top)).d)
            for a, b in zip(A.ravel(), B.ravel())
        ])
        worst = max(worst, float(np.max(np.abs(closed - oracle))))
    dt = time.perf_counter() - t0
    report(capsys, "C1 closed form vs max-min oracle",
           worst <= 1e-9 and dt < 60, f"max |diff| = {worst:.2e} over 3x401x601 points in {dt:.1f} s")


def test_c2_theorem_gap_constants(capsys, audits):
    reports, dt = audits
    parts, ok = [], dt < 300
    for top, rep in reports.items():
        ok &= rep.passed and rep.min_gap_bits >= 0 and rep.worst_gap_bits <= THEOREM_GAP_BITS[top]
        parts.append(f"{top.value}: {rep.worst_gap_bits:.4f} <= {THEOREM_GAP_BITS[top]} (min {rep.min_gap_bits:.4f})")
    report(capsys, "C2 theorem gap constants", ok, "; ".join(parts) + f"; {dt:.1f} s")


def test_c3_reference_point_gap(capsys):
    recs = reference_sweep((30.0, 80.0), 5.0, optimize=True)
    gaps = [r.gap_bits for r in recs]
    ok = max(gaps) <= 3.0 and min(gaps) <= 2.6
    report(capsys, "C3 gap at reference point (0.55, 2), 30-80 dB", ok,
           f"gap range [{min(gaps):.3f}, {max(gaps):.3f}] bits; need max <= 3.0 and min <= 2.6")


def test_c4_s_channel_zero_gap(capsys):
    alphas = [a for a in np.round(np.arange(0, 81) * 0.05, 10) if a >= 2]
    rep = theorem_gap_audit(Topology.S, alphas, DEFAULT_BETA_GRID, DEFAULT_SNR_GRID, raise_on_violation=False)
    ok = rep.worst_gap_bits <= 1e-9 and rep.min_gap_bits >= -1e-9
    report(capsys, "C4 S-channel alpha >= 2 zero gap", ok,
           f"gap range [{rep.min_gap_bits:.6f}, {rep.worst_gap_bits:.6f}] bits over {rep.n_points} points")


def test_c5_lda_oracle(capsys):
    results = []
    for cfg in LDA_TEST_POINTS:
        scheme = lda_scheme_for(cfg)
        trace = lda_simulate(cfg, scheme, seed=2024)
        rate = lda_normalized_sumrate(trace, cfg, scheme.slots)
        d = gdof_closed_form(ExponentPoint(cfg.alpha, cfg.beta, cfg.topology)).d
        results.append((scheme.scheme_id, rate, d, trace.success))
    spot = {
        LdaConfig(4, 1, 8): F(4, 5),
        LdaConfig(2, 6, 8): F(5, 4),
    }
    spot_ok = all(
        lda_normalized_sumrate(lda_simulate(c, lda_scheme_for(c)), c, lda_scheme_for(c).slots) == v
        for c, v in spot.items()
    )
    ok = spot_ok and all(r == d and s for _, r, d, s in results) and len({r[0] for r in results}) == 6
    detail = ", ".join(f"{sid}={r}" for sid, r, _, _ in results)
    report(capsys, "C5 LDA oracle equalities", ok, detail)


def test_c6_gamma_star(capsys):
    rng = np.random.default_rng(20240601)
    tops = list(Topology)
    worst = 0.0
    for _ in range(1000):
        p = ExponentPoint(float(rng.uniform(0, 4)), float(rng.uniform(0, 6)), tops[rng.integers(3)])
        _, g = maxmin_batch(p.alpha, p.beta, p.topology)
        worst = max(worst, abs(float(gamma_star(p)) - float(g[0])))
    spots = [
        (ExponentPoint(3, 4), 0.25),
        (ExponentPoint(0.25, 2), 0.2),
        (ExponentPoint(1.5, 3, "s"), 0.2),
    ]
    spot_err = max(abs(float(gamma_star(p)) - v) for p, v in spots)
    ok = worst <= 1e-9 and spot_err <= 1e-12
    report(capsys, "C6 gamma* certification", ok,
           f"max |gamma* - argmax| = {worst:.2e} over 1000 points; spot error {spot_err:.1e}")


def test_c7_properties(capsys, audits):
    failures = []
    alphas = np.round(np.arange(0, 81) * 0.05, 10)
    betas = np.round(np.arange(0, 601) * 0.01, 10)
    for top in Topology:
        for a in alphas:
            ds = [gdof_closed_form(ExponentPoint(float(a), float(b), top)) for b in betas]
            d = np.array([float(r.d) for r in ds])
            if np.any(np.diff(d) < -1e-12):
                failures.append(f"monotonicity {top.value} alpha={a}")
            if any(r.d < r.d_nocoop - 1e-12 or r.d > r.d_ideal + 1e-12 for r in ds):
                failures.append(f"sandwich {top.value} alpha={a}")
            lim = gdof_closed_form(ExponentPoint(float(a), 1e6, top))
            if abs(float(lim.d) - float(lim.d_ideal)) > 1e-4:
                failures.append(f"beta->inf {top.value} alpha={a}")

    eps = F(1, 10**9)
    for top in Topology:
        for a0 in (F(1, 2), F(2, 3), F(2)):
            for b in range(0, 601, 5):
                b = F(b, 100)
                left = gdof_closed_form(ExponentPoint(a0 - eps, b, top)).d
                here = gdof_closed_form(ExponentPoint(a0, b, top)).d
                if abs(left - here) > F(1, 10**6):
                    failures.append(f"continuity {top.value} alpha={a0} beta={b}")

    for ai in range(0, 401):
        a = F(ai, 100)
        # at alpha = 0 and alpha = 2 the cooperative term vanishes for every beta
        if F(2, 3) <= a < 2 or a in (0, 2):
            continue
        for bi in range(0, 601, 3):
            b = F(bi, 100)
            r = gdof_closed_form(ExponentPoint(a, b))
            gain = float(r.d) > float(r.d_nocoop) + 1e-12
            if gain != (b > 2 * F(r.d_nocoop)):
                failures.append(f"threshold alpha={a} beta={b}")

    reports, _ = audits
    for top, rep in reports.items():
        if rep.min_gap_bits < -1e-9:
            failures.append(f"inner > outer on {top.value} audit grid")
    for rec in reference_sweep((30.0, 80.0), 10.0, optimize=False):
        if rec.gap_bits < -1e-9:
            failures.append(f"inner > outer on reference sweep at {rec.snr_db} dB")

    report(capsys, "C7 property suite", not failures,
           "all properties hold" if not failures else f"{len(failures)} failures, first: {failures[0]}")
