"""Gap sweeps, theorem-constant audits and gDoF region maps."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .channel import (
    THEOREM_GAP_BITS,
    ChannelGains,
    ExponentPoint,
    Topology,
    classify_regime_exponents,
    classify_regime_gains,
    gains_from_exponents,
    regime,
    regime_count,
)
from .gdof import cooperation_classification, gdof_closed_form
from .inner_bounds import COOPERATIVE_SCHEMES, inner_best, scheme_rates
from .outer_bounds import outer_min_batch

GAP_TOL = 1e-9

DEFAULT_ALPHA_GRID = np.round(np.arange(0, 81) * 0.05, 10)
DEFAULT_BETA_GRID = np.round(np.arange(0, 61) * 0.1, 10)
DEFAULT_SNR_GRID = np.arange(10, 101, 10, dtype=float)

REFERENCE_POINT = ExponentPoint(0.55, 2.0, Topology.SYMMETRIC)

# free parameters searched when optimizing the inner schemes
_GAMMA_GRID = np.round(np.arange(0, 101) * 0.01, 10)
_SPLIT_GRID = np.round(np.arange(0, 21) * 0.05, 10)


class GapViolation(AssertionError):
    pass


@dataclass(frozen=True)
class GapRecord:
    snr_db: float
    ob_bits: float
    ib_bits: float
    gap_bits: float
    regime_index: int
    scheme_id: str


def _split_candidates(scheme_id: str, gains: ChannelGains):
    if scheme_id == "sym_region8":
        for d2, d3 in itertools.product(_SPLIT_GRID, _SPLIT_GRID):
            if d2 + d3 <= 1 + 1e-12:
                yield {"delta2": float(d2), "delta3": float(min(d3, 1 - d2))}
    else:
        yield None  # the scheme's own splits


def optimized_inner(gains: ChannelGains, topology: Topology) -> Tuple[float, str]:
    """Best inner bound with the schemes' free parameters grid-searched.

    Every cooperative layout of the topology is tried (their rates come from
    the decoding constraints, so they are achievable at any gains), over
    gamma in [0, 1] step 0.01 and, for the region-8 layout, the splits
    delta2, delta3 over [0, 1] step 0.05.
    """
    topology = Topology.parse(topology)
    base = inner_best(gains, topology)
    best, best_id = base.sum_bits, base.scheme_id
    for sid in COOPERATIVE_SCHEMES[topology]:
        for splits in _split_candidates(sid, gains):
            for g in _GAMMA_GRID:
                total = sum(scheme_rates(sid, gains, float(g), splits).values())
                if total > best:
                    best, best_id = total, sid + "_opt"
    return best, best_id


def _outer(gains: ChannelGains) -> float:
    value, _ = outer_min_batch(gains.S, gains.C, gains.I_p, gains.I_c)
    return float(value)


def gap_sweep(point: ExponentPoint, snr_range=(0.0, 80.0), step_db: float = 5.0,
              optimize: bool = False) -> List[GapRecord]:
    """Outer-minus-inner gap along an SNR sweep at fixed exponents."""
    lo, hi = float(snr_range[0]), float(snr_range[1])
    if lo > hi:
        raise ValueError("snr_range must satisfy lo <= hi")
    if step_db <= 0:
        raise ValueError("step_db must be positive")
    n = int(np.floor((hi - lo) / step_db + 1e-9))
    records = []
    for k in range(n + 1):
        snr = round(lo + k * step_db, 10)
        gains = gains_from_exponents(point, snr)
        ob = _outer(gains)
        if optimize:
            ib, sid = optimized_inner(gains, point.topology)
        else:
            res = inner_best(gains, point.topology)
            ib, sid = res.sum_bits, res.scheme_id
        gap = ob - ib
        if gap < -GAP_TOL * max(1.0, ob):
            raise GapViolation(f"inner bound exceeds outer bound at {point}, {snr} dB: {ib} > {ob}")
        idx = classify_regime_gains(gains, point.topology).index
        records.append(GapRecord(snr, ob, ib, gap, idx, sid))
    return records


def reference_sweep(snr_range=(30.0, 80.0), step_db: float = 5.0, optimize: bool = True):
    return gap_sweep(REFERENCE_POINT, snr_range, step_db, optimize)


@dataclass
class RegimeGapSummary:
    index: int
    label: str
    max_gap_bits: float
    constant_bits: float
    fd_cited: bool
    n_points: int

    @property
    def within_constant(self) -> bool:
        return self.max_gap_bits <= self.constant_bits + GAP_TOL


@dataclass
class GapAuditReport:
    topology: Topology
    theorem_bits: float
    n_points: int
    worst_gap_bits: float
    worst_location: Tuple[float, float, float]
    min_gap_bits: float
    per_regime: Dict[int, RegimeGapSummary] = field(default_factory=dict)
    violations: List[Tuple[float, float, float, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary_lines(self) -> List[str]:
        a, b, s = self.worst_location
        lines = [
            f"topology={self.topology.value} points={self.n_points}",
            f"worst gap {self.worst_gap_bits:.4f} bits at alpha={a}, beta={b}, snr_db={s}",
            f"worst gap {'<=' if self.passed else '>'} {self.theorem_bits}",
        ]
        for idx, r in sorted(self.per_regime.items()):
            tag = " (FD-cited, not enforced)" if r.fd_cited else ""
            ok = "within" if r.within_constant else "exceeds"
            lines.append(
                f"  region {idx} [{r.label}]: max {r.max_gap_bits:.4f} vs {r.constant_bits} {ok}{tag}"
            )
        return lines


def theorem_gap_audit(topology: Topology, alpha_grid=None, beta_grid=None, snr_grid=None,
                      raise_on_violation: bool = True) -> GapAuditReport:
    """Check ``0 <= gap <= theorem constant`` at every grid point.

    Regimes are classified from the gains.  Per-regime maxima are compared
    with the per-regime constants for information only.
    """
    topology = Topology.parse(topology)
    alphas = DEFAULT_ALPHA_GRID if alpha_grid is None else np.asarray(alpha_grid, dtype=float)
    betas = DEFAULT_BETA_GRID if beta_grid is None else np.asarray(beta_grid, dtype=float)
    snrs = DEFAULT_SNR_GRID if snr_grid is None else np.asarray(snr_grid, dtype=float)
    limit = THEOREM_GAP_BITS[topology]

    tuples, gains_list = [], []
    for a, b, s in itertools.product(alphas, betas, snrs):
        point = ExponentPoint(float(a), float(b), topology)
        tuples.append((float(a), float(b), float(s)))
        gains_list.append(gains_from_exponents(point, float(s)))
    S = np.array([g.S for g in gains_list])
    C = np.array([g.C for g in gains_list])
    Ip = np.array([g.I_p for g in gains_list])
    Ic = np.array([g.I_c for g in gains_list])
    ob, _ = outer_min_batch(S, C, Ip, Ic)

    per: Dict[int, List[float]] = {}
    violations = []
    gaps = np.empty(len(gains_list))
    for k, g in enumerate(gains_list):
        gap = float(ob[k]) - inner_best(g, topology).sum_bits
        gaps[k] = gap
        idx = classify_regime_gains(g, topology).index
        per.setdefault(idx, []).append(gap)
        if gap < -GAP_TOL * max(1.0, float(ob[k])) or gap > limit + GAP_TOL:
            violations.append(tuples[k] + (gap,))

    k_worst = int(np.argmax(gaps)) if len(gaps) else 0
    report = GapAuditReport(
        topology=topology,
        theorem_bits=limit,
        n_points=len(gaps),
        worst_gap_bits=float(gaps[k_worst]) if len(gaps) else 0.0,
        worst_location=tuples[k_worst] if tuples else (0.0, 0.0, 0.0),
        min_gap_bits=float(gaps.min()) if len(gaps) else 0.0,
        violations=violations,
    )
    for idx, vals in per.items():
        reg = regime(topology, idx)
        report.per_regime[idx] = RegimeGapSummary(
            idx, reg.label, max(vals), reg.gap_constant_bits, reg.fd_cited, len(vals)
        )
    if violations and raise_on_violation:
        a, b, s, gap = violations[0]
        raise GapViolation(
            f"{topology.value}: gap {gap} outside [0, {limit}] at alpha={a}, beta={b}, snr_db={s}"
        )
    return report


@dataclass(frozen=True)
class RegionCell:
    alpha: float
    beta: float
    region: int
    d: float
    d_nocoop: float
    d_ideal: float
    coop: str


def _axis(rng, step: float) -> np.ndarray:
    lo, hi = float(rng[0]), float(rng[1])
    n = int(np.floor((hi - lo) / step + 1e-9))
    return np.round(lo + np.arange(n + 1) * step, 10)


def region_map(topology: Topology, alpha_range=(0.0, 4.0), beta_range=(0.0, 6.0),
               step: float = 0.01) -> List[RegionCell]:
    """Row-major (alpha outer, beta inner) map of regions and gDoF."""
    if step <= 0:
        raise ValueError("step must be positive")
    topology = Topology.parse(topology)
    cells = []
    for a in _axis(alpha_range, step):
        for b in _axis(beta_range, step):
            point = ExponentPoint(float(a), float(b), topology)
            res = gdof_closed_form(point)
            cells.append(RegionCell(
                alpha=float(a),
                beta=float(b),
                region=classify_regime_exponents(point).index,
                d=float(res.d),
                d_nocoop=float(res.d_nocoop),
                d_ideal=float(res.d_ideal),
                coop=str(cooperation_classification(point)),
            ))
    return cells


def regions_present(cells: Sequence[RegionCell]) -> List[int]:
    return sorted({c.region for c in cells})


def expected_region_count(topology: Topology) -> int:
    return regime_count(topology)
