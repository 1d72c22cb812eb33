"""Sum-rate outer bounds (cut-set, DT and PV type) for the half-duplex channel.

All rates are in bits per channel use.  Each bound takes the listening
fraction ``gamma`` either as a float or as a numpy array (evaluated
elementwise), which keeps the gamma search vectorized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelGains

CS_CONST = 2.507
DT_CONST_FIRST = 3.0
DT_CONST_SECOND = 2.0
PV_CONST = 3.5048

GAMMA_GRID_STEP = 1e-3
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _as_output(value, gamma):
    return float(value) if np.ndim(gamma) == 0 else value


def _check_gamma(gamma):
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0) or np.any(g > 1):
        raise ValueError("gamma must lie in [0, 1]")
    return g


def bound_cs(gains: ChannelGains, gamma):
    g = _check_gamma(gamma)
    S, C, Ip, Ic = gains.S, gains.C, gains.I_p, gains.I_c
    first = g * math.log2(1 + S + C) + 2 * (1 - g) * math.log2(1 + S)
    coherent = (
        1
        + (math.sqrt(S) + math.sqrt(Ic)) ** 2
        + (math.sqrt(S) + math.sqrt(Ip)) ** 2
        + (S + math.sqrt(Ip * Ic)) ** 2
    )
    second = g * math.log2(1 + S + Ip) + (1 - g) * math.log2(coherent)
    return _as_output(CS_CONST + np.minimum(first, second), gamma)


def _dt_ratio(I: float, S: float) -> float:
    # max{I,S}/I is undefined at I = 0; fall back to its precursor (1+S)/(1+I)
    if I == 0:
        return 1.0 + S
    return max(I, S) / I


def bound_dt(gains: ChannelGains, gamma):
    g = _check_gamma(gamma)
    S, C, Ip, Ic = gains.S, gains.C, gains.I_p, gains.I_c
    first = (
        DT_CONST_FIRST
        + g * math.log2(1 + S)
        + (1 - g) * math.log2(_dt_ratio(Ic, S) * (1 + (math.sqrt(S) + math.sqrt(Ic)) ** 2))
    )
    second = (
        DT_CONST_SECOND
        + g * math.log2(1 + C + max(Ip, S))
        + (1 - g) * math.log2(_dt_ratio(Ip, S) * (1 + (math.sqrt(S) + math.sqrt(Ip)) ** 2))
    )
    return _as_output(np.minimum(first, second), gamma)


def _pv_ratio(S: float, I: float) -> float:
    if I == 0:
        return math.inf if S > 0 else 0.0
    return S / I


def bound_pv(gains: ChannelGains, gamma):
    """PV-type bound; ``inf`` when a zero interference link makes it vacuous."""
    g = _check_gamma(gamma)
    S, C, Ip, Ic = gains.S, gains.C, gains.I_p, gains.I_c
    r_c, r_p = _pv_ratio(S, Ic), _pv_ratio(S, Ip)
    if math.isinf(r_c) or math.isinf(r_p):
        return _as_output(np.full_like(g, math.inf), gamma)
    value = (
        PV_CONST
        + g * math.log2(1 + S + C + Ip)
        + (1 - g) * math.log2(1 + Ip + r_c)
        + (1 - g) * math.log2(1 + Ic + r_p)
    )
    return _as_output(value, gamma)


@dataclass(frozen=True)
class OuterBoundEval:
    cs_bits: float
    dt_bits: float
    pv_bits: float
    min_bits: float
    gamma: float


def _min_bound(gains: ChannelGains, gamma):
    return np.minimum(np.minimum(bound_cs(gains, gamma), bound_dt(gains, gamma)),
                      bound_pv(gains, gamma))


def _golden_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def bound_lines(S, C, Ip, Ic):
    """Intercepts and slopes in gamma of the five affine pieces of the bounds.

    Accepts scalars or equal-shape arrays of gains and returns two arrays of
    shape ``(..., 5)``; the pointwise min of the pieces is the min of the
    three bounds.  A vacuous PV piece has an infinite intercept.
    """
    S, C, Ip, Ic = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (S, C, Ip, Ic)))
    l2 = np.log2
    sS, sIp, sIc = np.sqrt(S), np.sqrt(Ip), np.sqrt(Ic)
    coherent = 1 + (sS + sIc) ** 2 + (sS + sIp) ** 2 + (S + np.sqrt(Ip * Ic)) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        dt_c = np.where(Ic == 0, 1 + S, np.maximum(Ic, S) / Ic)
        dt_p = np.where(Ip == 0, 1 + S, np.maximum(Ip, S) / Ip)
        pv_c = np.where(Ic == 0, np.where(S > 0, np.inf, 0.0), S / Ic)
        pv_p = np.where(Ip == 0, np.where(S > 0, np.inf, 0.0), S / Ip)
    # (value at gamma = 0, value at gamma = 1) of each piece
    at0 = [
        CS_CONST + 2 * l2(1 + S),
        CS_CONST + l2(coherent),
        DT_CONST_FIRST + l2(dt_c * (1 + (sS + sIc) ** 2)),
        DT_CONST_SECOND + l2(dt_p * (1 + (sS + sIp) ** 2)),
        PV_CONST + l2(1 + Ip + pv_c) + l2(1 + Ic + pv_p),
    ]
    at1 = [
        CS_CONST + l2(1 + S + C),
        CS_CONST + l2(1 + S + Ip),
        DT_CONST_FIRST + l2(1 + S),
        DT_CONST_SECOND + l2(1 + C + np.maximum(Ip, S)),
        PV_CONST + l2(1 + S + C + Ip),
    ]
    a = np.stack(at0, axis=-1)
    b = np.stack(at1, axis=-1)
    with np.errstate(invalid="ignore"):
        slope = np.where(np.isinf(a), 0.0, b - a)
    return a, slope


def _exact_max_lines(a, b):
    """Max over gamma in [0, 1] of min_k (a_k + b_k * gamma), with its argmax.

    The objective is concave piecewise-affine, so the max sits at an endpoint
    or at a pairwise intersection.  Ties go to the smallest gamma.
    """
    m = a.shape[-1]
    cands = [np.zeros(a.shape[:-1]), np.ones(a.shape[:-1])]
    for i in range(m):
        for j in range(i + 1, m):
            db = b[..., i] - b[..., j]
            with np.errstate(divide="ignore", invalid="ignore"):
                g = (a[..., j] - a[..., i]) / db
            ok = np.isfinite(g) & (g >= 0) & (g <= 1)
            cands.append(np.where(ok, g, 0.0))
    cands = np.stack(cands, axis=-1)
    with np.errstate(invalid="ignore"):
        f = (a[..., :, None] + b[..., :, None] * cands[..., None, :]).min(axis=-2)
    best = f.max(axis=-1)
    scale = np.where(np.isfinite(best), np.maximum(1.0, np.abs(best)), 1.0)
    tied = f >= best[..., None] - 1e-12 * scale[..., None]
    gam = np.where(tied, cands, np.inf).min(axis=-1)
    return best, gam


def outer_min_batch(S, C, Ip, Ic):
    """Vectorized ``max_gamma min{CS, DT, PV}``; returns ``(bits, gamma)``."""
    a, b = bound_lines(S, C, Ip, Ic)
    return _exact_max_lines(a, b)


def optimize_gamma(gains: ChannelGains, step: float = GAMMA_GRID_STEP):
    """Maximize the pointwise min of the three bounds over gamma.

    Grid search first, then golden-section refinement on the bracketing
    interval and the exact breakpoints of the piecewise-affine objective;
    a refinement only replaces the grid value when it does better.
    """
    n = int(round(1.0 / step))
    grid = np.linspace(0.0, 1.0, n + 1)
    values = _min_bound(gains, grid)
    k = int(np.argmax(values))
    best_g, best_v = float(grid[k]), float(values[k])
    if not math.isfinite(best_v):
        return best_g, best_v
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, n)]
    g_ref, v_ref = _golden_max(lambda x: float(_min_bound(gains, x)), float(lo), float(hi))
    if v_ref > best_v:
        best_g, best_v = g_ref, v_ref
    _, g_exact = outer_min_batch(gains.S, gains.C, gains.I_p, gains.I_c)
    g_exact = float(g_exact)
    v_exact = float(_min_bound(gains, g_exact))
    if v_exact > best_v:
        best_g, best_v = g_exact, v_exact
    return best_g, best_v


def outer_min(gains: ChannelGains, gamma="optimize") -> OuterBoundEval:
    """Evaluate all three bounds at a fixed gamma, or at the optimizing gamma.

    Args:
        gains: channel gains.
        gamma: a fraction in [0, 1], or ``"optimize"`` (also ``"auto"``/None).
    """
    if gamma is None or (isinstance(gamma, str) and gamma in ("optimize", "auto")):
        g, _ = optimize_gamma(gains)
    else:
        g = float(gamma)
        _check_gamma(g)
    cs, dt, pv = bound_cs(gains, g), bound_dt(gains, g), bound_pv(gains, g)
    return OuterBoundEval(cs_bits=cs, dt_bits=dt, pv_bits=pv, min_bits=min(cs, dt, pv), gamma=g)
