"""Generalized degrees of freedom of the half-duplex causal cognitive IC.

The closed forms accept ``float`` or ``fractions.Fraction`` exponents; with
fractions every result is an exact rational, which the LDA oracle relies on.
``maxmin_batch`` is the independent brute-force route: the max over the
listening fraction of the min of the affine outer-bound exponents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .channel import HALF, TWO_THIRDS, ExponentPoint, Topology


def _pos(x):
    return x if x > 0 else 0


def _ratio(num, den):
    # [.]^+ numerators vanish wherever the denominator can
    if num == 0:
        return 0
    return num / den


@dataclass(frozen=True)
class GdofResult:
    d: float
    gamma_star: float
    active_branch: str
    d_nocoop: float
    d_ideal: float


def gdof_nocoop(alpha, topology: Topology):
    topology = Topology.parse(topology)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    weak_strong = max(1 - alpha / 2, alpha / 2)
    if topology is Topology.SYMMETRIC:
        return min(1, max(1 - alpha, alpha), weak_strong)
    return min(1, weak_strong)


def gdof_ideal(alpha, topology: Topology):
    topology = Topology.parse(topology)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if topology is Topology.S:
        return 1
    return max(1 - alpha / 2, alpha / 2)


def _closed_form(alpha, beta, topology: Topology):
    """Return ``(d, branch)`` from the piecewise closed forms."""
    a, b = alpha, beta
    if topology is Topology.SYMMETRIC:
        if a < HALF:
            return 1 - a + _ratio(_pos(b - 2 + 2 * a) * a, b + a - 1) / 2, "very_weak"
        if a < TWO_THIRDS:
            return a + _ratio(_pos(b - 2 * a) * (2 - 3 * a), b - 3 * a + 1) / 2, "weak"
        if a < 2:
            return max(1 - a / 2, a / 2), "moderate_strong"
        return 1 + _ratio(_pos(b - 2) * (a - 2), b + a - 3) / 2, "very_strong"
    if topology is Topology.Z:
        if a < 2:
            return max(1 - a / 2, a / 2), "weak_strong"
        return 1 + _ratio(_pos(b - 2) * (a - 2), b + a - 3) / 2, "very_strong"
    if a < 1:
        return 1 - a / 2 + _ratio(a * _pos(a + b - 2), b + a - 1) / 2, "weak"
    if a < 2:
        return a / 2 + _ratio((2 - a) * _pos(b - a), b - a + 1) / 2, "strong"
    return 1, "very_strong"


def gamma_star(point: ExponentPoint):
    """High-SNR optimal listening fraction; 0 whenever cooperation is useless."""
    a, b = point.alpha, point.beta
    top = point.topology
    if top is Topology.SYMMETRIC:
        if a < TWO_THIRDS:
            if b > 2 * gdof_nocoop(a, top):
                m = min(2 - 3 * a, a)
                return m / (m + b - 1)
            return 0
        if a < 2:
            return 0
        return (a - 2) / (b + a - 3) if b > 2 else 0
    if top is Topology.Z:
        if a >= 2 and b > 2:
            return (a - 2) / (b + a - 3)
        return 0
    if a < 1:
        return a / (b + a - 1) if b > 2 - a else 0
    if a < 2:
        return (2 - a) / (b - a + 1) if b > a else 0
    return 0


def gdof_closed_form(point: ExponentPoint) -> GdofResult:
    d, branch = _closed_form(point.alpha, point.beta, point.topology)
    return GdofResult(
        d=d,
        gamma_star=gamma_star(point),
        active_branch=branch,
        d_nocoop=gdof_nocoop(point.alpha, point.topology),
        d_ideal=gdof_ideal(point.alpha, point.topology),
    )


def _bound_lines(alpha: np.ndarray, beta: np.ndarray, topology: Topology):
    """Intercepts and slopes (in gamma) of the outer-bound gDoF terms.

    Returns two arrays of shape ``(n_points, n_terms)``; the sum-gDoF is
    half the max over gamma of the min over terms.
    """
    one = np.ones_like(alpha)
    dt0 = np.maximum(1.0, alpha) + np.maximum(0.0, 1.0 - alpha)
    if topology is Topology.SYMMETRIC:
        pv0 = 2.0 * np.maximum(alpha, 1.0 - alpha)
        a = np.stack([2.0 * one, dt0, pv0], axis=1)
        b = np.stack(
            [np.maximum(1.0, beta) - 2.0, 1.0 - dt0, np.maximum(np.maximum(alpha, beta), 1.0) - pv0],
            axis=1,
        )
    elif topology is Topology.Z:
        a = np.stack([2.0 * one, dt0], axis=1)
        b = np.stack([np.maximum(1.0, beta) - 2.0, 1.0 - dt0], axis=1)
    else:
        a = np.stack([2.0 * one, dt0], axis=1)
        b = np.stack([-one, np.maximum(np.maximum(beta, alpha), 1.0) - dt0], axis=1)
    return a, b


def maxmin_batch(alpha, beta, topology: Topology, gamma_grid_step: float = 0.01,
                 chunk: int = 20000, tie_tol: float = 1e-12):
    """Vectorized max-min oracle.

    Grid search over gamma, then exact refinement: the objective is a concave
    piecewise-affine function, so its maximizer lies within one grid step of
    the grid argmax and at a breakpoint (pairwise line intersection) or at a
    bracket end.  Ties resolve to the smallest gamma.

    Returns:
        ``(d, gamma)`` arrays, ``d`` being half the refined max-min and
        ``gamma`` its smallest maximizer.
    """
    if not 0 < gamma_grid_step <= 0.01:
        raise ValueError("gamma_grid_step must lie in (0, 0.01]")
    topology = Topology.parse(topology)
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    alpha, beta = np.broadcast_arrays(alpha, beta)
    shape = alpha.shape
    alpha, beta = alpha.ravel(), beta.ravel()

    n_steps = int(round(1.0 / gamma_grid_step))
    grid = np.linspace(0.0, 1.0, n_steps + 1)
    h = 1.0 / n_steps

    d_out = np.empty(alpha.size)
    g_out = np.empty(alpha.size)
    for start in range(0, alpha.size, chunk):
        sl = slice(start, start + chunk)
        a, b = _bound_lines(alpha[sl], beta[sl], topology)
        values = (a[:, :, None] + b[:, :, None] * grid[None, None, :]).min(axis=1)
        k = values.argmax(axis=1)
        lo = np.clip(grid[k] - h, 0.0, 1.0)
        hi = np.clip(grid[k] + h, 0.0, 1.0)

        cands = [lo, hi, grid[k]]
        m = a.shape[1]
        for i in range(m):
            for j in range(i + 1, m):
                db = b[:, i] - b[:, j]
                with np.errstate(divide="ignore", invalid="ignore"):
                    g = (a[:, j] - a[:, i]) / db
                g = np.where(np.isfinite(g) & (db != 0), g, lo)
                cands.append(np.clip(g, lo, hi))
        cands = np.stack(cands, axis=1)
        f = (a[:, :, None] + b[:, :, None] * cands[:, None, :]).min(axis=1)
        best = f.max(axis=1)
        # smallest gamma among (numerically) tied maximizers
        masked = np.where(f >= best[:, None] - tie_tol, cands, np.inf)
        d_out[sl] = best / 2.0
        g_out[sl] = masked.min(axis=1)
    return d_out.reshape(shape), g_out.reshape(shape)


def gdof_maxmin(point: ExponentPoint, gamma_grid_step: float = 0.01) -> float:
    d, _ = maxmin_batch(point.alpha, point.beta, point.topology, gamma_grid_step)
    return float(d[0])


def gdof_maxmin_argmax(point: ExponentPoint, gamma_grid_step: float = 0.01) -> float:
    _, g = maxmin_batch(point.alpha, point.beta, point.topology, gamma_grid_step)
    return float(g[0])


def _close(x, y, tol):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x == y
    return abs(x - y) <= tol


@dataclass(frozen=True)
class CooperationClass:
    label: str  # "useless" or "strict_gain"
    ideal_attained: bool

    def __str__(self) -> str:
        return self.label + ("+ideal" if self.ideal_attained else "")


def cooperation_classification(point: ExponentPoint, tol: float = 1e-12) -> CooperationClass:
    res = gdof_closed_form(point)
    useless = _close(res.d, res.d_nocoop, tol)
    return CooperationClass(
        label="useless" if useless else "strict_gain",
        ideal_attained=_close(res.d, res.d_ideal, tol),
    )
