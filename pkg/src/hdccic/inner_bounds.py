"""Achievable sum-rates: two-phase cooperative schemes and non-cooperative fallbacks.

Every cooperative scheme shares Phase 1 (CTx listens, PTx superposes b1 over
b2) and differs in Phase 2.  Two routes are provided for each scheme:

* the closed-form sum-rate with the finite-SNR listening fraction
  ``gamma' = x / (log(1 + C/(1+S)) + x)`` and the fixed power splits, and
* ``scheme_rates``, which rebuilds every successive-decoding constraint from
  the superposition layout for arbitrary ``gamma`` and power splits.

The closed forms are checked against the constraint route on construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence

from .channel import ChannelGains, Topology

log2 = math.log2

_CHECK_TOL = 1e-9


class RegimeError(ValueError):
    """Gains fall outside the regime a scheme was designed for."""


@dataclass(frozen=True)
class InnerBoundEval:
    scheme_id: str
    gamma_prime: float
    x_aux: float
    component_rates: Dict[str, float]
    sum_bits: float
    power_splits: Dict[str, float] = field(default_factory=dict)


def sic_rates(powers: Mapping[str, float], order: Sequence[str],
              dpc: Mapping[str, Iterable[str]] | None = None) -> Dict[str, float]:
    """Rate constraints at one receiver under successive decoding.

    Args:
        powers: received power of each codeword (noise power is one).
        order: decoding order; codewords not listed are treated as noise.
        dpc: for a codeword, the interferers it is dirty-paper coded against;
            they do not count as noise when that codeword is decoded.

    Returns:
        Mapping codeword -> max rate (bits/use) it can carry for this receiver.
    """
    dpc = dpc or {}
    pending = set(powers)
    out = {}
    for name in order:
        pending.discard(name)
        skip = set(dpc.get(name, ()))
        noise = 1.0 + sum(powers[j] for j in pending if j not in skip)
        out[name] = log2(1.0 + powers[name] / noise)
    return out


def phase1_constraints(gains: ChannelGains, eta: float | None = None):
    """Per-unit-time Phase-1 constraints ``(b1_at_PRx, b1_at_CTx, b2_at_CTx)``."""
    S, C = gains.S, gains.C
    if eta is None:
        eta = 1.0 / (1.0 + S)
    prx = sic_rates({"b1": S * (1 - eta), "b2": S * eta}, ["b1"])
    ctx = sic_rates({"b1": C * (1 - eta), "b2": C * eta}, ["b1", "b2"])
    return prx["b1"], ctx["b1"], ctx["b2"]


def phase1_rates(gains: ChannelGains, gamma: float):
    """``(R_b1, R_b2)`` delivered in a Phase 1 of length ``gamma``."""
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    if gains.C < gains.S:
        raise RegimeError("Phase 1 needs C >= S for CTx to decode b1 and b2")
    S, C = gains.S, gains.C
    r_b1 = gamma * (log2(1 + S) - log2(1 + S / (1 + S)))
    r_b2 = gamma * log2(1 + C / (1 + S))
    return r_b1, r_b2


def gamma_prime(gains: ChannelGains, x: float) -> float:
    """Listening fraction that matches the b2 rate across the two phases."""
    den = log2(1 + gains.C / (1 + gains.S)) + x
    return x / den if den > 0 else 0.0


# -- superposition layouts -------------------------------------------------

# Codewords each receiver must recover in Phase 2 (PRx: PTx's bits, CRx: CTx's).
_INTENDED = {"prx": {"b2", "b3c", "b3p"}, "crx": {"b4c", "b4p"}}

DEFAULT_SPLITS = {
    "sym_region3": lambda g: {"eta": 1.0 / (1.0 + g.S)},
    "sym_region8": lambda g: {"delta2": g.S / (1.0 + g.I_c) ** 2, "delta3": 1.0 / (1.0 + g.I_c)},
    "sym_region10": lambda g: {"delta": 1.0 / (1.0 + g.I_c)},
    "s_region4": lambda g: {"delta": g.S / (1.0 + g.I_p)},
    "s_region5": lambda g: {"delta": 1.0 / (1.0 + g.I_p)},
}


def _phase2_layout(scheme_id: str, gains: ChannelGains, splits: Mapping[str, float]):
    """Received powers, decoding order and DPC pairs at PRx and CRx."""
    S, Ip, Ic = gains.S, gains.I_p, gains.I_c
    if scheme_id == "sym_region3":
        eta = splits["eta"]
        ptx = {"b3c": 1.0}
        ctx = {"b2": eta, "b4c": 1.0 - eta}
        prx_order, crx_order, dpc = ["b4c", "b2", "b3c"], ["b3c", "b4c"], {}
    elif scheme_id == "sym_region8":
        d2, d3 = splits["delta2"], splits["delta3"]
        ptx = {"b3c": 1.0 - d2 - d3, "b2": d2, "b3p": d3}
        ctx = {"b4p": d3, "b4c": 1.0 - d3}
        prx_order, crx_order = ["b3c", "b2", "b4c", "b3p"], ["b4c", "b3c", "b4p"]
        dpc = {"b4p": {"b2"}}
    elif scheme_id in ("sym_region10", "s_region5"):
        d = splits["delta"]
        ptx = {"b2": 1.0 - d, "b3p": d}
        ctx = {"b4p": 1.0}
        prx_order, crx_order, dpc = ["b2", "b3p"], ["b4p"], {"b4p": {"b2"}}
    elif scheme_id == "s_region4":
        d = splits["delta"]
        ptx = {"b3c": 1.0 - d, "b2": d}
        ctx = {"b4p": 1.0}
        prx_order, crx_order, dpc = ["b3c", "b2"], ["b3c", "b4p"], {"b4p": {"b2"}}
    else:
        raise KeyError(f"unknown scheme {scheme_id!r}")
    if min(list(ptx.values()) + list(ctx.values())) < -1e-15:
        raise ValueError(f"negative power split for {scheme_id}: {dict(splits)}")

    prx = {k: S * v for k, v in ptx.items()}
    prx.update({k: Ic * v for k, v in ctx.items()})
    crx = {k: Ip * v for k, v in ptx.items()}
    crx.update({k: S * v for k, v in ctx.items()})

    def keep(order, powers, rx):
        # an unintended codeword that never reaches a receiver needs no decoding there
        return [k for k in order if k in _INTENDED[rx] or powers.get(k, 0.0) > 0]

    return (prx, keep(prx_order, prx, "prx")), (crx, keep(crx_order, crx, "crx")), dpc


def phase2_constraints(scheme_id: str, gains: ChannelGains,
                       splits: Mapping[str, float] | None = None):
    """Per-receiver Phase-2 constraints (per unit time) for a scheme."""
    if splits is None:
        splits = DEFAULT_SPLITS[scheme_id](gains)
    (prx_p, prx_o), (crx_p, crx_o), dpc = _phase2_layout(scheme_id, gains, splits)
    return {"prx": sic_rates(prx_p, prx_o, dpc), "crx": sic_rates(crx_p, crx_o, dpc)}


def scheme_rates(scheme_id: str, gains: ChannelGains, gamma: float,
                 splits: Mapping[str, float] | None = None,
                 eta: float | None = None) -> Dict[str, float]:
    """Achievable per-codeword rates for any gamma and power splits.

    Each codeword gets the min over every receiver that decodes it; b2 gets
    the min of what CTx learns in Phase 1 and what PRx decodes in Phase 2.
    """
    if not 0 <= gamma <= 1:
        raise ValueError("gamma must lie in [0, 1]")
    b1_prx, b1_ctx, b2_ctx = phase1_constraints(gains, eta)
    p2 = phase2_constraints(scheme_id, gains, splits)
    codewords = set(p2["prx"]) | set(p2["crx"])
    rates = {"b1": gamma * min(b1_prx, b1_ctx)}
    for k in sorted(codewords):
        per_rx = [p2[rx][k] for rx in ("prx", "crx") if k in p2[rx]]
        r = (1 - gamma) * min(per_rx)
        if k == "b2":
            r = min(gamma * b2_ctx, r)
        rates[k] = r
    return rates


def _check_against_constraints(res: InnerBoundEval, gains: ChannelGains) -> InnerBoundEval:
    limits = scheme_rates(res.scheme_id, gains, res.gamma_prime, res.power_splits)
    for k, r in res.component_rates.items():
        if r < -_CHECK_TOL or r > limits[k] + _CHECK_TOL * max(1.0, abs(limits[k])):
            raise AssertionError(
                f"{res.scheme_id}: closed-form rate of {k} ({r}) exceeds its "
                f"decoding constraint ({limits[k]})"
            )
    total = sum(res.component_rates.values())
    if abs(total - res.sum_bits) > _CHECK_TOL * max(1.0, abs(total)):
        raise AssertionError(f"{res.scheme_id}: components do not add up to the sum-rate")
    return res


def _phase1_part(gains: ChannelGains, gp: float):
    r_b1, r_b2 = phase1_rates(gains, gp)
    return {"b1": r_b1, "b2": r_b2}


# -- closed-form schemes ---------------------------------------------------

def inner_sym_region3(gains: ChannelGains) -> InnerBoundEval:
    """Very strong interference with strong cooperation (also the Z-channel)."""
    S, C, I = gains.S, gains.C, gains.I_c
    if not (I >= S * (1 + S) and C > S * (S + 1)):
        raise RegimeError("needs I >= S(1+S) and C > S(S+1)")
    if gains.I_p != 0 and gains.I_p < S * (1 + S):
        raise RegimeError("CRx must decode b3c: needs I_p == 0 or I_p >= S(1+S)")
    x = log2(1 + I / (1 + S) ** 2)
    gp = gamma_prime(gains, x)
    rates = _phase1_part(gains, gp)
    rates["b3c"] = (1 - gp) * log2(1 + S)
    rates["b4c"] = (1 - gp) * (log2(1 + S) - log2(1 + S / (1 + S)))
    total = (gp * log2(1 + S) - log2(1 + S / (1 + S)) + gp * log2(1 + C / (1 + S))
             + 2 * (1 - gp) * log2(1 + S))
    res = InnerBoundEval("sym_region3", gp, x, rates, total, DEFAULT_SPLITS["sym_region3"](gains))
    return _check_against_constraints(res, gains)


def inner_sym_region8(gains: ChannelGains) -> InnerBoundEval:
    gains.check_topology(Topology.SYMMETRIC)
    S, C, I = gains.S, gains.C, gains.I_c
    if not (S * (S + 1) > I * (I + 1) ** 2 and S <= I * (1 + I) and C > I * I):
        raise RegimeError("needs S(S+1) > I(I+1)^2, S <= I(1+I) and C > I^2")
    if C <= S:
        raise RegimeError("Phase 1 needs C > S")
    splits = DEFAULT_SPLITS["sym_region8"](gains)
    delta1 = 1 - splits["delta2"] - splits["delta3"]
    assert delta1 >= -1e-12, "delta1 < 0 inside region 8"
    splits["delta1"] = max(delta1, 0.0)
    x = log2(1 + S * S / ((1 + I) ** 3 + S + S * I))
    gp = gamma_prime(gains, x)
    mid = log2(1 + I + S / (1 + I))
    low = log2(1 + S / (1 + I) + I / (1 + I))
    floor = log2(1 + I / (1 + I))
    crx_b3c = log2(1 + (S * I + I + I * I) / (1 + I) ** 2 + S / (1 + I))
    rates = _phase1_part(gains, gp)
    rates["b3c"] = (1 - gp) * (mid - crx_b3c)
    rates["b4c"] = (1 - gp) * (mid - low)
    rates["b3p"] = (1 - gp) * (low - floor)
    rates["b4p"] = (1 - gp) * (low - floor)
    total = (gp * log2(1 + S) - gp * log2(1 + S / (1 + S)) + gp * log2(1 + C / (1 + S))
             + 2 * (1 - gp) * mid
             - (1 - gp) * (2 * floor - low)
             - (1 - gp) * crx_b3c)
    res = InnerBoundEval("sym_region8", gp, x, rates, total, splits)
    return _check_against_constraints(res, gains)


def inner_sym_region10(gains: ChannelGains) -> InnerBoundEval:
    gains.check_topology(Topology.SYMMETRIC)
    S, C, I = gains.S, gains.C, gains.I_c
    if I <= 0:
        raise RegimeError("needs I > 0; use the non-cooperative scheme")
    if not (I * (1 + I) < S and C > S * S / (I * I)):
        raise RegimeError("needs I(1+I) < S and C > S^2/I^2")
    x = log2(1 + S * I / ((1 + I) ** 2 + S))
    gp = gamma_prime(gains, x)
    rates = _phase1_part(gains, gp)
    rates["b3p"] = (1 - gp) * (log2(1 + I + S / (1 + I)) - log2(1 + I))
    rates["b4p"] = (1 - gp) * (log2(1 + S + I / (1 + I)) - log2(1 + I / (1 + I)))
    total = (gp * log2(1 + S) - gp * log2(1 + S / (1 + S)) + gp * log2(1 + C / (1 + S))
             - (1 - gp) * log2(1 + I)
             + (1 - gp) * log2(1 + I + S / (1 + I))
             - (1 - gp) * log2(1 + I / (1 + I))
             + (1 - gp) * log2(1 + I / (1 + I) + S))
    res = InnerBoundEval("sym_region10", gp, x, rates, total, DEFAULT_SPLITS["sym_region10"](gains))
    return _check_against_constraints(res, gains)


def inner_s_region4(gains: ChannelGains) -> InnerBoundEval:
    gains.check_topology(Topology.S)
    S, C, I = gains.S, gains.C, gains.I_p
    if not (S <= I < S * (S + 1) and C > I):
        raise RegimeError("needs S <= I < S(S+1) and C > I")
    x = log2(1 + S * S / (1 + I))
    gp = gamma_prime(gains, x)
    rates = _phase1_part(gains, gp)
    rates["b3c"] = (1 - gp) * (log2(1 + S + I) - log2(1 + S * I / (1 + I) + S))
    rates["b4p"] = (1 - gp) * log2(1 + S)
    total = (log2(1 + S) - gp * log2(1 + S / (1 + S)) + gp * log2(1 + C / (1 + S))
             + (1 - gp) * log2(1 + S + I)
             - (1 - gp) * log2(1 + S * I / (1 + I) + S))
    res = InnerBoundEval("s_region4", gp, x, rates, total, DEFAULT_SPLITS["s_region4"](gains))
    return _check_against_constraints(res, gains)


def inner_s_region5(gains: ChannelGains) -> InnerBoundEval:
    gains.check_topology(Topology.S)
    S, C, I = gains.S, gains.C, gains.I_p
    if I <= 0:
        raise RegimeError("needs I > 0; use the non-cooperative scheme")
    if not (I < S and C > S * S / I):
        raise RegimeError("needs I < S and C > S^2/I")
    x = log2(1 + S * I / (1 + S + I))
    gp = gamma_prime(gains, x)
    rates = _phase1_part(gains, gp)
    rates["b3p"] = (1 - gp) * log2(1 + S / (1 + I))
    rates["b4p"] = (1 - gp) * (log2(1 + S + I / (1 + I)) - log2(1 + I / (1 + I)))
    total = (gp * log2(1 + S) - gp * log2(1 + S / (1 + S)) + gp * log2(1 + C / (1 + S))
             + (1 - gp) * log2(1 + S / (1 + I))
             + (1 - gp) * log2(1 + S + I / (1 + I))
             - (1 - gp) * log2(1 + I / (1 + I)))
    res = InnerBoundEval("s_region5", gp, x, rates, total, DEFAULT_SPLITS["s_region5"](gains))
    return _check_against_constraints(res, gains)


# -- non-cooperative schemes -----------------------------------------------

def _nocoop_candidates(gains: ChannelGains, topology: Topology) -> Dict[str, Dict[str, float]]:
    """Standard non-cooperative sum-rates (gamma = 0), keyed by strategy."""
    S = gains.S
    I = gains.interference(topology)
    out = {}
    decode_own = min(log2(1 + S), log2(1 + I))
    if topology is Topology.SYMMETRIC:
        tin = log2(1 + S / (1 + I))
        out["nocoop_tin"] = {"b3p": tin, "b4p": tin}
        # both receivers decode both messages
        joint = min(log2(1 + S + I) / 2, log2(1 + S), log2(1 + I))
        out["nocoop_decode"] = {"b3c": joint, "b4c": joint}
        if I >= 1:
            # common/private split with the private part received at noise level
            a = log2(1 + S / (2 * I))
            g = log2(1 + (S + I - 1) / 2)
            e = log2(1 + (S / I + I - 1) / 2)
            hk = min(a + g, 2 * e, 2 * log2(1 + S / 2)) / 2
            out["nocoop_hk"] = {"b3": hk, "b4": hk}
    else:
        # the interfered receiver is PRx for the Z-channel and CRx for the S-channel
        victim, clean = ("b3", "b4") if topology is Topology.Z else ("b4", "b3")
        out["nocoop_tin"] = {clean + "p": log2(1 + S), victim + "p": log2(1 + S / (1 + I))}
        other = min(log2(1 + S), log2(1 + S + I) - log2(1 + S) + log2(1 + S), decode_own)
        own = min(log2(1 + S), log2(1 + S + I) - other)
        out["nocoop_decode"] = {clean + "c": other, victim + "p": own}
    return out


def inner_nocoop(gains: ChannelGains, topology: Topology) -> InnerBoundEval:
    """Best of the standard non-cooperative strategies (CTx never listens)."""
    topology = Topology.parse(topology)
    gains.check_topology(topology)
    cands = _nocoop_candidates(gains, topology)
    name, rates = max(cands.items(), key=lambda kv: sum(kv[1].values()))
    rates = {k: max(v, 0.0) for k, v in rates.items()}
    return InnerBoundEval(name, 0.0, 0.0, rates, sum(rates.values()), {})


COOPERATIVE_SCHEMES = {
    Topology.SYMMETRIC: {
        "sym_region3": inner_sym_region3,
        "sym_region8": inner_sym_region8,
        "sym_region10": inner_sym_region10,
    },
    Topology.Z: {"sym_region3": inner_sym_region3},
    Topology.S: {"s_region4": inner_s_region4, "s_region5": inner_s_region5},
}


def admissible_schemes(gains: ChannelGains, topology: Topology):
    """Closed-form cooperative schemes whose regime preconditions hold."""
    topology = Topology.parse(topology)
    out = []
    for fn in COOPERATIVE_SCHEMES[topology].values():
        try:
            out.append(fn(gains))
        except RegimeError:
            continue
    return out


def inner_best(gains: ChannelGains, topology: Topology) -> InnerBoundEval:
    topology = Topology.parse(topology)
    best = inner_nocoop(gains, topology)
    for res in admissible_schemes(gains, topology):
        if res.sum_bits > best.sum_bits:
            best = res
    return best
