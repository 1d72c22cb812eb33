"""Channel parameterization and regime classification.

Gains are linear received powers (noise normalized to one).  Exponents are the
usual high-SNR parameterization ``S = SNR``, ``C = SNR**beta`` and
``I = SNR**alpha`` on the interference link(s) that exist for a topology.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

HALF = Fraction(1, 2)
TWO_THIRDS = Fraction(2, 3)


class Topology(enum.Enum):
    SYMMETRIC = "sym"
    Z = "z"
    S = "s"

    @classmethod
    def parse(cls, value: "Topology | str") -> "Topology":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise ValueError(f"unknown topology {value!r}")


@dataclass(frozen=True)
class ChannelGains:
    """Linear power gains; direct links share the value ``S``."""

    S: float
    C: float
    I_p: float
    I_c: float

    def __post_init__(self):
        for name in ("S", "C", "I_p", "I_c"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"gain {name} must be finite and >= 0, got {value!r}")

    def interference(self, topology: Topology) -> float:
        """The single interference gain that characterizes ``topology``."""
        if topology is Topology.Z:
            return self.I_c
        if topology is Topology.S:
            return self.I_p
        return self.I_c

    def check_topology(self, topology: Topology) -> None:
        if topology is Topology.Z and self.I_p != 0:
            raise ValueError("Z-channel requires I_p == 0")
        if topology is Topology.S and self.I_c != 0:
            raise ValueError("S-channel requires I_c == 0")
        if topology is Topology.SYMMETRIC and not math.isclose(
            self.I_p, self.I_c, rel_tol=1e-12, abs_tol=0.0
        ):
            raise ValueError("symmetric channel requires I_p == I_c")

    @classmethod
    def symmetric(cls, S: float, I: float, C: float) -> "ChannelGains":
        return cls(S=S, C=C, I_p=I, I_c=I)

    @classmethod
    def for_topology(cls, topology: Topology, S: float, I: float, C: float) -> "ChannelGains":
        topology = Topology.parse(topology)
        if topology is Topology.Z:
            return cls(S=S, C=C, I_p=0.0, I_c=I)
        if topology is Topology.S:
            return cls(S=S, C=C, I_p=I, I_c=0.0)
        return cls.symmetric(S, I, C)


@dataclass(frozen=True)
class ExponentPoint:
    alpha: Real
    beta: Real
    topology: Topology = Topology.SYMMETRIC

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology.parse(self.topology))
        for name in ("alpha", "beta"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}")


@dataclass(frozen=True)
class Regime:
    topology: Topology
    index: int
    label: str
    gap_constant_bits: float
    fd_cited: bool = False


# (label, per-regime gap in bits, gap taken from the full-duplex literature)
_REGIME_TABLE = {
    Topology.SYMMETRIC: {
        1: ("Very Strong Interference 1", 1.0, True),
        2: ("Very Strong Interference 2", 2.507, False),
        3: ("Very Strong Interference 3", 5.0, False),
        4: ("Strong Interference", 1.0, True),
        5: ("Moderately Weak Interference", 3.0, True),
        6: ("Weak Interference 1", 6.32, True),
        7: ("Weak Interference 2", 5.5048, False),
        8: ("Weak Interference 3", 8.5048, False),
        9: ("Weak Interference 4", 7.5048, False),
        10: ("Weak Interference 5", 7.5048, False),
    },
    Topology.Z: {
        1: ("Very Strong Interference 1", 1.0, True),
        2: ("Very Strong Interference 2", 2.507, False),
        3: ("Very Strong Interference 3", 4.507, False),
        4: ("Strong Interference", 1.0, True),
        5: ("Weak Interference", 1.0, True),
    },
    Topology.S: {
        1: ("Very Strong Interference", 0.0, True),
        2: ("Weak Cooperation", 2.0, True),
        3: ("Weak Interference 1", 4.0, False),
        4: ("Strong Interference", 4.0, False),
        5: ("Weak Interference 2", 5.0, False),
    },
}

THEOREM_GAP_BITS = {Topology.SYMMETRIC: 8.5048, Topology.Z: 4.507, Topology.S: 5.0}


def regime(topology: Topology, index: int) -> Regime:
    topology = Topology.parse(topology)
    label, gap, fd = _REGIME_TABLE[topology][index]
    return Regime(topology, index, label, gap, fd)


def regime_count(topology: Topology) -> int:
    return len(_REGIME_TABLE[Topology.parse(topology)])


def snr_from_db(snr_db: float) -> float:
    return 10.0 ** (snr_db / 10.0)


def gains_from_exponents(point: ExponentPoint, snr_db: float) -> ChannelGains:
    """Map ``(alpha, beta)`` at a given SNR to linear gains.

    The link that the topology removes is exactly zero.
    """
    if not math.isfinite(snr_db):
        raise ValueError("snr_db must be finite")
    if point.alpha < 0 or point.beta < 0:
        raise ValueError("exponents must be non-negative")
    snr = snr_from_db(snr_db)
    interference = snr ** float(point.alpha)
    return ChannelGains.for_topology(
        point.topology, S=snr, I=interference, C=snr ** float(point.beta)
    )


def classify_regime_exponents(point: ExponentPoint) -> Regime:
    a, b = point.alpha, point.beta
    top = point.topology
    if top is Topology.SYMMETRIC:
        if a >= 2:
            idx = 1 if b <= 1 else (2 if b <= 2 else 3)
        elif a >= 1:
            idx = 4
        elif a >= TWO_THIRDS:
            idx = 5
        elif a >= HALF:
            idx = 6 if b <= 2 * a - 1 else (7 if b <= 2 * a else 8)
        else:
            idx = 9 if b <= 2 - 2 * a else 10
    elif top is Topology.Z:
        if a >= 2:
            idx = 1 if b <= 1 else (2 if b <= 2 else 3)
        elif a >= 1:
            idx = 4
        else:
            idx = 5
    else:
        if a >= 2:
            idx = 1
        elif b <= max(1, a):
            idx = 2
        elif a >= 1:
            idx = 4
        else:
            idx = 3 if b <= 2 - a else 5
    return regime(top, idx)


def _gt_ratio(x: float, num: float, den: float) -> bool:
    """``x > num/den`` with a zero denominator read as ``+inf``."""
    if den == 0:
        return False
    return x > num / den


def classify_regime_gains(gains: ChannelGains, topology: Topology) -> Regime:
    """Finite-SNR regime from the gain predicates.

    This, not the exponent classifier, decides which achievable scheme is
    admissible at a given set of gains.
    """
    topology = Topology.parse(topology)
    gains.check_topology(topology)
    S, C = gains.S, gains.C
    I = gains.interference(topology)

    if topology is Topology.SYMMETRIC:
        if I == 0:
            idx = 9
        elif I >= S * (1 + S):
            idx = 1 if C <= S else (2 if C <= S * (S + 1) else 3)
        elif I >= S:
            idx = 4
        elif S * (S + 1) <= I * (I + 1) ** 2:
            idx = 5
        elif S <= I * (1 + I):
            if not _gt_ratio(C, I * I, S):
                idx = 6
            elif C <= I * I:
                idx = 7
            else:
                idx = 8
        else:
            idx = 10 if _gt_ratio(C, S * S, I * I) else 9
    elif topology is Topology.Z:
        if I == 0:
            idx = 5
        elif I >= S * (1 + S):
            idx = 1 if C <= S else (2 if C <= S * (S + 1) else 3)
        elif I >= S:
            idx = 4
        else:
            idx = 5
    else:
        if I > 0 and I >= S * (1 + S):
            idx = 1
        elif C <= max(S, I):
            idx = 2
        elif I >= S:
            idx = 4
        else:
            idx = 5 if _gt_ratio(C, S * S, I) else 3
    return regime(topology, idx)
