"""Bit-exact linear deterministic (GF(2) shift) model of the channel.

Every transmitted level carries an XOR of payload bits.  Levels are tracked
symbolically as integer bitmasks over payload-bit indices, next to their
actual values, so a receiver can decode a block exactly when the levels not
polluted by unknown interference determine all of that block's bits.

Levels are indexed top-down: index 0 is the most significant level.  A link
of strength ``k`` delivers the top ``k`` levels of the transmit vector to the
bottom ``k`` levels of the receiver (the down-shift ``S^(n-k)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .channel import HALF, TWO_THIRDS, Topology

BLOCK_IDS = ("b1", "b2", "b3c", "b3p", "b4c", "b4p", "zero")

# intended receiver of each payload block
_DESTINATION = {"b1": "prx", "b2": "prx", "b3c": "prx", "b3p": "prx", "b4c": "crx", "b4p": "crx"}


class LdaSchemeError(ValueError):
    """No deterministic-model scheme exists for the configuration."""


class LdaDecodeError(RuntimeError):
    def __init__(self, receiver: str, block: str, slot: int, detail: str = ""):
        self.receiver, self.block, self.slot = receiver, block, slot
        msg = f"{receiver} failed to decode {block} in slot {slot}"
        super().__init__(msg + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class LdaConfig:
    n_d: int
    n_i: int
    n_f: int
    topology: Topology = Topology.SYMMETRIC

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology.parse(self.topology))
        for name in ("n_d", "n_i", "n_f"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
        if self.n_d == 0:
            raise ValueError("n_d must be positive")

    @property
    def n(self) -> int:
        return max(self.n_d, self.n_i, self.n_f)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.n_i, self.n_d)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.n_f, self.n_d)


Alloc = List[Tuple[str, int]]


@dataclass(frozen=True)
class LdaScheme:
    scheme_id: str
    listen_slots: int
    transmit_slots: int
    phase1_alloc: Dict[str, Alloc]
    phase2_alloc: Dict[str, Alloc]
    decode_orders: Dict[str, Dict[str, List[str]]]
    precoded_pairs: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def gamma(self) -> Fraction:
        total = self.listen_slots + self.transmit_slots
        return Fraction(self.listen_slots, total) if total else Fraction(0)

    @property
    def slots(self) -> int:
        return self.listen_slots + self.transmit_slots

    def validate(self, config: LdaConfig) -> None:
        for phase in (self.phase1_alloc, self.phase2_alloc):
            for node, alloc in phase.items():
                for block, length in alloc:
                    if block not in BLOCK_IDS:
                        raise LdaSchemeError(f"unknown block {block!r}")
                    if length < 0:
                        raise LdaSchemeError(f"negative length for {block} at {node}")
                # levels below the listed blocks are implicitly zero
                if sum(length for _, length in alloc) > config.n:
                    raise LdaSchemeError(f"{node} vector longer than n={config.n}")


def _length(x: Fraction, n_d: int) -> int:
    v = x * n_d
    if v.denominator != 1:
        raise LdaSchemeError(f"block length {x}*n_d = {v} is not an integer; pick another n_d")
    if v < 0:
        raise LdaSchemeError("negative block length")
    return int(v)


def lda_scheme_for(config: LdaConfig) -> LdaScheme:
    """Block layout of the cooperative LDA scheme for ``config``.

    Lengths follow the normalized lengths of the scheme (multiplied by
    ``n_d``); the slot counts realize the optimal listening fraction exactly.
    """
    a, b = config.alpha, config.beta
    n_d = config.n_d
    top = config.topology
    L = lambda x: _length(Fraction(x), n_d)  # noqa: E731

    pairs: List[Tuple[str, str]] = []
    if top is Topology.SYMMETRIC and a < HALF:
        if not b > 2 - 2 * a:
            raise LdaSchemeError("cooperation gains nothing unless beta > 2 - 2*alpha")
        sid, gamma = "sym_region10", a / (b + a - 1)
        ptx = [("b2", L(a)), ("b3p", L(1 - 2 * a)), ("zero", L(a))]
        ctx = [("b4p", L(1))]
        orders = {"prx": ["b2", "b3p"], "crx": ["b4p"]}
        pairs = [("b4p", "b2")]
    elif top is Topology.SYMMETRIC and a < TWO_THIRDS:
        if not b > 2 * a:
            raise LdaSchemeError("cooperation gains nothing unless beta > 2*alpha")
        sid, gamma = "sym_region8", (2 - 3 * a) / (b - 3 * a + 1)
        ptx = [("b3c", L(2 * a - 1)), ("b2", L(2 - 3 * a)), ("zero", L(2 * a - 1)), ("b3p", L(1 - a))]
        ctx = [("b4c", L(2 * a - 1)), ("zero", L(1 - a)), ("b4p", L(1 - a))]
        orders = {"prx": ["b3c", "b2", "b4c", "b3p"], "crx": ["b4c", "b3c", "b4p"]}
        pairs = [("b4p", "b2")]
    elif top in (Topology.SYMMETRIC, Topology.Z) and a >= 2:
        if not b > 2:
            raise LdaSchemeError("cooperation gains nothing unless beta > 2")
        sid = "sym_region3" if top is Topology.SYMMETRIC else "z_region3"
        gamma = (a - 2) / (b + a - 3)
        ctx = [("b4c", L(1)), ("b2", L(a - 2)), ("zero", L(1))]
        ptx = [("b3c", L(1)), ("zero", L(a - 1))]
        crx = ["b3c", "b4c"] if top is Topology.SYMMETRIC else ["b4c"]
        orders = {"prx": ["b4c", "b2", "b3c"], "crx": crx}
    elif top is Topology.S and a < 1:
        if not b > 2 - a:
            raise LdaSchemeError("cooperation gains nothing unless beta > 2 - alpha")
        sid, gamma = "s_region5", a / (b + a - 1)
        ptx = [("b2", L(a)), ("b3p", L(1 - a))]
        ctx = [("b4p", L(1))]
        orders = {"prx": ["b2", "b3p"], "crx": ["b4p"]}
        pairs = [("b4p", "b2")]
    elif top is Topology.S and a < 2:
        if not b > a:
            raise LdaSchemeError("cooperation gains nothing unless beta > alpha")
        sid, gamma = "s_region4", (2 - a) / (b - a + 1)
        ptx = [("b3c", L(a - 1)), ("b2", L(2 - a)), ("zero", L(a - 1))]
        ctx = [("b4p", L(1))]
        orders = {"prx": ["b3c", "b2"], "crx": ["b3c", "b4p"]}
        pairs = [("b4p", "b2")]
    else:
        raise LdaSchemeError(f"no cooperative LDA scheme for alpha={a}, beta={b}, {top.value}")

    gamma = Fraction(gamma)
    listen, total = gamma.numerator, gamma.denominator
    phase1 = {"ptx": [("b1", config.n_d), ("b2", config.n_f - config.n_d)], "ctx": []}
    scheme = LdaScheme(
        scheme_id=sid,
        listen_slots=listen,
        transmit_slots=total - listen,
        phase1_alloc=phase1,
        phase2_alloc={"ptx": [x for x in ptx if x[1]], "ctx": [x for x in ctx if x[1]]},
        decode_orders={"phase1": {"prx": ["b1"], "ctx": ["b1", "b2"]}, "phase2": orders},
        precoded_pairs=pairs,
    )
    scheme.validate(config)
    # the b2 bits CTx learns must exactly fill the Phase-2 b2 levels
    b2_in = scheme.listen_slots * (config.n_f - config.n_d)
    b2_out = scheme.transmit_slots * sum(l for blk, l in scheme.phase2_alloc["ptx"] + scheme.phase2_alloc["ctx"] if blk == "b2")
    if b2_in != b2_out:
        raise LdaSchemeError(f"b2 flow mismatch: {b2_in} bits learned, {b2_out} forwarded")
    return scheme


@dataclass
class SlotRecord:
    slot: int
    m_c: int
    tx: Dict[str, Tuple[int, ...]]
    rx: Dict[str, Tuple[int, ...]]


@dataclass
class LdaTrace:
    slots: List[SlotRecord]
    decode_log: List[Tuple[str, str, int, bool]]
    delivered: Dict[str, int]
    success: bool

    @property
    def r_p(self) -> int:
        return sum(v for k, v in self.delivered.items() if _DESTINATION[k] == "prx")

    @property
    def r_c(self) -> int:
        return sum(v for k, v in self.delivered.items() if _DESTINATION[k] == "crx")

    def dump(self) -> str:
        """One line per slot and node: ``slot node bits`` (top level first)."""
        lines = []
        for rec in self.slots:
            for node, bits in list(rec.tx.items()) + list(rec.rx.items()):
                lines.append(f"{rec.slot} {node} {''.join(map(str, bits))}")
        return "\n".join(lines)


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def _solve(rows, target: int):
    """Solve a GF(2) system restricted to ``target`` variables.

    ``rows`` are ``(mask, value)`` with masks inside ``target``.  Returns a
    dict var -> value, or None if the rows do not pin every target variable.
    """
    pivots: Dict[int, Tuple[int, int]] = {}
    for mask, val in rows:
        for bit, (pm, pv) in pivots.items():
            if mask >> bit & 1:
                mask ^= pm
                val ^= pv
        if not mask:
            continue
        bit = mask.bit_length() - 1
        for other, (om, ov) in list(pivots.items()):
            if om >> bit & 1:
                pivots[other] = (om ^ mask, ov ^ val)
        pivots[bit] = (mask, val)
    if sum(1 << k for k in pivots) != target:
        return None
    return {bit: val for bit, (_, val) in pivots.items()}


class _Simulator:
    def __init__(self, config: LdaConfig, scheme: LdaScheme, payload_fn):
        self.cfg, self.scheme = config, scheme
        self.payload_fn = payload_fn
        self.var_block: List[str] = []
        self.values = 0  # payload value of every variable, packed
        self.known = {"prx": {}, "crx": {}, "ctx": {}}
        self.b2_pool: List[int] = []  # b2 variables CTx decoded, in order
        self.decode_log: List[Tuple[str, str, int, bool]] = []
        self.delivered = {k: 0 for k in _DESTINATION}

    def fresh(self, block: str) -> int:
        idx = len(self.var_block)
        self.var_block.append(block)
        if self.payload_fn(idx):
            self.values |= 1 << idx
        return 1 << idx

    def build(self, alloc: Alloc, b2_cursor: List[int]) -> List[int]:
        n = self.cfg.n
        vec: List[int] = []
        for block, length in alloc:
            for _ in range(length):
                if block == "zero":
                    vec.append(0)
                elif block == "b2" and b2_cursor is not None:
                    # Phase 2 forwards the b2 bits learned in Phase 1, in order
                    vec.append(1 << self.b2_pool[b2_cursor[0]])
                    b2_cursor[0] += 1
                else:
                    vec.append(self.fresh(block))
        return vec + [0] * (n - len(vec))

    def link(self, x: List[int], k: int) -> List[int]:
        n = self.cfg.n
        return [0] * (n - k) + x[:k]

    @staticmethod
    def add(*vectors):
        return [int(np.bitwise_xor.reduce(col)) if len(col) > 1 else col[0] for col in zip(*vectors)]

    def block_mask(self, block: str) -> int:
        return sum(1 << i for i, b in enumerate(self.var_block) if b == block)

    def decode(self, rx: str, y: List[int], order: Sequence[str], slot: int):
        known = self.known[rx]
        for block in order:
            bmask = self.block_mask(block)
            present = 0
            for m in y:
                present |= m & bmask
            present &= ~sum(1 << v for v in known)
            if not present:
                continue
            rows = []
            for m in y:
                residual = m & ~sum(1 << v for v in known)
                if residual and residual & ~present == 0:
                    val = self._observe(m) ^ self._known_part(m, known)
                    rows.append((residual, val))
            sol = _solve(rows, present)
            self.decode_log.append((rx, block, slot, sol is not None))
            if sol is None:
                raise LdaDecodeError(rx, block, slot, "levels polluted by undecoded interference")
            for var, val in sol.items():
                if val != (self.values >> var & 1):
                    raise LdaDecodeError(rx, block, slot, "decoded value differs from payload")
                known[var] = val
                if rx == "ctx" and block == "b2":
                    self.b2_pool.append(var)
                if _DESTINATION.get(block) == rx:
                    self.delivered[block] += 1

    def _observe(self, mask: int) -> int:
        return _parity(mask & self.values)

    @staticmethod
    def _known_part(mask: int, known: Dict[int, int]) -> int:
        out = 0
        for var, val in known.items():
            if mask >> var & 1:
                out ^= val
        return out

    def precode(self, xp: List[int], xc: List[int]) -> List[int]:
        """Add to CTx's carrier levels the interferer bits that hit the same CRx level."""
        cfg = self.cfg
        n = cfg.n
        if cfg.topology is Topology.Z:
            return xc
        xc = list(xc)
        for carrier, interferer in self.scheme.precoded_pairs:
            cmask, imask = self.block_mask(carrier), self.block_mask(interferer)
            for q in range(cfg.n_d):
                if not xc[q] & cmask:
                    continue
                p = q + cfg.n_i - cfg.n_d  # PTx level landing on the same CRx level
                if 0 <= p < cfg.n_i:
                    xc[q] ^= xp[p] & imask
        return xc

    def receive(self, xp, xc, m_c):
        cfg = self.cfg
        zero = [0] * cfg.n
        prx = [self.link(xp, cfg.n_d)]
        crx = [self.link(xc, cfg.n_d) if m_c else zero]
        if cfg.topology is not Topology.S and m_c:
            prx.append(self.link(xc, cfg.n_i))
        if cfg.topology is not Topology.Z:
            crx.append(self.link(xp, cfg.n_i))
        out = {"prx": self.add(*prx), "crx": self.add(*crx)}
        if not m_c:
            out["ctx"] = self.link(xp, cfg.n_f)
        return out

    def run(self) -> LdaTrace:
        sch = self.scheme
        records = []
        b2_cursor = [0]
        for slot in range(sch.slots):
            m_c = 0 if slot < sch.listen_slots else 1
            if m_c == 0:
                xp = self.build(sch.phase1_alloc["ptx"], None)
                xc = [0] * self.cfg.n
                orders = sch.decode_orders["phase1"]
            else:
                xp = self.build(sch.phase2_alloc["ptx"], b2_cursor)
                xc = self.build(sch.phase2_alloc["ctx"], b2_cursor)
                xc = self.precode(xp, xc)
                ctx_known = sum(1 << v for v in self.known["ctx"])
                own = self.block_mask("b4c") | self.block_mask("b4p")
                if any(m & ~(ctx_known | own) for m in xc):
                    raise LdaDecodeError("ctx", "b2", slot, "CTx transmits bits it never decoded")
                orders = sch.decode_orders["phase2"]
            y = self.receive(xp, xc, m_c)
            for rx, order in orders.items():
                self.decode(rx, y[rx], order, slot)
            records.append(SlotRecord(
                slot=slot,
                m_c=m_c,
                tx={"ptx": tuple(self._observe(m) for m in xp), "ctx": tuple(self._observe(m) for m in xc)},
                rx={k: tuple(self._observe(m) for m in v) for k, v in y.items()},
            ))
        missing = [
            (b, i) for i, b in enumerate(self.var_block)
            if i not in self.known[_DESTINATION[b]]
        ]
        if missing:
            block, var = missing[0]
            raise LdaDecodeError(_DESTINATION[block], block, -1, f"payload bit {var} never delivered")
        return LdaTrace(records, self.decode_log, self.delivered, success=True)


def lda_simulate(config: LdaConfig, scheme: LdaScheme, seed: int = 0,
                 payload: Optional[Sequence[int]] = None) -> LdaTrace:
    """Run every slot of ``scheme`` and decode in the scheme's stated orders.

    Args:
        payload: explicit payload bits (in creation order); when shorter
            than needed the rest is zero.  Default: pseudo-random from ``seed``.

    Raises:
        LdaDecodeError: naming the receiver, block and slot that failed.
    """
    scheme.validate(config)
    if payload is None:
        rng = np.random.default_rng(seed)
        cache: Dict[int, int] = {}

        def payload_fn(i):
            # draw in blocks so the stream only depends on the seed
            while len(cache) <= i:
                start = len(cache)
                for j, bit in enumerate(rng.integers(0, 2, size=256)):
                    cache[start + j] = int(bit)
            return cache[i]
    else:
        bits = list(payload)

        def payload_fn(i):
            return int(bits[i]) & 1 if i < len(bits) else 0
    return _Simulator(config, scheme, payload_fn).run()


def lda_normalized_sumrate(trace: LdaTrace, config: LdaConfig, slots: int) -> Fraction:
    """Delivered bits per slot, normalized by ``2 n_d``, as an exact rational."""
    total = trace.r_p + trace.r_c
    if total == 0:
        return Fraction(0)
    return Fraction(total, slots * 2 * config.n_d)


# One test point per cooperative scheme, with integer block lengths.
LDA_TEST_POINTS = [
    LdaConfig(4, 1, 8, Topology.SYMMETRIC),
    LdaConfig(5, 3, 8, Topology.SYMMETRIC),
    LdaConfig(2, 6, 8, Topology.SYMMETRIC),
    LdaConfig(2, 6, 8, Topology.Z),
    LdaConfig(2, 1, 6, Topology.S),
    LdaConfig(2, 3, 6, Topology.S),
]
