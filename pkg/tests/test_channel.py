import math

import pytest

from hdccic.channel import (
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


@pytest.mark.parametrize(
    "point, snr, expected",
    [
        (ExponentPoint(0.5, 2), 20, (100, 1e4, 10, 10)),
        (ExponentPoint(1, 1), 0, (1, 1, 1, 1)),
        (ExponentPoint(3, 4, Topology.Z), 20, (100, 1e8, 0, 1e6)),
        (ExponentPoint(3, 4, Topology.S), 20, (100, 1e8, 1e6, 0)),
    ],
)
def test_gains_from_exponents(point, snr, expected):
    g = gains_from_exponents(point, snr)
    for got, want in zip((g.S, g.C, g.I_p, g.I_c), expected):
        assert got == pytest.approx(want, rel=1e-12, abs=0)


def test_removed_link_is_exactly_zero():
    assert gains_from_exponents(ExponentPoint(0.7, 1, "z"), 33).I_p == 0.0
    assert gains_from_exponents(ExponentPoint(0.7, 1, "s"), 33).I_c == 0.0


@pytest.mark.parametrize("alpha, beta", [(-0.1, 1), (1, -2), (math.nan, 1), (1, math.inf)])
def test_bad_exponents_rejected(alpha, beta):
    with pytest.raises(ValueError):
        ExponentPoint(alpha, beta)


@pytest.mark.parametrize("field", ["S", "C", "I_p", "I_c"])
def test_bad_gains_rejected(field):
    kw = dict(S=1.0, C=1.0, I_p=1.0, I_c=1.0)
    kw[field] = -1.0
    with pytest.raises(ValueError):
        ChannelGains(**kw)


def test_topology_parse():
    assert Topology.parse("SYM") is Topology.SYMMETRIC
    assert Topology.parse("symmetric") is Topology.SYMMETRIC
    assert Topology.parse(Topology.Z) is Topology.Z
    with pytest.raises(ValueError):
        Topology.parse("x")


@pytest.mark.parametrize(
    "point, index",
    [
        (ExponentPoint(0.55, 2), 8),
        (ExponentPoint(3, 0.5), 1),
        (ExponentPoint(3, 1.5), 2),
        (ExponentPoint(3, 4), 3),
        (ExponentPoint(1.2, 4), 4),
        (ExponentPoint(0.8, 4), 5),
        (ExponentPoint(0.55, 0.05), 6),
        (ExponentPoint(0.55, 1.0), 7),
        (ExponentPoint(0.25, 1.0), 9),
        (ExponentPoint(0.25, 2.0), 10),
        (ExponentPoint(1.5, 3, "s"), 4),
        (ExponentPoint(0.5, 3, "s"), 5),
        (ExponentPoint(0.5, 1.2, "s"), 3),
        (ExponentPoint(2.5, 3, "s"), 1),
        (ExponentPoint(3, 4, "z"), 3),
        (ExponentPoint(0.5, 4, "z"), 5),
    ],
)
def test_classify_exponents(point, index):
    assert classify_regime_exponents(point).index == index


def test_regime_labels():
    assert classify_regime_exponents(ExponentPoint(3, 0.5)).label == "Very Strong Interference 1"
    assert classify_regime_exponents(ExponentPoint(1.5, 3, "s")).label == "Strong Interference"


@pytest.mark.parametrize(
    "gains, top, index",
    [
        (ChannelGains.symmetric(100, 1e6, 50), Topology.SYMMETRIC, 1),
        (ChannelGains.symmetric(100, 1e6, 5000), Topology.SYMMETRIC, 2),
        (ChannelGains.symmetric(100, 1e6, 1e8), Topology.SYMMETRIC, 3),
        (ChannelGains.symmetric(1e4, 10, 1e8), Topology.SYMMETRIC, 10),
        (ChannelGains.symmetric(0, 0, 0), Topology.SYMMETRIC, 9),
        (ChannelGains.for_topology("z", 100, 1e6, 1e8), Topology.Z, 3),
        (ChannelGains.for_topology("s", 100, 10, 1e8), Topology.S, 5),
        (ChannelGains.for_topology("s", 100, 10, 50), Topology.S, 2),
    ],
)
def test_classify_gains(gains, top, index):
    assert classify_regime_gains(gains, top).index == index


def test_classify_gains_rejects_mismatched_topology():
    with pytest.raises(ValueError):
        classify_regime_gains(ChannelGains.symmetric(1, 1, 1), Topology.Z)
    with pytest.raises(ValueError):
        classify_regime_gains(ChannelGains(1, 1, 1, 2), Topology.SYMMETRIC)


@pytest.mark.parametrize(
    "point",
    [ExponentPoint(0.55, 2), ExponentPoint(3, 4), ExponentPoint(0.25, 2), ExponentPoint(1.5, 3, "s")],
)
def test_gain_and_exponent_classifiers_agree_at_high_snr(point):
    g = gains_from_exponents(point, 100)
    assert classify_regime_gains(g, point.topology).index == classify_regime_exponents(point).index


def test_regime_table():
    assert regime_count("sym") == 10 and regime_count("z") == 5 and regime_count("s") == 5
    assert regime("sym", 8).gap_constant_bits == pytest.approx(8.5048)
    assert regime("sym", 6).fd_cited
    assert not regime("z", 3).fd_cited
    assert THEOREM_GAP_BITS == {Topology.SYMMETRIC: 8.5048, Topology.Z: 4.507, Topology.S: 5.0}
