"""Sum-capacity bounds, gDoF and LDA schemes for the half-duplex causal cognitive IC."""

from .channel import (
    ChannelGains,
    ExponentPoint,
    Regime,
    Topology,
    classify_regime_exponents,
    classify_regime_gains,
    gains_from_exponents,
)
from .gdof import GdofResult, cooperation_classification, gamma_star, gdof_closed_form, gdof_maxmin
from .inner_bounds import InnerBoundEval, inner_best, inner_nocoop
from .outer_bounds import OuterBoundEval, outer_min

__all__ = [
    "ChannelGains",
    "ExponentPoint",
    "GdofResult",
    "InnerBoundEval",
    "OuterBoundEval",
    "Regime",
    "Topology",
    "classify_regime_exponents",
    "classify_regime_gains",
    "cooperation_classification",
    "gains_from_exponents",
    "gamma_star",
    "gdof_closed_form",
    "gdof_maxmin",
    "inner_best",
    "inner_nocoop",
    "outer_min",
]
