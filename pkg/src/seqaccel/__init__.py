"""Streaming sequence transformations for convergence acceleration and summation."""

from .epsilon_aitken import AitkenTransformer, EpsilonTransformer
from .interpolation import (
    PointFamily,
    RhoTransformer,
    RichardsonTransformer,
    SidiRTransformer,
    WTransformer,
    beleznay_alpha_search,
)
from .kernel import (
    BINARY64,
    BINARY128,
    EXACT,
    Estimate,
    Precision,
    SafeguardPolicy,
    SequencePoint,
    get_precision,
    guard_divide,
)
from .levin_like import LinearTransformer, RatioTransformer, RemainderEstimator
from .series_lab import ModelSequenceSpec, SeriesSpec, model_sequence, series_from_name
from .theta_like import (
    BCTransformer,
    BigThetaTransformer,
    JTransformer,
    LSMTransformer,
    ThetaTransformer,
)

__version__ = "0.1.0"

__all__ = [
    "AitkenTransformer", "EpsilonTransformer", "PointFamily", "RhoTransformer",
    "RichardsonTransformer", "SidiRTransformer", "WTransformer", "beleznay_alpha_search",
    "BINARY64", "BINARY128", "EXACT", "Estimate", "Precision", "SafeguardPolicy",
    "SequencePoint", "get_precision", "guard_divide", "LinearTransformer",
    "RatioTransformer", "RemainderEstimator", "ModelSequenceSpec", "SeriesSpec",
    "model_sequence", "series_from_name", "BCTransformer", "BigThetaTransformer",
    "JTransformer", "LSMTransformer", "ThetaTransformer",
]
