"""Security bounds, forward model and Monte Carlo for LM05 with weak+vacuum decoys."""

__version__ = "0.1.0"

from .bounds import analyze, eps12_upper, key_rate_lower, q12_lower, y1_lower, y12_lower
from .channel import (
    PredictedStats,
    expected_gain,
    expected_qber,
    infinite_decoy_rate,
    overall_transmission,
    predict_stats,
    weak_vacuum_rate,
)
from .core import (
    BoundsResult,
    ChannelPoint,
    DeviceParams,
    DomainError,
    InsecurePointError,
    InsufficientDataError,
    IntensitySet,
    MeasuredStats,
    binary_entropy,
    db_to_transmittance,
    tau,
)
from .montecarlo import MCConfig, TallySet, estimate_stats, simulate_run, true_tagged_stats
from .planner import InsecureError, PlanResult, max_secure_loss, optimize_intensities

__all__ = [
    "BoundsResult",
    "ChannelPoint",
    "DeviceParams",
    "DomainError",
    "InsecureError",
    "InsecurePointError",
    "InsufficientDataError",
    "IntensitySet",
    "MCConfig",
    "MeasuredStats",
    "PlanResult",
    "PredictedStats",
    "TallySet",
    "analyze",
    "binary_entropy",
    "db_to_transmittance",
    "eps12_upper",
    "estimate_stats",
    "expected_gain",
    "expected_qber",
    "infinite_decoy_rate",
    "key_rate_lower",
    "max_secure_loss",
    "optimize_intensities",
    "overall_transmission",
    "predict_stats",
    "q12_lower",
    "simulate_run",
    "tau",
    "true_tagged_stats",
    "weak_vacuum_rate",
    "y12_lower",
    "y1_lower",
]
