"""Multiscale change-point detection for multivariate time series."""

from ._cpd import (
    DetectConfig,
    EvalResult,
    GroundTruth,
    SegComponent,
    Segmentation,
    TimeSeries,
    add_noise,
    calibration_json,
    detect,
    make_signal,
    run_theorem1_suite,
    score,
)

__all__ = [
    "DetectConfig",
    "EvalResult",
    "GroundTruth",
    "SegComponent",
    "Segmentation",
    "TimeSeries",
    "add_noise",
    "calibration_json",
    "detect",
    "make_signal",
    "run_theorem1_suite",
    "score",
]
