"""Fixation/saccade classification with transition-ratio threshold tuning."""

from gazekit.model import (
    Algorithm,
    GazeSample,
    GazeSeries,
    Label,
    LabelSeries,
    ThresholdConfig,
    TimeUnit,
)

__version__ = "0.1.0"

__all__ = [
    "Algorithm",
    "GazeSample",
    "GazeSeries",
    "Label",
    "LabelSeries",
    "ThresholdConfig",
    "TimeUnit",
]
