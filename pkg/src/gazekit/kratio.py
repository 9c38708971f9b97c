"""Transition-ratio statistic and threshold selection by minimizing it.

The K-ratio is the observed rate of fixation-to-saccade transitions divided
by the rate expected if labels were drawn independently with the same
saccade fraction. Values below 1 mean labels clump into runs; the adaptive
threshold is the grid point where that clumping is strongest.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from gazekit.classify import DispersionScanner, kinematics, _interval_mask_to_labels
from gazekit.errors import AllUndefined, InputError, NonPositiveThreshold, SeriesTooShort
from gazekit.model import Algorithm, GazeSeries, LabelSeries, TimeUnit

# None marks an undefined ratio (single-class labeling).
KRatioValue = Optional[float]


def k_ratio(labels: LabelSeries) -> KRatioValue:
    codes = labels.codes
    n = len(codes)
    if n < 2:
        raise SeriesTooShort(n)
    n_s = np.count_nonzero(codes) / n
    # pairs are divided by N rather than N - 1
    n_fs = np.count_nonzero((codes[:-1] == 0) & (codes[1:] == 1)) / n
    denom = n_s * (1.0 - n_s)
    if denom == 0:
        return None
    return n_fs / denom


class Scale(str, enum.Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class SweepGrid:
    lo: float
    hi: float
    count: int = 200
    scale: Scale = Scale.LOG

    def __post_init__(self):
        object.__setattr__(self, "scale", Scale(self.scale))
        if not (0 < self.lo < self.hi) or not math.isfinite(self.hi):
            raise InputError(f"sweep grid needs 0 < lo < hi, got lo={self.lo}, hi={self.hi}")
        if int(self.count) != self.count or self.count < 2:
            raise InputError(f"sweep grid needs count >= 2, got {self.count}")

    def thresholds(self) -> np.ndarray:
        if self.scale is Scale.LOG:
            return np.geomspace(self.lo, self.hi, int(self.count))
        return np.linspace(self.lo, self.hi, int(self.count))

    def to_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "count": int(self.count), "scale": self.scale.value}

    @classmethod
    def from_dict(cls, d: dict) -> SweepGrid:
        return cls(float(d["lo"]), float(d["hi"]), int(d["count"]), Scale(d["scale"]))


def default_grid(algorithm: Algorithm, unit: TimeUnit = TimeUnit.PER_MS) -> SweepGrid:
    """200 log-spaced points; velocities span 0.01-1000 px/ms, dispersion 1-2000 px.

    The upper ends are wide enough to bracket the minimum under 50 px of
    added noise, whose sample-to-sample speeds average roughly 90 px/ms and
    whose 50 ms dispersion is around 450 px.
    """
    if Algorithm(algorithm) is Algorithm.IDT:
        return SweepGrid(1.0, 2000.0, 200, Scale.LOG)
    k = TimeUnit(unit).ms_per_unit
    return SweepGrid(1e-2 * k, 1e3 * k, 200, Scale.LOG)


@dataclass(frozen=True)
class SweepCurve:
    algorithm: Algorithm
    thresholds: tuple[float, ...]
    k_ratios: tuple[KRatioValue, ...]

    def __post_init__(self):
        if len(self.thresholds) != len(self.k_ratios):
            raise InputError("thresholds and k_ratios differ in length")
        if any(b <= a for a, b in zip(self.thresholds, self.thresholds[1:])):
            raise InputError("curve thresholds must be strictly increasing")

    @property
    def points(self) -> list[tuple[float, KRatioValue]]:
        return list(zip(self.thresholds, self.k_ratios))

    def __len__(self) -> int:
        return len(self.thresholds)

    def to_csv(self) -> str:
        rows = ["threshold,k_ratio"]
        for thr, k in self.points:
            rows.append(f"{thr!r},{'' if k is None else repr(k)}")
        return "\n".join(rows) + "\n"

    @classmethod
    def from_points(cls, algorithm: Algorithm, points: Sequence[tuple[float, KRatioValue]]) -> SweepCurve:
        return cls(Algorithm(algorithm), tuple(float(p[0]) for p in points), tuple(p[1] for p in points))


def labeler(
    series: GazeSeries,
    algorithm: Algorithm,
    unit: TimeUnit = TimeUnit.PER_MS,
    t_min_ms: float = 50.0,
) -> Callable[[float], LabelSeries]:
    """Threshold -> labels for one series, reusing the per-series precomputation."""
    algorithm = Algorithm(algorithm)
    if algorithm is Algorithm.IDT:
        return DispersionScanner(series, t_min_ms).classify
    kin = kinematics(series, unit)
    speed = kin.v if algorithm is Algorithm.IVT else kin.v_eff

    def classify(threshold: float) -> LabelSeries:
        if not threshold > 0:
            raise NonPositiveThreshold(f"threshold must be > 0, got {threshold}")
        return _interval_mask_to_labels(speed >= threshold)

    return classify


def curve_from_labeler(classify: Callable[[float], LabelSeries], algorithm: Algorithm, grid: SweepGrid) -> SweepCurve:
    thresholds = tuple(float(x) for x in grid.thresholds())
    return SweepCurve(algorithm, thresholds, tuple(k_ratio(classify(thr)) for thr in thresholds))


def sweep(
    series: GazeSeries,
    algorithm: Algorithm,
    grid: SweepGrid | None = None,
    unit: TimeUnit = TimeUnit.PER_MS,
    t_min_ms: float = 50.0,
) -> SweepCurve:
    algorithm = Algorithm(algorithm)
    grid = grid or default_grid(algorithm, unit)
    return curve_from_labeler(labeler(series, algorithm, unit, t_min_ms), algorithm, grid)


def optimal_threshold(curve: SweepCurve) -> tuple[float, float]:
    """Grid point with the smallest defined K-ratio; ties go to the lower threshold."""
    best = None
    for thr, k in curve.points:
        if k is not None and (best is None or k < best[1]):
            best = (thr, k)
    if best is None:
        raise AllUndefined(f"every {curve.algorithm.value} threshold gave a single-class labeling")
    return best


def adaptive_classify(
    series: GazeSeries,
    algorithm: Algorithm,
    grid: SweepGrid | None = None,
    unit: TimeUnit = TimeUnit.PER_MS,
    t_min_ms: float = 50.0,
) -> tuple[LabelSeries, float]:
    algorithm = Algorithm(algorithm)
    grid = grid or default_grid(algorithm, unit)
    classify = labeler(series, algorithm, unit, t_min_ms)
    threshold, _ = optimal_threshold(curve_from_labeler(classify, algorithm, grid))
    return classify(threshold), threshold
