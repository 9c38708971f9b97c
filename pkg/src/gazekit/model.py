"""Domain types shared across the package.

Series are stored column-wise as read-only numpy arrays; ``GazeSample`` exists
for row-wise access and serialization. Timestamps are milliseconds, positions
are pixels.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from gazekit.errors import InputError, NonMonotonicTimestamp, NonPositiveThreshold


class Label(enum.IntEnum):
    FIXATION = 0
    SACCADE = 1

    @property
    def token(self) -> str:
        return "F" if self is Label.FIXATION else "S"


class Algorithm(str, enum.Enum):
    IVT = "ivt"
    IAVT = "iavt"
    IDT = "idt"


class TimeUnit(str, enum.Enum):
    """Denominator of velocities: px per millisecond or px per second."""

    PER_MS = "ms"
    PER_S = "s"

    @property
    def ms_per_unit(self) -> float:
        return 1.0 if self is TimeUnit.PER_MS else 1000.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GazeSample:
    t: float
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise InputError(f"non-finite gaze position ({self.x}, {self.y})")

    def to_dict(self) -> dict:
        return {"t": self.t, "x": self.x, "y": self.y}

    @classmethod
    def from_dict(cls, d: dict) -> GazeSample:
        return cls(float(d["t"]), float(d["x"]), float(d["y"]))


@dataclass(frozen=True, eq=False)
class GazeSeries:
    """Ordered gaze positions with strictly increasing timestamps."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    sample_rate_hz: float = 1000.0

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if not (t.ndim == x.ndim == y.ndim == 1) or not (len(t) == len(x) == len(y)):
            raise InputError("t, x, y must be 1-D arrays of equal length")
        if len(t) == 0:
            raise InputError("empty gaze series")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.all(np.isfinite(t))):
            raise InputError("non-finite values in gaze series")
        bad = np.flatnonzero(np.diff(t) <= 0)
        if bad.size:
            # position (1-based) of the offending sample
            raise NonMonotonicTimestamp(int(bad[0]) + 2)
        object.__setattr__(self, "t", _frozen(t))
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @classmethod
    def from_samples(cls, samples: Iterable[GazeSample], sample_rate_hz: float = 1000.0) -> GazeSeries:
        samples = list(samples)
        return cls(
            np.array([s.t for s in samples], dtype=float),
            np.array([s.x for s in samples], dtype=float),
            np.array([s.y for s in samples], dtype=float),
            sample_rate_hz,
        )

    @property
    def samples(self) -> list[GazeSample]:
        return [GazeSample(float(t), float(x), float(y)) for t, x, y in zip(self.t, self.x, self.y)]

    def __len__(self) -> int:
        return len(self.t)

    def __iter__(self) -> Iterator[GazeSample]:
        return iter(self.samples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GazeSeries):
            return NotImplemented
        return (
            self.sample_rate_hz == other.sample_rate_hz
            and np.array_equal(self.t, other.t)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
        )

    __hash__ = None

    def with_positions(self, x: np.ndarray, y: np.ndarray) -> GazeSeries:
        return GazeSeries(self.t, x, y, self.sample_rate_hz)

    def to_dict(self) -> dict:
        return {
            "sample_rate_hz": self.sample_rate_hz,
            "t": self.t.tolist(),
            "x": self.x.tolist(),
            "y": self.y.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> GazeSeries:
        return cls(d["t"], d["x"], d["y"], float(d.get("sample_rate_hz", 1000.0)))


@dataclass(frozen=True, eq=False)
class LabelSeries:
    """Per-sample labels stored as int8 codes (0 = fixation, 1 = saccade)."""

    codes: np.ndarray

    def __post_init__(self):
        codes = np.array(self.codes, dtype=np.int8)
        if codes.ndim != 1:
            raise InputError("labels must be 1-D")
        if codes.size and (codes.min() < 0 or codes.max() > 1):
            raise InputError("label codes must be 0 or 1")
        object.__setattr__(self, "codes", _frozen(codes))

    @classmethod
    def from_labels(cls, labels: Iterable[Label]) -> LabelSeries:
        return cls(np.fromiter((int(lab) for lab in labels), dtype=np.int8))

    @classmethod
    def from_tokens(cls, tokens: Iterable[str], vocabulary: Sequence[str] = ("F", "S")) -> LabelSeries:
        lookup = {vocabulary[0]: 0, vocabulary[1]: 1}
        return cls(np.fromiter((lookup[tok] for tok in tokens), dtype=np.int8))

    @classmethod
    def from_saccade_mask(cls, mask: np.ndarray) -> LabelSeries:
        return cls(np.asarray(mask, dtype=np.int8))

    @property
    def labels(self) -> list[Label]:
        return [Label(int(c)) for c in self.codes]

    def tokens(self, vocabulary: Sequence[str] = ("F", "S")) -> list[str]:
        return [vocabulary[int(c)] for c in self.codes]

    @property
    def n_saccade(self) -> int:
        return int(self.codes.sum())

    @property
    def n_fixation(self) -> int:
        return len(self.codes) - self.n_saccade

    def flipped(self) -> LabelSeries:
        return LabelSeries(1 - self.codes)

    def __len__(self) -> int:
        return len(self.codes)

    def __getitem__(self, i: int) -> Label:
        return Label(int(self.codes[i]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelSeries):
            return NotImplemented
        return np.array_equal(self.codes, other.codes)

    __hash__ = None

    def to_dict(self) -> dict:
        return {"labels": "".join(self.tokens())}

    @classmethod
    def from_dict(cls, d: dict) -> LabelSeries:
        return cls.from_tokens(d["labels"])


@dataclass(frozen=True)
class ThresholdConfig:
    """Threshold for one algorithm, in its native unit.

    ``value`` is a velocity (px per ``TimeUnit``) for IVT/IAVT and the
    dispersion limit in px for IDT; ``t_min_ms`` is only read by IDT.
    """

    algorithm: Algorithm
    value: float
    t_min_ms: float = 50.0

    def __post_init__(self):
        object.__setattr__(self, "algorithm", Algorithm(self.algorithm))
        if not self.value > 0:
            raise NonPositiveThreshold(f"threshold must be > 0, got {self.value}")
        if not self.t_min_ms > 0:
            raise NonPositiveThreshold(f"t_min_ms must be > 0, got {self.t_min_ms}")

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm.value, "value": self.value, "t_min_ms": self.t_min_ms}

    @classmethod
    def from_dict(cls, d: dict) -> ThresholdConfig:
        return cls(Algorithm(d["algorithm"]), float(d["value"]), float(d.get("t_min_ms", 50.0)))


__all__ = [
    "Algorithm",
    "GazeSample",
    "GazeSeries",
    "Label",
    "LabelSeries",
    "ThresholdConfig",
    "TimeUnit",
]
