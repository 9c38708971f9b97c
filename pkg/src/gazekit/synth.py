"""Synthetic labeled gaze trajectories.

Episodes alternate fixation, saccade, fixation, ... . A fixation is Gaussian
jitter around an anchor; a saccade moves in a straight line to the next anchor
with a raised-cosine speed profile, so speed is zero at both ends and peaks at
twice the mean. A saccade of ``m`` samples spans ``m + 1`` sample intervals,
from the last sample of one fixation to the first sample of the next.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from gazekit.errors import InfeasibleAmplitude, InputError
from gazekit.model import GazeSeries, LabelSeries


@dataclass(frozen=True)
class SynthConfig:
    duration_ms: float = 60_000.0
    rate_hz: float = 1000.0
    fix_duration_ms_range: tuple[float, float] = (200.0, 400.0)
    sac_duration_ms_range: tuple[float, float] = (20.0, 80.0)
    sac_amplitude_px_range: tuple[float, float] = (50.0, 500.0)
    fix_jitter_px: float = 0.5
    arena: tuple[float, float] = (1920.0, 1080.0)
    seed: int = 0

    def __post_init__(self):
        for name in ("fix_duration_ms_range", "sac_duration_ms_range", "sac_amplitude_px_range", "arena"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))
        if not self.duration_ms > 0:
            raise InputError(f"duration_ms must be > 0, got {self.duration_ms}")
        if not self.rate_hz > 0:
            raise InputError(f"rate_hz must be > 0, got {self.rate_hz}")
        for name in ("fix_duration_ms_range", "sac_duration_ms_range", "sac_amplitude_px_range"):
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise InputError(f"{name} needs 0 < lo <= hi, got {(lo, hi)}")
        if not self.fix_jitter_px >= 0:
            raise InputError(f"fix_jitter_px must be >= 0, got {self.fix_jitter_px}")
        if not (self.arena[0] > 0 and self.arena[1] > 0):
            raise InputError(f"arena must be positive, got {self.arena}")

    @property
    def n_samples(self) -> int:
        return int(round(self.duration_ms * self.rate_hz / 1000.0))

    def samples_range(self, ms_range: tuple[float, float]) -> tuple[int, int]:
        lo = max(1, math.ceil(ms_range[0] * self.rate_hz / 1000.0 - 1e-9))
        hi = max(lo, math.floor(ms_range[1] * self.rate_hz / 1000.0 + 1e-9))
        return lo, hi

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> SynthConfig:
        return cls(**d)


def _episode_lengths(cfg: SynthConfig, rng: np.random.Generator) -> list[tuple[int, int]]:
    """(label code, length) runs covering exactly ``cfg.n_samples`` samples.

    Draws are redrawn when they would leave a tail too short for a fixation
    but too long for one fixation plus a full saccade/fixation pair, so every
    fixation run stays inside its range whenever the total allows it.
    """
    n = cfg.n_samples
    f_lo, f_hi = cfg.samples_range(cfg.fix_duration_ms_range)
    s_lo, s_hi = cfg.samples_range(cfg.sac_duration_ms_range)
    min_pair_tail = 2 * f_lo + s_lo
    runs = []
    left = n
    while True:
        if left <= f_hi or left < min_pair_tail:
            runs.append((0, left))
            return runs
        for _ in range(1000):
            f = int(rng.integers(f_lo, f_hi + 1))
            s = int(rng.integers(s_lo, s_hi + 1))
            rest = left - f - s
            if f_lo <= rest <= f_hi or rest >= min_pair_tail:
                break
        else:
            # fall back to the shortest pair; the tail then has room for more episodes
            f, s = f_lo, s_lo
        runs.append((0, f))
        runs.append((1, s))
        left -= f + s


def _next_anchor(anchor: np.ndarray, cfg: SynthConfig, rng: np.random.Generator) -> np.ndarray:
    w, h = cfg.arena
    a_lo, a_hi = cfg.sac_amplitude_px_range
    corners = np.array([[0, 0], [w, 0], [0, h], [w, h]], dtype=float)
    reach = np.max(np.hypot(*(corners - anchor).T))
    amp = min(rng.uniform(a_lo, a_hi), reach)
    for _ in range(64):
        phi = rng.uniform(0.0, 2.0 * np.pi)
        b = anchor + amp * np.array([np.cos(phi), np.sin(phi)])
        if 0 <= b[0] <= w and 0 <= b[1] <= h:
            return b
    # the segment towards the farthest corner stays inside the arena
    far = corners[np.argmax(np.hypot(*(corners - anchor).T))]
    d = far - anchor
    return anchor + amp * d / np.hypot(*d)


def _raised_cosine_progress(u: np.ndarray) -> np.ndarray:
    """Fraction of the path covered at normalized time ``u`` (speed 1 - cos 2 pi u)."""
    return u - np.sin(2.0 * np.pi * u) / (2.0 * np.pi)


def generate(config: SynthConfig) -> tuple[GazeSeries, LabelSeries]:
    cfg = config
    w, h = cfg.arena
    if cfg.sac_amplitude_px_range[1] > math.hypot(w, h):
        raise InfeasibleAmplitude(
            f"amplitude {cfg.sac_amplitude_px_range[1]} exceeds arena diagonal {math.hypot(w, h):.1f}"
        )
    rng = np.random.default_rng(cfg.seed)
    runs = _episode_lengths(cfg, rng)
    n = cfg.n_samples
    xy = np.empty((n, 2))
    codes = np.empty(n, dtype=np.int8)

    anchor = np.array([rng.uniform(0, w), rng.uniform(0, h)])
    pos = 0
    for code, length in runs:
        codes[pos : pos + length] = code
        if code == 0:
            xy[pos : pos + length] = anchor
            if cfg.fix_jitter_px:
                xy[pos : pos + length] += rng.normal(0.0, cfg.fix_jitter_px, (length, 2))
        else:
            target = _next_anchor(anchor, cfg, rng)
            u = np.arange(1, length + 1) / (length + 1)
            xy[pos : pos + length] = anchor + np.outer(_raised_cosine_progress(u), target - anchor)
            anchor = target
        pos += length

    np.clip(xy[:, 0], 0.0, w, out=xy[:, 0])
    np.clip(xy[:, 1], 0.0, h, out=xy[:, 1])
    t = np.arange(n) * (1000.0 / cfg.rate_hz)
    return GazeSeries(t, xy[:, 0], xy[:, 1], cfg.rate_hz), LabelSeries(codes)


def saccade_episodes(labels: LabelSeries) -> list[tuple[int, int]]:
    """Inclusive (start, end) indices of every saccade run."""
    edges = np.diff(np.concatenate(([0], labels.codes, [0])).astype(np.int8))
    return list(zip(np.flatnonzero(edges == 1).tolist(), (np.flatnonzero(edges == -1) - 1).tolist()))
