"""Threshold classifiers (I-VT, I-AVT, I-DT) and a velocity/acceleration
reference parser.

Velocities live on the N-1 intervals between samples. Sample ``i`` takes the
label of interval ``i`` and the last sample inherits the label of the one
before it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gazekit.errors import (
    IndexOutOfRange,
    NonPositiveConversion,
    NonPositiveThreshold,
    SeriesTooShort,
)
from gazekit.model import GazeSeries, LabelSeries, TimeUnit

# Derived from the recording setup: 1920 px across a 24.5" 16:9 panel viewed at 60 cm.
DEFAULT_PX_PER_DEG = 37.0


def _require_length(series: GazeSeries, minimum: int = 2) -> None:
    if len(series) < minimum:
        raise SeriesTooShort(len(series), minimum)


def _require_positive(value: float, name: str = "threshold") -> None:
    if not value > 0:
        raise NonPositiveThreshold(f"{name} must be > 0, got {value}")


@dataclass(frozen=True, eq=False)
class KinematicsSeries:
    v: np.ndarray
    theta: np.ndarray
    v_eff: np.ndarray

    def __len__(self) -> int:
        return len(self.v)


def kinematics(series: GazeSeries, unit: TimeUnit = TimeUnit.PER_MS) -> KinematicsSeries:
    """Interval speed, displacement direction and direction-weighted speed.

    A zero-length step has no direction; it keeps the previous angle (0 for a
    leading run of zero steps). ``v_eff[0]`` equals ``v[0]``.
    """
    _require_length(series)
    dx = np.diff(series.x) + 0.0  # +0.0 normalizes -0.0 so atan2 stays in (-pi, pi]
    dy = np.diff(series.y) + 0.0
    dt = np.diff(series.t) / TimeUnit(unit).ms_per_unit
    v = np.hypot(dx, dy) / dt

    moved = (dx != 0) | (dy != 0)
    raw = np.arctan2(dy, dx)
    raw[raw == -np.pi] = np.pi  # tiny negative dy with dx < 0 rounds onto -pi
    last = np.maximum.accumulate(np.where(moved, np.arange(len(dx)), -1))
    theta = np.where(last >= 0, raw[np.maximum(last, 0)], 0.0)

    v_eff = v.copy()
    v_eff[1:] = v[1:] * np.cos(theta[1:] - theta[:-1])
    return KinematicsSeries(v, theta, v_eff)


def _interval_mask_to_labels(mask: np.ndarray) -> LabelSeries:
    return LabelSeries.from_saccade_mask(np.append(mask, mask[-1]))


def ivt_classify(series: GazeSeries, threshold: float, unit: TimeUnit = TimeUnit.PER_MS) -> LabelSeries:
    _require_length(series)
    _require_positive(threshold)
    return _interval_mask_to_labels(kinematics(series, unit).v >= threshold)


def iavt_classify(series: GazeSeries, threshold: float, unit: TimeUnit = TimeUnit.PER_MS) -> LabelSeries:
    """Like I-VT but on the signed direction-weighted speed; reversals (negative
    values) are never saccades."""
    _require_length(series)
    _require_positive(threshold)
    return _interval_mask_to_labels(kinematics(series, unit).v_eff >= threshold)


def dispersion(series: GazeSeries, i: int, k: int) -> float:
    """Width plus height of the bounding box of samples ``i..k`` inclusive."""
    if not (0 <= i <= k < len(series)):
        raise IndexOutOfRange(f"need 0 <= i <= k < {len(series)}, got i={i}, k={k}")
    xs = series.x[i : k + 1]
    ys = series.y[i : k + 1]
    return float(xs.max() - xs.min() + ys.max() - ys.min())


class _SparseTable:
    """Static range max/min queries in O(1) after O(N log N) build."""

    def __init__(self, a: np.ndarray):
        self.hi = [a]
        self.lo = [a]
        span = 1
        while 2 * span <= len(a):
            hi, lo = self.hi[-1], self.lo[-1]
            self.hi.append(np.maximum(hi[:-span], hi[span:]))
            self.lo.append(np.minimum(lo[:-span], lo[span:]))
            span *= 2

    def spread_at(self, i: int, k: int) -> float:
        level = (k - i + 1).bit_length() - 1
        j = k - (1 << level) + 1
        hi, lo = self.hi[level], self.lo[level]
        return max(hi[i], hi[j]) - min(lo[i], lo[j])

    def spread(self, i: np.ndarray, k: np.ndarray) -> np.ndarray:
        """max - min over each [i, k]."""
        level = np.floor(np.log2(k - i + 1)).astype(int)
        j = k - (1 << level) + 1
        out = np.empty(i.shape)
        for lv in np.unique(level):
            sel = level == lv
            ii, jj = i[sel], j[sel]
            out[sel] = np.maximum(self.hi[lv][ii], self.hi[lv][jj]) - np.minimum(
                self.lo[lv][ii], self.lo[lv][jj]
            )
        return out


class DispersionScanner:
    """I-DT window scan with precomputation shared across ``d_max`` values.

    From the current start ``i`` the scan looks for the first index whose
    window can span more than ``t_min_ms`` with dispersion below ``d_max``.
    Dispersion only grows as the window extends, so that test reduces to the
    shortest qualifying window, and the window is then extended to the largest
    ``k`` still below ``d_max``. Samples never absorbed are saccades.
    """

    def __init__(self, series: GazeSeries, t_min_ms: float = 50.0):
        _require_length(series)
        _require_positive(t_min_ms, "t_min_ms")
        self.n = len(series)
        t = series.t
        idx = np.arange(self.n)
        k0 = np.searchsorted(t, t + t_min_ms, side="right")
        # guard the float comparison t[k] - t[i] > t_min against rounding in t + t_min
        inside = k0 < self.n
        short = np.zeros(self.n, dtype=bool)
        short[inside] = ~(t[k0[inside]] - t[idx[inside]] > t_min_ms)
        k0 = np.where(short, k0 + 1, k0)
        inside = k0 < self.n
        back = np.zeros(self.n, dtype=bool)
        cand = inside & (k0 - 1 > idx)
        back[cand] = t[k0[cand] - 1] - t[idx[cand]] > t_min_ms
        k0 = np.where(back, k0 - 1, k0)
        self.k0 = k0
        self.valid = k0 < self.n

        self._xs = _SparseTable(series.x)
        self._ys = _SparseTable(series.y)
        self.d0 = np.full(self.n, np.inf)
        vi = idx[self.valid]
        self.d0[vi] = self._xs.spread(vi, k0[vi]) + self._ys.spread(vi, k0[vi])

    def _disp(self, i: int, k: int) -> float:
        return self._xs.spread_at(i, k) + self._ys.spread_at(i, k)

    def _extend(self, i: int, d_max: float) -> int:
        lo = int(self.k0[i])  # known to satisfy
        hi = self.n - 1
        if self._disp(i, hi) < d_max:
            return hi
        # invariant: D(i, lo) < d_max <= D(i, hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._disp(i, mid) < d_max:
                lo = mid
            else:
                hi = mid
        return lo

    def windows(self, d_max: float) -> list[tuple[int, int]]:
        """Fixation windows as inclusive (start, end) index pairs, in scan order."""
        _require_positive(d_max, "d_max")
        starts = np.flatnonzero(self.valid & (self.d0 < d_max))
        found = []
        pos = 0
        while True:
            s = np.searchsorted(starts, pos)
            if s == len(starts):
                return found
            i = int(starts[s])
            k = self._extend(i, d_max)
            found.append((i, k))
            pos = k + 1

    def classify(self, d_max: float) -> LabelSeries:
        mask = np.ones(self.n, dtype=np.int8)
        for i, k in self.windows(d_max):
            mask[i : k + 1] = 0
        return LabelSeries(mask)


def idt_classify(series: GazeSeries, d_max: float, t_min_ms: float = 50.0) -> LabelSeries:
    _require_positive(d_max, "d_max")
    return DispersionScanner(series, t_min_ms).classify(d_max)


def reference_parse(
    series: GazeSeries,
    v_thresh_deg_s: float = 30.0,
    a_thresh_deg_s2: float = 8000.0,
    px_per_deg: float = DEFAULT_PX_PER_DEG,
) -> LabelSeries:
    """Velocity-or-acceleration saccade parser in degrees of visual angle.

    Acceleration at interval ``i`` is the forward difference of interval
    speeds over the spacing of their midpoints. Samples ``0..N-3`` are labeled
    directly; the last two inherit the label of sample ``N-3``.
    """
    if not px_per_deg > 0:
        raise NonPositiveConversion(f"px_per_deg must be > 0, got {px_per_deg}")
    _require_length(series, 3)
    v = kinematics(series, TimeUnit.PER_S).v / px_per_deg
    t_s = series.t / 1000.0
    mid = (t_s[:-1] + t_s[1:]) / 2
    acc = np.diff(v) / np.diff(mid)
    sacc = (v[:-1] >= v_thresh_deg_s) | (np.abs(acc) >= a_thresh_deg_s2)
    return LabelSeries.from_saccade_mask(np.concatenate((sacc, [sacc[-1], sacc[-1]])))
