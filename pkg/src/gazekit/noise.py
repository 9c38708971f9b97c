"""Seeded isotropic Gaussian spatial noise.

The stream is portable by construction:

* bit source: Philox4x64-10 keyed with the 64-bit seed (second key word 0);
  block ``b = 1, 2, ...`` encrypts the counter ``(b, 0, 0, 0)`` and yields
  four 64-bit words in order (``numpy.random.Philox(key=seed).random_raw``);
* uniforms from consecutive word pairs ``(r1, r2)``:
  ``u1 = ((r1 >> 11) + 1) * 2**-53`` in (0, 1] and ``u2 = (r2 >> 11) * 2**-53``;
* Box-Muller: ``eps_x = sigma * sqrt(-2 ln u1) * cos(2 pi u2)`` and
  ``eps_y = sigma * sqrt(-2 ln u1) * sin(2 pi u2)``; sample ``i`` consumes
  words ``2i`` and ``2i + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gazekit.errors import InputError
from gazekit.model import GazeSeries

DEFAULT_SIGMAS = (0.0, 1.0, 2.0, 5.0, 10.0, 30.0, 40.0, 50.0)

_TWO_M53 = 2.0**-53


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise InputError(f"sigma must be >= 0, got {self.sigma}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be an unsigned 64-bit integer, got {self.seed}")

    def to_dict(self) -> dict:
        return {"sigma": self.sigma, "seed": int(self.seed)}

    @classmethod
    def from_dict(cls, d: dict) -> NoiseSpec:
        return cls(float(d["sigma"]), int(d["seed"]))


def standard_normal_pairs(n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """``n`` independent N(0, 1) pairs from the documented Philox/Box-Muller stream."""
    raw = np.random.Philox(key=int(seed)).random_raw(2 * n)
    u1 = ((raw[0::2] >> np.uint64(11)) + np.uint64(1)).astype(float) * _TWO_M53
    u2 = (raw[1::2] >> np.uint64(11)).astype(float) * _TWO_M53
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return radius * np.cos(angle), radius * np.sin(angle)


def add_noise(series: GazeSeries, spec: NoiseSpec) -> GazeSeries:
    if spec.sigma == 0:
        return series
    ex, ey = standard_normal_pairs(len(series), spec.seed)
    return series.with_positions(series.x + spec.sigma * ex, series.y + spec.sigma * ey)


def level_seed(seed: int, level_index: int) -> int:
    """Seed for the ``level_index``-th noise level of a sweep."""
    return (int(seed) + int(level_index)) % 2**64
