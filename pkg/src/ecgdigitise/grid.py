"""Grid pitch estimation and physical scale factors.

Standard ECG paper conventions are the defaults: 25 mm/s, 10 mm/mV, one
small square = 1 mm. The pitch (pixels per small square) is recovered
from the autocorrelation of the row-wise darkness projection of a
deskewed image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoGridDetected, NonPositiveScale
from .raster import RasterImage

DEFAULT_MM_PER_MV = 10.0
DEFAULT_MM_PER_SECOND = 25.0


@dataclass(frozen=True)
class GridCalibration:
    pitch_px_per_mm: float
    mm_per_mV: float = DEFAULT_MM_PER_MV
    mm_per_second: float = DEFAULT_MM_PER_SECOND

    def __post_init__(self):
        for name in ("pitch_px_per_mm", "mm_per_mV", "mm_per_second"):
            if not getattr(self, name) > 0:
                raise NonPositiveScale(f"{name} must be positive")

    @property
    def volts_per_pixel(self) -> float:
        """mV per vertical pixel."""
        return 1.0 / (self.pitch_px_per_mm * self.mm_per_mV)

    @property
    def seconds_per_pixel(self) -> float:
        return 1.0 / (self.pitch_px_per_mm * self.mm_per_second)


def make_calibration(
    pitch: float,
    mm_per_mV: float = DEFAULT_MM_PER_MV,
    mm_per_second: float = DEFAULT_MM_PER_SECOND,
) -> GridCalibration:
    return GridCalibration(pitch, mm_per_mV, mm_per_second)


def _local_maxima(ac: np.ndarray) -> np.ndarray:
    """Indices of interior strict-or-plateau local maxima."""
    idx = np.arange(1, len(ac) - 1)
    keep = (ac[idx] >= ac[idx - 1]) & (ac[idx] >= ac[idx + 1])
    return idx[keep]


def estimate_grid_pitch(
    img: RasterImage,
    *,
    min_lag: int = 3,
    window_frac: float = 0.05,
    noise_mult: float = 3.0,
) -> float:
    """Pixels per 1 mm small square, from the row projection autocorrelation.

    Dominant peaks inside [min_lag, window_frac*height] are candidates; the
    smallest lag whose integer multiples also land on peaks wins (this
    rejects the 5 mm bold-line harmonic). The winning lag is refined by
    parabolic interpolation.
    """
    darkness = 1.0 - img.luminance
    profile = darkness.sum(axis=1)
    profile = profile - profile.mean()

    hi = int(np.floor(window_frac * img.height))
    if hi < min_lag:
        raise NoGridDetected(f"image too short for pitch window [{min_lag}, {hi}]")

    ac = np.correlate(profile, profile, mode="full")[len(profile) - 1 :]
    window = ac[: hi + 2]
    noise_floor = float(np.median(np.abs(ac[min_lag : hi + 1])))
    if noise_floor <= 0:
        raise NoGridDetected("flat projection profile")

    maxima = _local_maxima(window)
    candidates = [
        int(m)
        for m in maxima
        if min_lag <= m <= hi and ac[m] > noise_mult * noise_floor and ac[m] > 0
    ]
    if not candidates:
        raise NoGridDetected("no autocorrelation peak above the noise floor")

    all_maxima = set(int(m) for m in _local_maxima(ac))

    def multiples_peak(lag: int) -> bool:
        tol = max(1, int(round(0.2 * lag)))
        for mult in (2, 3):
            target = mult * lag
            if target >= len(ac) - 1:
                continue
            if not any((target + d) in all_maxima for d in range(-tol, tol + 1)):
                return False
        return True

    chosen = None
    for lag in sorted(candidates):
        if multiples_peak(lag):
            chosen = lag
            break
    if chosen is None:
        raise NoGridDetected("no candidate peak has harmonic support")

    # parabolic refinement around the integer lag
    if 1 <= chosen <= len(ac) - 2:
        c0, c1, c2 = float(ac[chosen - 1]), float(ac[chosen]), float(ac[chosen + 1])
        denom = c0 - 2.0 * c1 + c2
        if denom < 0:
            delta = 0.5 * (c0 - c2) / denom
            chosen = chosen + max(-0.5, min(0.5, delta))
    return float(chosen)
