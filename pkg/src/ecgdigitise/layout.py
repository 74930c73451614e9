"""Printed lead geometry: which lead sits where, and for which time span.

A layout is logical (rows x cols of segment leads plus full-width rhythm
strips) until it is bound to a pixel region — the extent of the printed
grid. The renderer binds it to the region it draws; the digitiser binds
it to the region it detects. Rhythm strips are keyed ``rhythm_<lead>`` so
a lead printed both as a segment and as a rhythm strip stays addressable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import UnboundLayout, UnknownLeadName
from .raster import BinaryMask

RHYTHM_PREFIX = "rhythm_"


@dataclass(frozen=True)
class Region:
    """Half-open pixel box [x0, x1) x [y0, y1)."""

    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def width(self) -> int:
        return self.x1 - self.x0

    @property
    def height(self) -> int:
        return self.y1 - self.y0


@dataclass(frozen=True)
class LeadLayout:
    rows: int
    cols: int
    lead_order: tuple[str, ...]  # row-major, length rows*cols
    rhythm_leads: tuple[str, ...]
    record_seconds: float
    region: Region | None = None

    def __post_init__(self):
        if len(self.lead_order) != self.rows * self.cols:
            raise ValueError("lead_order length must equal rows*cols")
        if len(set(self.lead_order)) != len(self.lead_order):
            raise ValueError("duplicate lead in lead_order")
        if len(set(self.rhythm_leads)) != len(self.rhythm_leads):
            raise ValueError("duplicate rhythm lead")
        for lead in self.rhythm_leads:
            if lead not in self.lead_order:
                raise ValueError(f"rhythm lead {lead!r} not in lead_order")

    # --- logical geometry ---

    @property
    def seconds_per_segment(self) -> float:
        return self.record_seconds / self.cols

    @property
    def band_count(self) -> int:
        return self.rows + len(self.rhythm_leads)

    def keys(self) -> list[str]:
        """All mask/record keys: segment leads then rhythm strips."""
        return list(self.lead_order) + [RHYTHM_PREFIX + l for l in self.rhythm_leads]

    def is_rhythm_key(self, key: str) -> bool:
        return key.startswith(RHYTHM_PREFIX)

    def base_lead(self, key: str) -> str:
        return key[len(RHYTHM_PREFIX):] if self.is_rhythm_key(key) else key

    def band_index(self, key: str) -> int:
        if self.is_rhythm_key(key):
            lead = self.base_lead(key)
            if lead not in self.rhythm_leads:
                raise UnknownLeadName(key)
            return self.rows + self.rhythm_leads.index(lead)
        if key not in self.lead_order:
            raise UnknownLeadName(key)
        return self.lead_order.index(key) // self.cols

    def col_index(self, key: str) -> int | None:
        """Column of a segment lead; None for rhythm strips."""
        if self.is_rhythm_key(key):
            return None
        if key not in self.lead_order:
            raise UnknownLeadName(key)
        return self.lead_order.index(key) % self.cols

    def time_span(self, key: str) -> tuple[float, float]:
        """[start, end) seconds covered by this key's printed strip."""
        col = self.col_index(key)
        if col is None:
            return (0.0, self.record_seconds)
        return (col * self.seconds_per_segment, (col + 1) * self.seconds_per_segment)

    def start_seconds(self, key: str) -> float:
        return self.time_span(key)[0]

    def samples_for(self, key: str, sampling_rate_hz: float) -> int:
        start, end = self.time_span(key)
        return int(round(sampling_rate_hz * (end - start)))

    # --- pixel geometry (requires binding) ---

    def with_region(self, region: Region) -> "LeadLayout":
        return replace(self, region=region)

    def _require_region(self) -> Region:
        if self.region is None:
            raise UnboundLayout("layout is not bound to a pixel region")
        return self.region

    def row_band(self, key: str) -> tuple[int, int]:
        """[y0, y1) pixel rows of this key's band."""
        reg = self._require_region()
        b = self.band_index(key)
        edges = np.linspace(reg.y0, reg.y1, self.band_count + 1)
        return (int(round(edges[b])), int(round(edges[b + 1])))

    def col_span(self, key: str) -> tuple[int, int]:
        """[x0, x1) pixel columns of this key's strip."""
        reg = self._require_region()
        col = self.col_index(key)
        if col is None:
            return (reg.x0, reg.x1)
        edges = np.linspace(reg.x0, reg.x1, self.cols + 1)
        return (int(round(edges[col])), int(round(edges[col + 1])))

    def baseline_row(self, key: str) -> float:
        y0, y1 = self.row_band(key)
        return (y0 + y1 - 1) / 2.0

    def band_of_row(self, row: int) -> int:
        """Band whose baseline is nearest; ties go to the upper band."""
        reg = self._require_region()
        band_h = reg.height / self.band_count
        centres = reg.y0 + (np.arange(self.band_count) + 0.5) * band_h
        dists = np.abs(centres - row)
        return int(np.argmin(dists))  # argmin takes the first (upper) tie


def default_layout() -> LeadLayout:
    """Standard 3x4 printout plus one rhythm strip of lead II; 10 s record."""
    return LeadLayout(
        rows=3,
        cols=4,
        lead_order=(
            "I", "aVR", "V1", "V4",
            "II", "aVL", "V2", "V5",
            "III", "aVF", "V3", "V6",
        ),
        rhythm_leads=("II",),
        record_seconds=10.0,
    )


LAYOUTS = {"standard_3x4": default_layout}


@dataclass(frozen=True)
class LeadMask:
    """Per-lead ink mask in full-image coordinates.

    Construction clips pixels outside the lead's layout region and records
    how many were dropped.
    """

    lead: str
    mask: BinaryMask
    density: str  # "sparse" | "dense"
    clipped_count: int = 0

    def __post_init__(self):
        if self.density not in ("sparse", "dense"):
            raise ValueError(f"density must be sparse or dense, got {self.density!r}")


def make_lead_mask(key: str, bits: np.ndarray, layout: LeadLayout, density: str) -> LeadMask:
    """Build a LeadMask, clipping bits outside the key's band and span."""
    if key not in layout.keys():
        raise UnknownLeadName(key)
    y0, y1 = layout.row_band(key)
    x0, x1 = layout.col_span(key)
    bits = np.asarray(bits, dtype=bool)
    clipped = bits.copy()
    clipped[:y0, :] = False
    clipped[y1:, :] = False
    clipped[:, :x0] = False
    clipped[:, x1:] = False
    dropped = int(bits.sum() - clipped.sum())
    return LeadMask(lead=key, mask=BinaryMask(clipped), density=density, clipped_count=dropped)
