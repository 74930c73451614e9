"""Mask-to-signal conversion.

The signal value of a column is the mean row of its ink pixels; empty
columns between occupied ones are linearly interpolated and flagged.
Amplitude and time scaling come from the grid calibration; the baseline
is the per-lead mode row (flat stretches dominate an ECG trace).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MissingLead, TooSparse
from .grid import GridCalibration
from .layout import LeadLayout, LeadMask
from .record import DigitisedRecord

# gaps wider than this fraction of the strip width are reported
WIDE_GAP_FRAC = 0.2


@dataclass(frozen=True)
class LeadTrace:
    lead: str
    col_start: int  # absolute image column of rows[0]
    rows: np.ndarray  # float row position per column
    gap_flags: np.ndarray  # True where the row was interpolated

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        gaps = np.asarray(self.gap_flags, dtype=bool)
        if rows.shape != gaps.shape or rows.ndim != 1:
            raise ValueError("rows and gap_flags must be 1-D and equal length")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "gap_flags", gaps)


def columns_to_trace(m: LeadMask) -> LeadTrace:
    """Mean ink row per column, linear interpolation across empty columns."""
    bits = m.mask.bits
    counts = bits.sum(axis=0)
    occupied = np.nonzero(counts > 0)[0]
    if len(occupied) < 2:
        raise TooSparse(f"lead {m.lead}: {len(occupied)} occupied columns")
    c0, c1 = int(occupied[0]), int(occupied[-1])

    row_idx = np.arange(bits.shape[0], dtype=np.float64)
    sums = row_idx @ bits  # per-column sum of ink row indices
    cols = np.arange(c0, c1 + 1)
    occ = counts[cols] > 0
    means = np.empty(len(cols), dtype=np.float64)
    means[occ] = sums[cols[occ]] / counts[cols[occ]]
    means[~occ] = np.interp(cols[~occ], cols[occ], means[occ])
    return LeadTrace(lead=m.lead, col_start=c0, rows=means, gap_flags=~occ)


def estimate_baseline(t: LeadTrace) -> float:
    """Mode of the row positions on a 1-px grid; ties -> median tied bin."""
    bins = np.floor(t.rows + 0.5).astype(np.int64)
    values, counts = np.unique(bins, return_counts=True)
    top = counts.max()
    tied = values[counts == top]
    return float(np.median(tied))


def baseline_is_ambiguous(t: LeadTrace) -> bool:
    """True when the row histogram is flat (no bin repeats)."""
    bins = np.floor(t.rows + 0.5).astype(np.int64)
    _, counts = np.unique(bins, return_counts=True)
    return int(counts.max()) <= 1 and len(counts) > 1


def trace_to_signal(t: LeadTrace, baseline_row: float, cal: GridCalibration) -> np.ndarray:
    """mV per column; image rows grow downward so up is positive."""
    return (baseline_row - t.rows) * cal.volts_per_pixel


def resample_to_rate(
    values: np.ndarray,
    col_start: int,
    cal: GridCalibration,
    sampling_rate_hz: float,
    target_len: int,
) -> np.ndarray:
    """Linear resample from the pixel-time grid onto k/rate, zeros outside.

    Column c sits at time (col_start + c) * seconds_per_pixel, with time 0
    at pixel column 0 of whatever frame col_start is expressed in.
    """
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 2:
        raise TooSparse("need at least 2 samples to resample")
    spp = cal.seconds_per_pixel
    src_t = (col_start + np.arange(len(values))) * spp
    dst_t = np.arange(target_len) / sampling_rate_hz
    return np.interp(dst_t, src_t, values, left=0.0, right=0.0)


def assemble_record(
    traces: list[LeadTrace],
    layout: LeadLayout,
    cal: GridCalibration,
    sampling_rate_hz: float,
    strict: bool = True,
) -> tuple[DigitisedRecord, list[str]]:
    """Per-lead signals on the target rate, assembled into one record.

    With strict=True a missing lead raises MissingLead; otherwise it is
    zero-filled and reported in the returned warnings.
    """
    by_key = {t.lead: t for t in traces}
    keys = layout.keys()
    missing = [k for k in keys if k not in by_key]
    if missing and strict:
        raise MissingLead(missing)

    warnings = [f"MissingLead: {k}" for k in missing]
    leads: dict[str, np.ndarray] = {}
    starts: dict[str, float] = {}
    for key in keys:
        n = layout.samples_for(key, sampling_rate_hz)
        starts[key] = layout.start_seconds(key)
        if key not in by_key:
            leads[key] = np.zeros(n)
            continue
        t = by_key[key]
        baseline = estimate_baseline(t)
        if baseline_is_ambiguous(t):
            baseline = layout.baseline_row(key)
            warnings.append(f"FlatRowHistogram: {key} (layout baseline used)")
        x0, x1 = layout.col_span(key)
        gap_run = _longest_gap(t.gap_flags)
        if gap_run > WIDE_GAP_FRAC * (x1 - x0):
            warnings.append(f"WideGap: {key} ({gap_run} px interpolated)")
        values = trace_to_signal(t, baseline, cal)
        leads[key] = resample_to_rate(values, t.col_start - x0, cal, sampling_rate_hz, n)

    rec = DigitisedRecord(
        sampling_rate_hz=sampling_rate_hz,
        record_seconds=layout.record_seconds,
        leads=leads,
        lead_start_seconds=starts,
    )
    return rec, warnings


def _longest_gap(gap_flags: np.ndarray) -> int:
    best = run = 0
    for g in gap_flags:
        run = run + 1 if g else 0
        best = max(best, run)
    return best
