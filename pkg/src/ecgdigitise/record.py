"""Digitised multi-lead records and their on-disk formats.

A record holds one mV sample array per key (segment leads plus
``rhythm_*`` strips). Segment arrays are local to their printed time
slot; ``lead_start_seconds`` places them on the record timeline.

Files: ``<record>.sig.csv`` (header ``time_s`` then one column per key;
cells outside a key's slot are empty) and ``<record>.meta.json``. CSV
values are fixed to 6 decimal places for golden-file stability.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EcgDigitiseError


@dataclass(frozen=True)
class DigitisedRecord:
    sampling_rate_hz: float
    record_seconds: float
    leads: dict[str, np.ndarray]  # key -> mV samples (slot-local)
    lead_start_seconds: dict[str, float]

    def __post_init__(self):
        if not self.sampling_rate_hz > 0:
            raise ValueError("sampling_rate_hz must be positive")
        if not self.record_seconds > 0:
            raise ValueError("record_seconds must be positive")
        leads = {k: np.asarray(v, dtype=np.float64) for k, v in self.leads.items()}
        for key, arr in leads.items():
            if key not in self.lead_start_seconds:
                raise ValueError(f"no start time for lead {key!r}")
            if arr.ndim != 1:
                raise ValueError(f"lead {key!r} samples must be 1-D")
        object.__setattr__(self, "leads", leads)

    @property
    def total_samples(self) -> int:
        return int(round(self.sampling_rate_hz * self.record_seconds))

    def start_index(self, key: str) -> int:
        return int(round(self.lead_start_seconds[key] * self.sampling_rate_hz))


def write_record(rec: DigitisedRecord, base_path, warnings: list[str] | None = None) -> tuple[Path, Path]:
    """Write <base>.sig.csv and <base>.meta.json; returns both paths."""
    base = Path(base_path)
    csv_path = Path(str(base) + ".sig.csv")
    meta_path = Path(str(base) + ".meta.json")

    n = rec.total_samples
    keys = list(rec.leads.keys())
    columns = {}
    for key in keys:
        col = [""] * n
        start = rec.start_index(key)
        samples = rec.leads[key]
        for i, v in enumerate(samples):
            j = start + i
            if 0 <= j < n:
                col[j] = f"{v:.6f}"
        columns[key] = col

    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time_s"] + keys)
        for j in range(n):
            t = j / rec.sampling_rate_hz
            writer.writerow([f"{t:.6f}"] + [columns[k][j] for k in keys])

    meta = {
        "sampling_rate_hz": rec.sampling_rate_hz,
        "record_seconds": rec.record_seconds,
        "lead_start_seconds": {k: rec.lead_start_seconds[k] for k in keys},
        "warnings": list(warnings or []),
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, meta_path


def read_record(base_path) -> tuple[DigitisedRecord, dict]:
    """Read a record written by write_record; returns (record, meta)."""
    base = Path(base_path)
    csv_path = Path(str(base) + ".sig.csv")
    meta_path = Path(str(base) + ".meta.json")
    if not csv_path.exists():
        raise FileNotFoundError(str(csv_path))
    if not meta_path.exists():
        raise FileNotFoundError(str(meta_path))
    with open(meta_path) as fh:
        meta = json.load(fh)

    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "time_s":
            raise EcgDigitiseError(f"{csv_path}: first column must be time_s")
        keys = header[1:]
        cells: list[list[str]] = [[] for _ in keys]
        for row in reader:
            for i in range(len(keys)):
                cells[i].append(row[1 + i] if 1 + i < len(row) else "")

    rate = float(meta["sampling_rate_hz"])
    seconds = float(meta["record_seconds"])
    starts = {k: float(v) for k, v in meta["lead_start_seconds"].items()}
    leads = {}
    for i, key in enumerate(keys):
        filled = [j for j, c in enumerate(cells[i]) if c != ""]
        if not filled:
            continue
        j0, j1 = filled[0], filled[-1]
        values = np.array([float(c) if c != "" else 0.0 for c in cells[i][j0 : j1 + 1]])
        leads[key] = values
        if key not in starts:
            starts[key] = j0 / rate
    rec = DigitisedRecord(
        sampling_rate_hz=rate,
        record_seconds=seconds,
        leads=leads,
        lead_start_seconds={k: starts[k] for k in leads},
    )
    return rec, meta
