"""Grid-code classification of frequency traces and quantitative metrics.

The threshold table lists, per row, a below-nominal and an above-nominal
frequency interval plus the longest permitted dwell (None = continuous
operation).  The default table is the Saudi grid code: continuous inside
58.8-60.5 Hz, 30 minutes inside 57.5-58.7 / 60.6-61.5 Hz, 30 seconds inside
57.0-57.4 / 61.6-62.5 Hz, never outside 57.0-62.5 Hz.

Band membership uses the rows' outer edges, so the 0.1 Hz gaps in the
printed interval bounds (58.7 vs 58.8 etc.) never leave a sample
unclassified: a sample below the continuous band and at or above 57.5
belongs to the 30-minute band.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ThresholdRow",
    "ThresholdTable",
    "BandReport",
    "TraceMetrics",
    "SAUDI_TABLE",
    "classify",
    "metrics",
    "load_threshold_table",
]

#: peak-to-peak spread (Hz) of the tail window below which a steady state
#: is reported, and the tail fraction of the trace used for it
STEADY_SPREAD_HZ = 0.01
STEADY_TAIL_FRACTION = 0.05


@dataclass(frozen=True)
class ThresholdRow:
    below: tuple[float, float]
    above: tuple[float, float]
    limit_s: float | None  # None: continuous operation permitted


@dataclass(frozen=True)
class ThresholdTable:
    rows: tuple[ThresholdRow, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("threshold table needs at least one row")
        for r in self.rows:
            if r.below[0] > r.below[1] or r.above[0] > r.above[1]:
                raise ValueError(f"malformed interval in row {r}")
        lows = [r.below[0] for r in self.rows]
        highs = [r.above[1] for r in self.rows]
        if any(b >= a for a, b in zip(lows, lows[1:])) or \
                any(b <= a for a, b in zip(highs, highs[1:])):
            raise ValueError("rows must be ordered outward from nominal")
        if self.rows[0].limit_s is not None:
            raise ValueError("the innermost row must be the continuous band")

    @property
    def continuous_band(self) -> tuple[float, float]:
        return self.rows[0].below[0], self.rows[0].above[1]

    @property
    def hard_limits(self) -> tuple[float, float]:
        return self.rows[-1].below[0], self.rows[-1].above[1]

    def band_of(self, f: float) -> int:
        """Row index whose band contains frequency f, or -1 outside the
        outermost operating range."""
        lo, hi = self.hard_limits
        if f < lo or f > hi:
            return -1
        for k, row in enumerate(self.rows):
            if row.below[0] <= f <= row.above[1]:
                return k
        return -1


SAUDI_TABLE = ThresholdTable(rows=(
    ThresholdRow(below=(58.8, 60.0), above=(60.0, 60.5), limit_s=None),
    ThresholdRow(below=(57.5, 58.7), above=(60.6, 61.5), limit_s=1800.0),
    ThresholdRow(below=(57.0, 57.4), above=(61.6, 62.5), limit_s=30.0),
))


@dataclass(frozen=True)
class BandReport:
    """Cumulative dwell per table row plus the out-of-range total."""

    dwell_s: tuple[float, ...]
    out_of_range_s: float
    verdict: str  # compliant | violation


@dataclass(frozen=True)
class TraceMetrics:
    steady_state_hz: float | None
    settling_time_s: float | None
    nadir_hz: float
    nadir_time_s: float
    zenith_hz: float
    zenith_time_s: float
    verdict: str  # compliant | violation | diverged


def classify(freq_hz, dt: float, table: ThresholdTable = SAUDI_TABLE) -> BandReport:
    """Band occupancy of a uniformly sampled frequency series.

    A violation is any excursion beyond the outermost range, or a cumulative
    dwell in a limited band exceeding that band's permitted duration.
    """
    f = np.asarray(freq_hz, dtype=float)
    if f.size == 0:
        raise ValueError("empty trace")
    if dt <= 0:
        raise ValueError("dt must be positive")
    bands = np.array([table.band_of(v) for v in f])
    dwell = tuple(float(np.count_nonzero(bands == k) * dt)
                  for k in range(len(table.rows)))
    out = float(np.count_nonzero(bands < 0) * dt)
    violated = out > 0 or any(
        row.limit_s is not None and d > row.limit_s
        for row, d in zip(table.rows, dwell))
    return BandReport(dwell_s=dwell, out_of_range_s=out,
                      verdict="violation" if violated else "compliant")


def metrics(freq_hz, time, table: ThresholdTable = SAUDI_TABLE,
            settling_band: tuple[float, float] | None = None,
            diverged: bool = False) -> TraceMetrics:
    """Quantitative trace metrics.

    Steady state is the mean of the final 5% of samples when their
    peak-to-peak spread stays below 0.01 Hz, otherwise None (the "-" table
    convention).  Settling time is the last entry into the acceptable band
    (default: the continuous band) with no later exit: 0 when the trace
    never leaves the band, None when it never returns.  Nadir and zenith
    report first-attainment times.
    """
    f = np.asarray(freq_hz, dtype=float)
    t = np.asarray(time, dtype=float)
    if f.size == 0:
        raise ValueError("empty trace")
    if f.shape != t.shape:
        raise ValueError("frequency and time series must share the grid")

    n_tail = max(1, int(round(STEADY_TAIL_FRACTION * f.size)))
    tail = f[-n_tail:]
    steady = float(tail.mean()) if np.ptp(tail) < STEADY_SPREAD_HZ else None

    lo, hi = settling_band if settling_band is not None \
        else table.continuous_band
    outside = (f < lo) | (f > hi)
    if outside[-1]:
        settling = None
    elif not outside.any():
        settling = 0.0
    else:
        settling = float(t[int(np.flatnonzero(outside)[-1]) + 1])

    i_min = int(np.argmin(f))
    i_max = int(np.argmax(f))
    if diverged:
        verdict = "diverged"
    else:
        dt = float(t[1] - t[0]) if t.size > 1 else 1.0
        verdict = classify(f, dt, table).verdict
    return TraceMetrics(
        steady_state_hz=steady, settling_time_s=settling,
        nadir_hz=float(f[i_min]), nadir_time_s=float(t[i_min]),
        zenith_hz=float(f[i_max]), zenith_time_s=float(t[i_max]),
        verdict=verdict)


def load_threshold_table(path) -> ThresholdTable:
    """Read a threshold table from CSV with columns below_lo_hz,
    below_hi_hz, above_lo_hz, above_hi_hz, limit_s (empty = continuous)."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"below_lo_hz", "below_hi_hz", "above_lo_hz",
                    "above_hi_hz", "limit_s"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(
                f"threshold file {path} must have columns {sorted(required)}")
        for rec in reader:
            limit = rec["limit_s"].strip()
            rows.append(ThresholdRow(
                below=(float(rec["below_lo_hz"]), float(rec["below_hi_hz"])),
                above=(float(rec["above_lo_hz"]), float(rec["above_hi_hz"])),
                limit_s=float(limit) if limit else None))
    return ThresholdTable(rows=tuple(rows))
