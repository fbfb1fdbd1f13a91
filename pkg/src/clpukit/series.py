"""Time-aligned demand and temperature series with per-sample quality flags.

All demand values are average kW over a fixed metering interval (15 minutes
by default); meters record kWh, which converts as kW = kWh * 4 for that
interval. Timestamps are timezone-aware UTC and mark the *start* of each
interval.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from typing import Sequence

import numpy as np

from .errors import AlignmentError

STEP_15MIN = timedelta(minutes=15)
KW_PER_KWH = 4.0  # fixed by the 15-minute metering interval


class Flag(enum.IntEnum):
    NORMAL = 0
    OUTAGE = 1
    MISSING = 2


def _check_utc(ts: datetime, name: str) -> datetime:
    if ts.tzinfo is None or ts.utcoffset() != timedelta(0):
        raise ValueError(f"{name} must be timezone-aware UTC, got {ts!r}")
    return ts


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DemandSeries:
    """Uniformly sampled demand readings (kW) with per-sample flags.

    Invariants enforced at construction: values/flags have equal length,
    `outage` samples are exactly 0 kW, `normal` samples are finite and
    non-negative. `missing` samples carry NaN.
    """

    entity_id: str
    start: datetime
    values: np.ndarray
    flags: np.ndarray
    step: timedelta = STEP_15MIN

    def __post_init__(self):
        _check_utc(self.start, "start")
        values = np.ascontiguousarray(self.values, dtype=float)
        flags = np.ascontiguousarray(self.flags, dtype=np.int8)
        if values.shape != flags.shape or values.ndim != 1:
            raise ValueError("values and flags must be equal-length 1-D arrays")
        if self.step <= timedelta(0):
            raise ValueError("step must be positive")
        normal = flags == Flag.NORMAL
        outage = flags == Flag.OUTAGE
        if np.any(outage & (values != 0.0)):
            raise ValueError("outage samples must have value 0")
        v = values[normal]
        if v.size and (not np.all(np.isfinite(v)) or np.any(v < 0)):
            raise ValueError("normal samples must be finite and >= 0 kW")
        object.__setattr__(self, "values", _freeze(values))
        object.__setattr__(self, "flags", _freeze(flags))

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def end(self) -> datetime:
        """Exclusive end of the covered span."""
        return self.start + len(self) * self.step

    def time_at(self, i: int) -> datetime:
        return self.start + i * self.step

    def index_of(self, ts: datetime) -> int:
        """Index of the slot starting exactly at ``ts``."""
        delta = ts - self.start
        q, r = divmod(delta, self.step)
        if r != timedelta(0):
            raise AlignmentError(f"{ts} is not on the {self.step} lattice of {self.start}")
        if not 0 <= q < len(self):
            raise AlignmentError(f"{ts} is outside the series span")
        return int(q)

    def slot_at_or_after(self, ts: datetime) -> int:
        """Index of the first complete interval starting at or after ``ts``."""
        delta = ts - self.start
        q, r = divmod(delta, self.step)
        if r != timedelta(0):
            q += 1
        if not 0 <= q < len(self):
            raise AlignmentError(f"no complete interval at or after {ts}")
        return int(q)

    def with_entity_id(self, entity_id: str) -> "DemandSeries":
        return replace(self, entity_id=entity_id)


@dataclass(frozen=True)
class TemperatureSeries:
    """Ambient temperature samples (deg C) on the same clock as demand."""

    start: datetime
    values: np.ndarray
    step: timedelta = STEP_15MIN

    def __post_init__(self):
        _check_utc(self.start, "start")
        values = np.ascontiguousarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("values must be a 1-D array")
        if values.size and not np.all(np.isfinite(values)):
            raise ValueError("temperature values must be finite")
        if self.step <= timedelta(0):
            raise ValueError("step must be positive")
        object.__setattr__(self, "values", _freeze(values))

    def __len__(self) -> int:
        return self.values.shape[0]

    def index_of(self, ts: datetime) -> int:
        delta = ts - self.start
        q, r = divmod(delta, self.step)
        if r != timedelta(0):
            raise AlignmentError(f"{ts} is not on the {self.step} lattice of {self.start}")
        if not 0 <= q < len(self):
            raise AlignmentError(f"{ts} is outside the temperature span")
        return int(q)

    def aligned_to(self, demand: DemandSeries) -> "TemperatureSeries":
        """Slice to the demand series' clock; errors if not fully covered."""
        if self.step != demand.step:
            raise AlignmentError("temperature step differs from demand step")
        i0 = self.index_of(demand.start)
        if i0 + len(demand) > len(self):
            raise AlignmentError("temperature series does not cover the demand span")
        return TemperatureSeries(demand.start, self.values[i0 : i0 + len(demand)], self.step)


@dataclass(frozen=True)
class OutageWindow:
    """Recorded outage interval [start, end) as kept by the meter head-end."""

    case_id: str
    start: datetime
    end: datetime

    def __post_init__(self):
        _check_utc(self.start, "start")
        _check_utc(self.end, "end")
        if self.end < self.start:
            raise ValueError(f"outage {self.case_id}: end precedes start")

    @property
    def duration_min(self) -> float:
        return (self.end - self.start).total_seconds() / 60.0


@dataclass(frozen=True)
class OutageCase:
    """One historical outage with its restoration-instant observables."""

    case_id: str
    t0: datetime
    tr: datetime
    duration_min: float
    temp_c: float
    p_u: float

    def __post_init__(self):
        _check_utc(self.t0, "t0")
        _check_utc(self.tr, "tr")
        if self.tr <= self.t0:
            raise ValueError(f"case {self.case_id}: restoration must follow outage start")
        expected = (self.tr - self.t0).total_seconds() / 60.0
        if abs(self.duration_min - expected) > 1e-9:
            raise ValueError(
                f"case {self.case_id}: duration_min {self.duration_min} "
                f"does not equal tr - t0 ({expected} min)"
            )
        if not self.p_u > 0:
            raise ValueError(f"case {self.case_id}: p_u must be positive")


def check_same_clock(series: Sequence[DemandSeries]):
    if not series:
        raise ValueError("need at least one series")
    first = series[0]
    for s in series[1:]:
        if s.start != first.start or s.step != first.step or len(s) != len(first):
            raise AlignmentError(
                f"series {s.entity_id!r} clock differs from {first.entity_id!r}"
            )


def aggregate_feeder(customers: Sequence[DemandSeries], entity_id: str = "feeder") -> DemandSeries:
    """Element-wise sum of time-aligned customer series.

    A slot is `normal` only when every input is `normal`; it is `outage`
    when any input is `outage`; otherwise `missing`.
    """
    check_same_clock(customers)
    stacked = np.stack([c.values for c in customers])
    flags = np.stack([c.flags for c in customers])
    out_flags = np.full(stacked.shape[1], Flag.MISSING, dtype=np.int8)
    out_flags[np.all(flags == Flag.NORMAL, axis=0)] = Flag.NORMAL
    out_flags[np.any(flags == Flag.OUTAGE, axis=0)] = Flag.OUTAGE
    values = np.where(
        out_flags == Flag.NORMAL,
        np.nansum(np.where(flags == Flag.NORMAL, stacked, 0.0), axis=0),
        np.where(out_flags == Flag.OUTAGE, 0.0, np.nan),
    )
    return DemandSeries(entity_id, customers[0].start, values, out_flags, customers[0].step)


def mark_outages(series: DemandSeries, windows: Sequence[OutageWindow]) -> DemandSeries:
    """Flag every slot whose interval intersects a recorded outage window.

    The outage record is authoritative: intersecting slots are zeroed even
    if the meter reported energy for the partially covered interval.
    """
    values = series.values.copy()
    flags = series.flags.copy()
    n = len(series)
    for w in windows:
        if w.end <= series.start or w.start >= series.end or w.end == w.start:
            continue
        # slot i intersects [w.start, w.end) iff start+i*step < w.end and
        # start+(i+1)*step > w.start
        first = int((w.start - series.start) // series.step)
        if series.start + (first + 1) * series.step <= w.start:
            first += 1
        first = max(first, 0)
        last = int(-(-(w.end - series.start) // series.step))  # ceil, exclusive
        last = min(last, n)
        if first < last:
            values[first:last] = 0.0
            flags[first:last] = Flag.OUTAGE
    return DemandSeries(series.entity_id, series.start, values, flags, series.step)


def align_series(
    series: Sequence[DemandSeries],
    start: datetime | None = None,
    end: datetime | None = None,
) -> list[DemandSeries]:
    """Pad/trim series onto a common [start, end) envelope with missing flags."""
    if not series:
        return []
    step = series[0].step
    for s in series:
        if s.step != step:
            raise AlignmentError("series steps differ")
        if (s.start - series[0].start) % step != timedelta(0):
            raise AlignmentError(f"series {s.entity_id!r} is off the common lattice")
    start = start or min(s.start for s in series)
    end = end or max(s.end for s in series)
    n = int((end - start) // step)
    out = []
    for s in series:
        values = np.full(n, np.nan)
        flags = np.full(n, Flag.MISSING, dtype=np.int8)
        offset = int((s.start - start) // step)
        lo = max(0, offset)
        hi = min(n, offset + len(s))
        if hi > lo:
            values[lo:hi] = s.values[lo - offset : hi - offset]
            flags[lo:hi] = s.flags[lo - offset : hi - offset]
        out.append(DemandSeries(s.entity_id, start, values, flags, step))
    return out
