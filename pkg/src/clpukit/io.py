"""CSV ingestion and export for meter, temperature, and outage records.

File formats (UTF-8, ISO-8601 UTC timestamps, exact headers):

* ``meters.csv``:      ``meter_id,timestamp,kwh``
* ``temperature.csv``: ``timestamp,celsius``
* ``outages.csv``:     ``case_id,start,end``

Parsers reject unknown columns; exporters write the same formats. kWh
readings convert to average kW over the 15-minute interval (kW = kWh * 4)
and the round trip is bit-exact because the factor is a power of two.
"""

from __future__ import annotations

import csv
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError
from .series import (
    KW_PER_KWH,
    STEP_15MIN,
    DemandSeries,
    Flag,
    OutageWindow,
    TemperatureSeries,
    align_series,
    mark_outages,
)

METER_HEADER = ["meter_id", "timestamp", "kwh"]
TEMPERATURE_HEADER = ["timestamp", "celsius"]
OUTAGE_HEADER = ["case_id", "start", "end"]


def parse_timestamp(text: str, line_no: int | None = None) -> datetime:
    """Parse an ISO-8601 UTC timestamp, accepting a trailing 'Z'."""
    try:
        ts = datetime.fromisoformat(text.strip().replace("Z", "+00:00"))
    except ValueError as exc:
        raise ParseError(f"bad timestamp {text!r}: {exc}", line_no) from None
    if ts.tzinfo is None:
        raise ParseError(f"timestamp {text!r} lacks a UTC offset", line_no)
    return ts.astimezone(timezone.utc)


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _check_header(row: list[str], expected: list[str], path) -> None:
    if row != expected:
        raise ParseError(
            f"{path}: header must be exactly {','.join(expected)}, got {','.join(row)}",
            line_no=1,
        )


def _parse_float(text: str, name: str, line_no: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"bad {name} {text!r}", line_no) from None
    if not np.isfinite(value):
        raise ParseError(f"{name} must be finite, got {text!r}", line_no)
    return value


def ingest_meter_csv(
    path,
    outages: Sequence[OutageWindow] = (),
    step: timedelta = STEP_15MIN,
) -> list[DemandSeries]:
    """Read a meter CSV into one aligned DemandSeries per meter id.

    Gaps become `missing` samples; slots intersecting a recorded outage
    window become `outage` with value 0 (the outage record is authoritative
    over the energy reading). Duplicate (meter_id, timestamp) rows and
    timestamps off the 15-minute lattice are rejected.
    """
    readings: dict[str, dict[datetime, float]] = {}
    anchor: datetime | None = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file", line_no=1) from None
        _check_header(header, METER_HEADER, path)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line_no)
            meter_id, ts_text, kwh_text = row
            ts = parse_timestamp(ts_text, line_no)
            kwh = _parse_float(kwh_text, "kwh", line_no)
            if anchor is None:
                anchor = ts
            elif (ts - anchor) % step != timedelta(0):
                raise ParseError(
                    f"timestamp {ts_text} is off the {step} lattice", line_no
                )
            per_meter = readings.setdefault(meter_id, {})
            if ts in per_meter:
                raise ParseError(f"duplicate reading for ({meter_id}, {ts_text})", line_no)
            per_meter[ts] = kwh
    if not readings:
        raise ParseError(f"{path}: no data rows", line_no=2)

    series = []
    for meter_id in sorted(readings):
        samples = readings[meter_id]
        times = sorted(samples)
        start, end = times[0], times[-1] + step
        n = int((end - start) // step)
        values = np.full(n, np.nan)
        flags = np.full(n, Flag.MISSING, dtype=np.int8)
        for ts in times:
            i = int((ts - start) // step)
            values[i] = samples[ts] * KW_PER_KWH
            flags[i] = Flag.NORMAL
        series.append(DemandSeries(meter_id, start, values, flags, step))
    series = align_series(series)
    if outages:
        series = [mark_outages(s, outages) for s in series]
    return series


def ingest_temperature_csv(path, step: timedelta = STEP_15MIN) -> TemperatureSeries:
    rows: dict[datetime, float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file", line_no=1) from None
        _check_header(header, TEMPERATURE_HEADER, path)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise ParseError(f"expected 2 fields, got {len(row)}", line_no)
            ts = parse_timestamp(row[0], line_no)
            if ts in rows:
                raise ParseError(f"duplicate temperature at {row[0]}", line_no)
            rows[ts] = _parse_float(row[1], "celsius", line_no)
    if not rows:
        raise ParseError(f"{path}: no data rows", line_no=2)
    times = sorted(rows)
    start = times[0]
    n = int((times[-1] - start) // step) + 1
    values = np.full(n, np.nan)
    for ts in times:
        delta = ts - start
        if delta % step != timedelta(0):
            raise ParseError(f"temperature timestamp {ts} off the {step} lattice")
        values[int(delta // step)] = rows[ts]
    if np.any(np.isnan(values)):
        # temperature gaps are interpolated; NOAA-style feeds are near-continuous
        idx = np.arange(n)
        good = ~np.isnan(values)
        values = np.interp(idx, idx[good], values[good])
    return TemperatureSeries(start, values, step)


def ingest_outage_csv(path) -> list[OutageWindow]:
    windows = []
    seen = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file", line_no=1) from None
        _check_header(header, OUTAGE_HEADER, path)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 fields, got {len(row)}", line_no)
            case_id, start_text, end_text = row
            if case_id in seen:
                raise ParseError(f"duplicate case_id {case_id!r}", line_no)
            seen.add(case_id)
            start = parse_timestamp(start_text, line_no)
            end = parse_timestamp(end_text, line_no)
            if end <= start:
                raise ParseError(f"case {case_id}: end must follow start", line_no)
            windows.append(OutageWindow(case_id, start, end))
    return windows


def export_meter_csv(path, series: Iterable[DemandSeries]) -> None:
    """Write meter readings; missing slots are skipped (that is the gap)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(METER_HEADER)
        for s in series:
            keep = np.flatnonzero(s.flags != Flag.MISSING)
            for i in keep:
                writer.writerow(
                    [s.entity_id, format_timestamp(s.time_at(int(i))), repr(float(s.values[i]) / KW_PER_KWH)]
                )


def export_temperature_csv(path, temp: TemperatureSeries) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TEMPERATURE_HEADER)
        for i, v in enumerate(temp.values):
            writer.writerow([format_timestamp(temp.start + i * temp.step), repr(float(v))])


def export_outage_csv(path, windows: Iterable[OutageWindow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(OUTAGE_HEADER)
        for w in windows:
            writer.writerow([w.case_id, format_timestamp(w.start), format_timestamp(w.end)])
