"""Season / day-type partitioning of demand history.

Meteorological seasons (DJF, MAM, JJA, SON) and a working/non-working day
split (Mon-Fri minus an optional holiday list) yield 8 partitions that
jointly cover every `normal` sample exactly once.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import date, datetime
from typing import Collection, Sequence

import numpy as np

from .series import DemandSeries, Flag


class Season(enum.Enum):
    WINTER = "winter"
    SPRING = "spring"
    SUMMER = "summer"
    FALL = "fall"


class DayType(enum.Enum):
    WORKING = "working"
    NONWORKING = "nonworking"


_SEASON_BY_MONTH = {
    12: Season.WINTER, 1: Season.WINTER, 2: Season.WINTER,
    3: Season.SPRING, 4: Season.SPRING, 5: Season.SPRING,
    6: Season.SUMMER, 7: Season.SUMMER, 8: Season.SUMMER,
    9: Season.FALL, 10: Season.FALL, 11: Season.FALL,
}


def season_of(ts: datetime) -> Season:
    return _SEASON_BY_MONTH[ts.month]


def day_type_of(ts: datetime, holidays: Collection[date] = ()) -> DayType:
    if ts.weekday() >= 5 or ts.date() in holidays:
        return DayType.NONWORKING
    return DayType.WORKING


@dataclass(frozen=True)
class DatasetPartition:
    """Indices of the `normal` slots belonging to one (season, day type)."""

    season: Season
    day_type: DayType
    indices: np.ndarray

    def __post_init__(self):
        idx = np.ascontiguousarray(self.indices, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    @property
    def key(self) -> str:
        return f"{self.season.value}/{self.day_type.value}"

    def __len__(self) -> int:
        return self.indices.shape[0]


def partition(feeder: DemandSeries, holidays: Collection[date] = ()) -> list[DatasetPartition]:
    """Split the series' `normal` slots into the 8 season/day-type buckets."""
    holidays = set(holidays)
    n = len(feeder)
    seasons = np.empty(n, dtype=object)
    day_types = np.empty(n, dtype=object)
    # slot attributes only change at day boundaries; classify per day
    i = 0
    while i < n:
        ts = feeder.time_at(i)
        day_end = min(n, i + int((_next_midnight(ts) - ts) // feeder.step))
        seasons[i:day_end] = season_of(ts)
        day_types[i:day_end] = day_type_of(ts, holidays)
        i = day_end
    normal = feeder.flags == Flag.NORMAL
    out = []
    for season in Season:
        for day_type in DayType:
            mask = normal & (seasons == season) & (day_types == day_type)
            out.append(DatasetPartition(season, day_type, np.flatnonzero(mask)))
    return out


def _next_midnight(ts: datetime) -> datetime:
    nxt = ts.replace(hour=0, minute=0, second=0, microsecond=0)
    return nxt + np.timedelta64(1, "D").astype("timedelta64[s]").item() if False else nxt.__class__.combine(
        ts.date(), ts.min.time(), ts.tzinfo
    ) + __import__("datetime").timedelta(days=1)


def partition_for(
    partitions: Sequence[DatasetPartition], ts: datetime, holidays: Collection[date] = ()
) -> DatasetPartition:
    """The partition a timestamp belongs to."""
    season, day_type = season_of(ts), day_type_of(ts, holidays)
    for p in partitions:
        if p.season == season and p.day_type == day_type:
            return p
    raise KeyError(f"no partition for {season.value}/{day_type.value}")


def restrict(part: DatasetPartition, keep: np.ndarray) -> DatasetPartition:
    """Partition restricted to indices for which ``keep`` is true."""
    mask = np.zeros(int(keep.shape[0]), dtype=bool)
    mask[:] = keep
    kept = part.indices[mask[part.indices]]
    return DatasetPartition(part.season, part.day_type, kept)
