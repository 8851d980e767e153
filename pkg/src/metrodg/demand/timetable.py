from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from metrodg.curve import LoadCurve, TimeGrid, TimeWindow, Unit, read_table
from metrodg.errors import ParseError, ValidationError

TIMETABLE_COLUMNS = ("start_min", "end_min", "headway_min")

# absorbs float noise in round_trip / headway before the ceiling
_CEIL_EPS = 1e-9


@dataclass(frozen=True)
class ServiceInterval:
    window: TimeWindow
    headway_minutes: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.headway_minutes) or self.headway_minutes <= 0:
            raise ValidationError(
                f"Headway must be positive, got {self.headway_minutes} "
                f"for {self.window.label()}."
            )


@dataclass(frozen=True)
class ServiceTimetable:
    round_trip_minutes: float
    intervals: tuple[ServiceInterval, ...] = ()

    def __post_init__(self) -> None:
        if not math.isfinite(self.round_trip_minutes) or self.round_trip_minutes <= 0:
            raise ValidationError(
                f"Round-trip time must be positive, got {self.round_trip_minutes}."
            )
        intervals = tuple(self.intervals)
        for prev, curr in zip(intervals, intervals[1:]):
            if curr.window.start_minute < prev.window.end_minute:
                raise ValidationError(
                    "Timetable intervals must be sorted and non-overlapping: "
                    f"{prev.window.label()} then {curr.window.label()}."
                )
        object.__setattr__(self, "intervals", intervals)

    @classmethod
    def from_rows(
        cls, round_trip_minutes: float, rows: list[tuple[int, int, float]]
    ) -> "ServiceTimetable":
        intervals = [
            ServiceInterval(TimeWindow(int(start), int(end)), float(headway))
            for start, end, headway in rows
        ]
        return cls(round_trip_minutes, tuple(intervals))

    def interval_at(self, minute: float) -> ServiceInterval | None:
        for interval in self.intervals:
            if interval.window.contains(minute):
                return interval
        return None


@dataclass(frozen=True)
class TractionModel:
    """Time-averaged electrical demand of one in-service train."""

    avg_power_per_train_mw: float

    def __post_init__(self) -> None:
        if (
            not math.isfinite(self.avg_power_per_train_mw)
            or self.avg_power_per_train_mw <= 0
        ):
            raise ValidationError(
                "avg_power_per_train_mw must be positive, "
                f"got {self.avg_power_per_train_mw}."
            )


def fleet_size(round_trip_minutes: float, headway_minutes: float) -> int:
    return max(1, math.ceil(round_trip_minutes / headway_minutes - _CEIL_EPS))


def trains_in_service(timetable: ServiceTimetable, minute_of_day: float) -> int:
    interval = timetable.interval_at(minute_of_day)
    if interval is None:
        return 0
    return fleet_size(timetable.round_trip_minutes, interval.headway_minutes)


def synthesize_tps(
    timetable: ServiceTimetable, model: TractionModel, grid: TimeGrid
) -> LoadCurve:
    """Traction demand: trains in service at each sample midpoint times train power."""
    trains = np.array(
        [trains_in_service(timetable, minute) for minute in grid.midpoints()],
        dtype=float,
    )
    return LoadCurve(grid, trains * model.avg_power_per_train_mw, Unit.MW)


def default_timetable() -> ServiceTimetable:
    """Weekday service with morning and evening rush headways."""
    return ServiceTimetable.from_rows(
        90.0,
        [
            (330, 420, 10.0),
            (420, 540, 4.0),
            (540, 1020, 7.5),
            (1020, 1140, 4.0),
            (1140, 1380, 10.0),
        ],
    )


def read_timetable_csv(path: Path, round_trip_minutes: float) -> ServiceTimetable:
    _, rows = read_table(path, TIMETABLE_COLUMNS)
    intervals = []
    for line_no, (start, end, headway) in rows:
        if start != int(start) or end != int(end):
            raise ParseError(
                "start_min and end_min must be whole minutes", path=path, line=line_no
            )
        try:
            intervals.append(
                ServiceInterval(TimeWindow(int(start), int(end)), headway)
            )
        except ValidationError as exc:
            raise ParseError(exc.message, path=path, line=line_no) from None
    try:
        return ServiceTimetable(round_trip_minutes, tuple(intervals))
    except ValidationError as exc:
        raise ParseError(exc.message, path=path) from None
