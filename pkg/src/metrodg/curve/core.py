from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from metrodg.errors import ValidationError

MINUTES_PER_DAY = 1440
VALID_STEPS = (1, 5, 15, 30, 60)
DEFAULT_STEP_MINUTES = 15

_CLOCK = re.compile(r"^\s*(\d{1,2}):(\d{2})\s*$")


class MisalignedWindow(ValidationError):
    pass


class EmptyWindow(ValidationError):
    pass


class AllZeroInHorizon(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class UnitMismatch(ValidationError):
    pass


class IncompatibleGrids(ValidationError):
    pass


class Unit(str, Enum):
    MW = "MW"
    PU = "pu"

    @classmethod
    def parse(cls, value: str) -> "Unit":
        text = value.strip()
        for unit in cls:
            if unit.value.lower() == text.lower():
                return unit
        raise ValidationError(f"Unknown power unit {value!r}. Use 'MW' or 'pu'.")


def parse_clock(value: str) -> int:
    """Parses `HH:MM` (00:00 to 24:00) into minutes after midnight."""
    match = _CLOCK.match(value)
    if not match:
        raise ValidationError(f"Invalid time of day {value!r}. Use HH:MM.")
    hours, minutes = int(match.group(1)), int(match.group(2))
    total = hours * 60 + minutes
    if minutes >= 60 or total > MINUTES_PER_DAY:
        raise ValidationError(f"Time of day out of range: {value!r}.")
    return total


def format_clock(minute: int) -> str:
    return f"{minute // 60:02d}:{minute % 60:02d}"


@dataclass(frozen=True)
class TimeGrid:
    step_minutes: int = DEFAULT_STEP_MINUTES

    def __post_init__(self) -> None:
        if self.step_minutes not in VALID_STEPS:
            raise ValidationError(
                f"Grid step must be one of {VALID_STEPS} minutes, "
                f"got {self.step_minutes}."
            )

    @property
    def samples_per_day(self) -> int:
        return MINUTES_PER_DAY // self.step_minutes

    @property
    def step_hours(self) -> float:
        return self.step_minutes / 60.0

    def sample_starts(self) -> np.ndarray:
        return np.arange(self.samples_per_day) * self.step_minutes

    def midpoints(self) -> np.ndarray:
        return (np.arange(self.samples_per_day) + 0.5) * self.step_minutes

    def slice_for(self, window: "TimeWindow") -> slice:
        if (
            window.start_minute % self.step_minutes
            or window.end_minute % self.step_minutes
        ):
            raise MisalignedWindow(
                f"Window {window.label()} does not align to the "
                f"{self.step_minutes}-minute grid."
            )
        return slice(
            window.start_minute // self.step_minutes,
            window.end_minute // self.step_minutes,
        )

    def mask_for(self, windows: Iterable["TimeWindow"]) -> np.ndarray:
        mask = np.zeros(self.samples_per_day, dtype=bool)
        for window in windows:
            mask[self.slice_for(window)] = True
        return mask

    @classmethod
    def infer(cls, samples: int) -> "TimeGrid":
        if samples <= 0 or MINUTES_PER_DAY % samples:
            raise ValidationError(
                f"{samples} samples do not divide a day into a valid grid."
            )
        return cls(MINUTES_PER_DAY // samples)


@dataclass(frozen=True, order=True)
class TimeWindow:
    start_minute: int
    end_minute: int

    def __post_init__(self) -> None:
        if not 0 <= self.start_minute < MINUTES_PER_DAY:
            raise ValidationError(
                f"Window start must be in [0, 1440), got {self.start_minute}."
            )
        if not 0 < self.end_minute <= MINUTES_PER_DAY:
            raise ValidationError(
                f"Window end must be in (0, 1440], got {self.end_minute}."
            )
        if self.start_minute >= self.end_minute:
            raise ValidationError(
                f"Window start {format_clock(self.start_minute)} must precede "
                f"end {format_clock(self.end_minute)}."
            )

    @property
    def duration_minutes(self) -> int:
        return self.end_minute - self.start_minute

    def contains(self, minute: float) -> bool:
        return self.start_minute <= minute < self.end_minute

    def overlaps(self, other: "TimeWindow") -> bool:
        return (
            self.start_minute < other.end_minute
            and other.start_minute < self.end_minute
        )

    def label(self) -> str:
        return f"{format_clock(self.start_minute)}-{format_clock(self.end_minute)}"

    @classmethod
    def parse(cls, value: str) -> "TimeWindow":
        """Accepts `HH:MM-HH:MM` or `HH:MM..HH:MM`."""
        text = value.strip()
        separator = ".." if ".." in text else "-"
        parts = text.split(separator)
        if len(parts) != 2:
            raise ValidationError(
                f"Invalid window {value!r}. Use HH:MM-HH:MM or HH:MM..HH:MM."
            )
        return cls(parse_clock(parts[0]), parse_clock(parts[1]))


FULL_DAY = TimeWindow(0, MINUTES_PER_DAY)


def check_disjoint(windows: Sequence[TimeWindow], what: str = "windows") -> None:
    ordered = sorted(windows)
    for prev, curr in zip(ordered, ordered[1:]):
        if prev.overlaps(curr):
            raise ValidationError(
                f"{what} must not overlap: {prev.label()} and {curr.label()}."
            )


@dataclass(frozen=True, eq=False)
class LoadCurve:
    """Daily power samples; sample i holds constant power on [i*step, (i+1)*step)."""

    grid: TimeGrid
    values: np.ndarray
    unit: Unit = Unit.MW

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size != self.grid.samples_per_day:
            raise ValidationError(
                f"Curve needs {self.grid.samples_per_day} samples for a "
                f"{self.grid.step_minutes}-minute grid, got {values.size}."
            )
        if not np.all(np.isfinite(values)):
            raise ValidationError("Curve samples must be finite.")
        if np.any(values < 0):
            idx = int(np.argmax(values < 0))
            raise ValidationError(
                f"Curve samples must be non-negative (sample {idx} is {values[idx]})."
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "unit", Unit(self.unit))

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LoadCurve):
            return NotImplemented
        return (
            self.grid == other.grid
            and self.unit == other.unit
            and bool(np.array_equal(self.values, other.values))
        )

    __hash__ = None  # type: ignore[assignment]

    def window_values(self, window: TimeWindow) -> np.ndarray:
        return self.values[self.grid.slice_for(window)]

    def energy(self) -> float:
        """Daily energy in unit-hours (MWh or pu*h)."""
        return float(self.values.sum()) * self.grid.step_hours

    def with_values(self, values: np.ndarray) -> "LoadCurve":
        return LoadCurve(self.grid, values, self.unit)


def _nonempty(curve: LoadCurve, window: TimeWindow) -> np.ndarray:
    values = curve.window_values(window)
    if values.size == 0:
        raise EmptyWindow(f"Window {window.label()} holds no samples.")
    return values


def load_factor(curve: LoadCurve, horizon: TimeWindow = FULL_DAY) -> float:
    """Average load over maximum demand, both taken inside `horizon`."""
    values = _nonempty(curve, horizon)
    maximum = float(values.max())
    if maximum <= 0:
        raise AllZeroInHorizon(
            f"Curve has no positive sample in horizon {horizon.label()}."
        )
    return float(values.mean()) / maximum


def window_average(curve: LoadCurve, window: TimeWindow) -> float:
    return float(_nonempty(curve, window).mean())


def peak(curve: LoadCurve) -> float:
    return float(curve.values.max())


def peak_index(curve: LoadCurve) -> int:
    """Earliest sample attaining the peak."""
    return int(np.argmax(curve.values))


def linear_combine(terms: Sequence[tuple[LoadCurve, float]]) -> LoadCurve:
    if not terms:
        raise ValidationError("linear_combine needs at least one term.")
    first = terms[0][0]
    total = np.zeros(first.grid.samples_per_day)
    for curve, weight in terms:
        if curve.grid != first.grid:
            raise GridMismatch(
                f"Cannot combine a {curve.grid.step_minutes}-minute curve with a "
                f"{first.grid.step_minutes}-minute curve."
            )
        if curve.unit != first.unit:
            raise UnitMismatch(
                f"Cannot combine {curve.unit.value} with {first.unit.value} curves."
            )
        if not np.isfinite(weight) or weight < 0:
            raise ValidationError(f"Combination weights must be >= 0, got {weight}.")
        total = total + weight * curve.values
    return LoadCurve(first.grid, total, first.unit)


def scale(curve: LoadCurve, factor: float) -> LoadCurve:
    return linear_combine([(curve, factor)])


def resample(curve: LoadCurve, target: TimeGrid) -> LoadCurve:
    """Refines by replication or coarsens by group mean; daily energy is kept."""
    source = curve.grid.step_minutes
    step = target.step_minutes
    if step == source:
        return curve
    if source % step == 0:
        values = np.repeat(curve.values, source // step)
        return LoadCurve(target, values, curve.unit)
    if step % source == 0:
        groups = curve.values.reshape(-1, step // source)
        means = groups.mean(axis=1)
        uniform = np.all(groups == groups[:, :1], axis=1)
        return LoadCurve(target, np.where(uniform, groups[:, 0], means), curve.unit)
    raise IncompatibleGrids(
        f"Cannot resample a {source}-minute curve to {step} minutes: "
        "neither step divides the other."
    )
