from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from metrodg.curve import LoadCurve, TimeGrid, Unit, read_table, resample
from metrodg.errors import ParseError, ValidationError

from .timetable import ServiceTimetable, default_timetable

PROFILE_COLUMNS = ("time_min", "intensity")


@dataclass(frozen=True, eq=False)
class PassengerProfile:
    """Normalised passenger intensity per grid sample, peak hour = 1."""

    grid: TimeGrid
    intensity: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.intensity, dtype=float)
        if values.ndim != 1 or values.size != self.grid.samples_per_day:
            raise ValidationError(
                f"Passenger profile needs {self.grid.samples_per_day} samples, "
                f"got {values.size}."
            )
        if not np.all(np.isfinite(values)) or values.min() < 0 or values.max() > 1:
            raise ValidationError("Passenger intensity must lie in [0, 1].")
        if values.max() > 0 and values.max() != 1.0:
            raise ValidationError(
                f"Passenger intensity must peak at 1, got {values.max()}."
            )
        values.setflags(write=False)
        object.__setattr__(self, "intensity", values)

    @classmethod
    def from_counts(cls, grid: TimeGrid, counts) -> "PassengerProfile":
        """Normalises raw passenger counts (entries + exits per sample)."""
        values = np.array(counts, dtype=float)
        if np.any(values < 0):
            raise ValidationError("Passenger counts must be non-negative.")
        top = values.max() if values.size else 0.0
        return cls(grid, values / top if top > 0 else values)

    def to_grid(self, grid: TimeGrid) -> "PassengerProfile":
        if grid == self.grid:
            return self
        as_curve = LoadCurve(self.grid, self.intensity, Unit.PU)
        return PassengerProfile.from_counts(grid, resample(as_curve, grid).values)


@dataclass(frozen=True)
class LpsModel:
    """`fixed_share` of the LPS peak does not depend on passengers."""

    fixed_share: float = 0.5

    def __post_init__(self) -> None:
        if not 0 <= self.fixed_share <= 1:
            raise ValidationError(
                f"fixed_share must lie in [0, 1], got {self.fixed_share}."
            )


def synthesize_lps(
    profile: PassengerProfile, model: LpsModel, lps_peak_mw: float
) -> LoadCurve:
    if not math.isfinite(lps_peak_mw) or lps_peak_mw <= 0:
        raise ValidationError(f"lps_peak_mw must be positive, got {lps_peak_mw}.")
    variable = 1.0 - model.fixed_share
    values = lps_peak_mw * (model.fixed_share + variable * profile.intensity)
    return LoadCurve(profile.grid, values, Unit.MW)


def default_passenger_profile(
    grid: TimeGrid, timetable: ServiceTimetable | None = None
) -> PassengerProfile:
    """
    Two rush-hour bumps (08:00 and 18:00) over a midday floor, zero while no
    trains run.
    """
    timetable = timetable or default_timetable()
    hours = grid.midpoints() / 60.0
    morning = np.exp(-0.5 * ((hours - 8.0) / 0.9) ** 2)
    evening = 0.9 * np.exp(-0.5 * ((hours - 18.0) / 1.1) ** 2)
    counts = 0.25 + morning + evening
    in_service = np.array(
        [timetable.interval_at(minute) is not None for minute in grid.midpoints()]
    )
    return PassengerProfile.from_counts(grid, np.where(in_service, counts, 0.0))


def read_profile_csv(path: Path, grid: TimeGrid) -> PassengerProfile:
    _, rows = read_table(path, PROFILE_COLUMNS)
    try:
        source = TimeGrid.infer(len(rows))
    except ValidationError as exc:
        raise ParseError(exc.message, path=path) from None
    values = []
    for idx, (line_no, (time_min, intensity)) in enumerate(rows):
        if time_min != idx * source.step_minutes:
            raise ParseError(
                f"time_min {time_min:g} breaks the {source.step_minutes}-minute grid",
                path=path,
                line=line_no,
                field="time_min",
            )
        if not 0 <= intensity <= 1:
            raise ParseError(
                f"intensity must lie in [0, 1], got {intensity:g}",
                path=path,
                line=line_no,
                field="intensity",
            )
        values.append(intensity)
    top = max(values)
    if top not in (0.0, 1.0):
        raise ParseError(
            f"intensity must peak at exactly 1, got {top:g}; normalise the profile",
            path=path,
            field="intensity",
        )
    return PassengerProfile(source, values).to_grid(grid)
