from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, TypeVar

from metrodg.curve import (
    FULL_DAY,
    LoadCurve,
    TimeGrid,
    TimeWindow,
    Unit,
    parse_clock,
    peak,
    read_curve_csv,
    read_text,
)
from metrodg.demand import (
    DEFAULT_RATIO,
    REFERENCE_LF,
    CombinationRatio,
    LpsModel,
    PassengerProfile,
    ServiceInterval,
    ServiceTimetable,
    TractionModel,
    default_passenger_profile,
    default_timetable,
    read_profile_csv,
    read_timetable_csv,
)
from metrodg.economics import CostAssumptions
from metrodg.errors import IoError, ParseError, ValidationError
from metrodg.planner import DEFAULT_BASE_WINDOW, DEFAULT_DG_WINDOWS, SizingSpec

T = TypeVar("T")

DEFAULT_ROUND_TRIP_MINUTES = 90.0
DEFAULT_TRAIN_MW = 1.5
POLICIES = ("clip", "constant")

_CAPACITY = re.compile(
    r"^\s*([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)\s*(pu|kw|mw)\s*$", re.IGNORECASE
)

_KNOWN_KEYS = {
    "grid_step_minutes",
    "reference",
    "reference_lf",
    "curve",
    "timetable",
    "round_trip_minutes",
    "passenger_profile",
    "traction",
    "lps",
    "combination_ratio",
    "allow_ratio_override",
    "sizing",
    "dispatch",
    "lf_horizon",
    "peak_mw",
    "costs",
    "output_dir",
}


@dataclass(frozen=True)
class CapacitySetting:
    value: float
    unit: str

    def resolve(self, curve: LoadCurve, peak_mw: float | None = None) -> float:
        """Capacity expressed in the curve's own unit."""
        if self.unit == "pu":
            return self.value * peak(curve)
        mw = self.value / 1000.0 if self.unit == "kW" else self.value
        if curve.unit == Unit.MW:
            return mw
        if peak_mw is None or peak_mw <= 0:
            raise ValidationError(
                f"Capacity in {self.unit} needs peak_mw for a per-unit curve."
            )
        return mw / peak_mw


def parse_capacity(text: str) -> CapacitySetting:
    """Parses `0.4pu`, `5000kW` or `5MW`."""
    match = _CAPACITY.match(str(text))
    if not match:
        raise ValidationError(
            f"Invalid capacity {text!r}. Use a number with pu, kW or MW."
        )
    unit = {"pu": "pu", "kw": "kW", "mw": "MW"}[match.group(2).lower()]
    return CapacitySetting(float(match.group(1)), unit)


def parse_horizon(text: str) -> TimeWindow:
    if text.strip().lower() in {"full", "24h", "day"}:
        return FULL_DAY
    return TimeWindow.parse(text)


@dataclass(frozen=True)
class ScenarioConfig:
    grid: TimeGrid = field(default_factory=TimeGrid)
    reference: bool = False
    reference_lf: float = REFERENCE_LF
    measured_curve: LoadCurve | None = None
    timetable: ServiceTimetable = field(default_factory=default_timetable)
    profile: PassengerProfile | None = None
    traction: TractionModel = TractionModel(DEFAULT_TRAIN_MW)
    lps_model: LpsModel = LpsModel()
    lps_peak_mw: float = 1.0
    ratio: CombinationRatio = CombinationRatio(DEFAULT_RATIO)
    sizing: SizingSpec = SizingSpec()
    dg_windows: tuple[TimeWindow, ...] = DEFAULT_DG_WINDOWS
    policy: str = "clip"
    threshold: float | None = None
    capacity: CapacitySetting | None = None
    extend_to_shoulders: bool = True
    lf_horizon: TimeWindow = FULL_DAY
    peak_mw: float | None = None
    costs: CostAssumptions = CostAssumptions()
    output_dir: Path | None = None

    def __post_init__(self) -> None:
        if self.policy not in POLICIES:
            raise ValidationError(
                f"policy must be one of {', '.join(POLICIES)}, got {self.policy!r}."
            )
        if self.peak_mw is not None and (
            not math.isfinite(self.peak_mw) or self.peak_mw <= 0
        ):
            raise ValidationError(f"peak_mw must be positive, got {self.peak_mw}.")
        if self.threshold is not None and (
            not math.isfinite(self.threshold) or self.threshold < 0
        ):
            raise ValidationError(f"threshold must be >= 0, got {self.threshold}.")

    @property
    def passenger_profile(self) -> PassengerProfile:
        if self.profile is not None:
            return self.profile.to_grid(self.grid)
        return default_passenger_profile(self.grid, self.timetable)

    @property
    def mode(self) -> str:
        if self.reference:
            return "reference"
        if self.measured_curve is not None:
            return "measured"
        return "synthesized"


def _checked(name: str, build: Callable[[], T]) -> T:
    try:
        return build()
    except ValidationError as exc:
        raise ValidationError(f"{name}: {exc.message}") from None


def _section(data: dict, name: str) -> dict:
    value = data.get(name, {})
    if not isinstance(value, dict):
        raise ValidationError(f"{name} must be a JSON object.")
    return value


def _number(data: dict, name: str, default: float | None = None) -> float | None:
    """A finite number; `null` only stands for "unset" on keys without a default."""
    if name not in data:
        return default
    value = data[name]
    if value is None and default is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{name} must be a number, got {value!r}.")
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}.")
    return float(value)


def _flag(data: dict, name: str, default: bool) -> bool:
    value = data.get(name, default)
    if not isinstance(value, bool):
        raise ValidationError(f"{name} must be true or false, got {value!r}.")
    return value


def _window_list(values: Any, name: str) -> tuple[TimeWindow, ...]:
    if not isinstance(values, list) or not values:
        raise ValidationError(f"{name} must be a non-empty list of windows.")
    windows = []
    for item in values:
        windows.append(_checked(name, lambda: TimeWindow.parse(str(item))))
    return tuple(windows)


def _clock_or_minutes(value: Any) -> int:
    if isinstance(value, str):
        return parse_clock(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if value != int(value):
            raise ValidationError(f"Minutes must be whole, got {value}.")
        return int(value)
    raise ValidationError(f"Invalid time {value!r}.")


def _inline_timetable(data: dict, round_trip: float) -> ServiceTimetable:
    round_trip = _number(data, "round_trip_minutes", round_trip)
    rows = data.get("intervals", [])
    if not isinstance(rows, list):
        raise ValidationError("intervals must be a list of [start, end, headway].")
    intervals = []
    for idx, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 3:
            raise ValidationError(f"interval {idx} must be [start, end, headway].")
        start, end, headway = row
        if isinstance(headway, bool) or not isinstance(headway, (int, float)):
            raise ValidationError(f"interval {idx} headway must be a number.")
        intervals.append(
            ServiceInterval(
                TimeWindow(_clock_or_minutes(start), _clock_or_minutes(end)),
                float(headway),
            )
        )
    return ServiceTimetable(round_trip, tuple(intervals))


def _resolve(base: Path, value: Any, name: str) -> Path:
    if not isinstance(value, str) or not value.strip():
        raise ValidationError(f"{name} must be a file path.")
    path = Path(value).expanduser()
    path = path if path.is_absolute() else base / path
    if not path.is_file():
        raise IoError("file not found", path=path)
    return path


def scenario_from_dict(data: dict, base_dir: Path) -> ScenarioConfig:
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise ValidationError(f"Unknown scenario keys: {', '.join(unknown)}.")

    step = _number(data, "grid_step_minutes", 15)
    if step != int(step):
        raise ValidationError(f"grid_step_minutes must be whole, got {step}.")
    grid = _checked("grid_step_minutes", lambda: TimeGrid(int(step)))
    round_trip = _number(data, "round_trip_minutes", DEFAULT_ROUND_TRIP_MINUTES)

    timetable_value = data.get("timetable")
    if timetable_value is None:
        timetable = default_timetable()
    elif isinstance(timetable_value, dict):
        timetable = _checked(
            "timetable", lambda: _inline_timetable(timetable_value, round_trip)
        )
    else:
        path = _resolve(base_dir, timetable_value, "timetable")
        timetable = _checked(
            "timetable", lambda: read_timetable_csv(path, round_trip)
        )

    profile = None
    if data.get("passenger_profile") is not None:
        path = _resolve(base_dir, data["passenger_profile"], "passenger_profile")
        profile = read_profile_csv(path, grid)

    measured = None
    if data.get("curve") is not None:
        measured = read_curve_csv(_resolve(base_dir, data["curve"], "curve"))

    traction = _section(data, "traction")
    lps = _section(data, "lps")
    sizing = _section(data, "sizing")
    dispatch = _section(data, "dispatch")
    costs = _section(data, "costs")

    ratio_value = _number(data, "combination_ratio", DEFAULT_RATIO)
    allow_override = _flag(data, "allow_ratio_override", False)
    capacity = dispatch.get("capacity")
    horizon = data.get("lf_horizon", "full")
    output_dir = data.get("output_dir")

    return ScenarioConfig(
        grid=grid,
        reference=_flag(data, "reference", False),
        reference_lf=_number(data, "reference_lf", REFERENCE_LF),
        measured_curve=measured,
        timetable=timetable,
        profile=profile,
        traction=_checked(
            "traction",
            lambda: TractionModel(
                _number(traction, "avg_power_per_train_mw", DEFAULT_TRAIN_MW)
            ),
        ),
        lps_model=_checked(
            "lps", lambda: LpsModel(_number(lps, "fixed_share", 0.5))
        ),
        lps_peak_mw=_number(lps, "peak_mw", 1.0),
        ratio=_checked(
            "combination_ratio",
            lambda: CombinationRatio(ratio_value, allow_override),
        ),
        sizing=SizingSpec(
            _checked(
                "sizing.base_window",
                lambda: TimeWindow.parse(
                    str(sizing.get("base_window", DEFAULT_BASE_WINDOW.label()))
                ),
            )
        ),
        dg_windows=_window_list(
            dispatch.get("windows", [w.label() for w in DEFAULT_DG_WINDOWS]),
            "dispatch.windows",
        ),
        policy=dispatch.get("policy", "clip"),
        threshold=_number(dispatch, "threshold"),
        capacity=(
            None
            if capacity is None
            else _checked("dispatch.capacity", lambda: parse_capacity(capacity))
        ),
        extend_to_shoulders=_flag(dispatch, "extend_to_shoulders", True),
        lf_horizon=_checked("lf_horizon", lambda: parse_horizon(str(horizon))),
        peak_mw=_number(data, "peak_mw"),
        costs=_checked("costs", lambda: CostAssumptions.from_dict(costs)),
        output_dir=(
            None if output_dir is None else _resolve_dir(base_dir, output_dir)
        ),
    )


def _resolve_dir(base: Path, value: Any) -> Path:
    if not isinstance(value, str) or not value.strip():
        raise ValidationError("output_dir must be a directory path.")
    path = Path(value).expanduser()
    return path if path.is_absolute() else base / path


def load_inputs(config_path: Path) -> ScenarioConfig:
    """Reads a scenario JSON file; every referenced input is parsed and validated."""
    text = read_text(config_path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=config_path, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object", path=config_path)
    return scenario_from_dict(data, config_path.parent)
