from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from metrodg.curve import (
    AllZeroInHorizon,
    GridMismatch,
    LoadCurve,
    TimeWindow,
    UnitMismatch,
    check_disjoint,
    load_factor,
    peak,
    window_average,
)
from metrodg.errors import ValidationError

logger = logging.getLogger(__name__)

DEFAULT_BASE_WINDOW = TimeWindow(570, 960)
DEFAULT_DG_WINDOWS = (TimeWindow(420, 540), TimeWindow(1020, 1140))

# float slack for per-sample bookkeeping checks, relative to the curve peak
_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SizingSpec:
    base_window: TimeWindow = DEFAULT_BASE_WINDOW


@dataclass(frozen=True)
class ThresholdClip:
    """DG covers demand above `threshold`, up to its capacity."""

    threshold: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.threshold) or self.threshold < 0:
            raise ValidationError(
                f"Clip threshold must be >= 0, got {self.threshold}."
            )


@dataclass(frozen=True)
class ConstantOutput:
    """DG runs at full capacity (never above demand) inside its windows."""


DispatchPolicy = Union[ThresholdClip, ConstantOutput]


@dataclass(frozen=True)
class DgPlan:
    capacity: float
    policy: DispatchPolicy
    windows: tuple[TimeWindow, ...] = DEFAULT_DG_WINDOWS
    # ThresholdClip only: keep running over adjacent samples still above threshold
    extend_to_shoulders: bool = True

    def __post_init__(self) -> None:
        if not math.isfinite(self.capacity) or self.capacity < 0:
            raise ValidationError(f"DG capacity must be >= 0, got {self.capacity}.")
        windows = tuple(sorted(self.windows))
        check_disjoint(windows, "DG windows")
        object.__setattr__(self, "windows", windows)


@dataclass(frozen=True)
class DispatchResult:
    grid_curve: LoadCurve
    dg_curve: LoadCurve
    windows: tuple[TimeWindow, ...]
    capacity: float

    def __post_init__(self) -> None:
        if self.grid_curve.grid != self.dg_curve.grid:
            raise GridMismatch("Grid and DG curves must share a time grid.")
        if self.grid_curve.unit != self.dg_curve.unit:
            raise UnitMismatch("Grid and DG curves must share a unit.")
        slack = _TOLERANCE * max(1.0, self.capacity)
        dg = self.dg_curve.values
        if np.any(dg > self.capacity + slack):
            raise ValidationError("DG output exceeds its capacity.")
        outside = ~self.grid_curve.grid.mask_for(self.windows)
        if np.any(dg[outside] > 0):
            raise ValidationError("DG output outside its operating windows.")

    @property
    def demand(self) -> LoadCurve:
        return self.grid_curve.with_values(
            self.grid_curve.values + self.dg_curve.values
        )


_TEXT_FIELDS = ("unit", "lf_horizon", "dg_windows")


@dataclass(frozen=True)
class ImprovementReport:
    p_peak_before: float
    p_base: float
    p_dg: float
    p_peak_after: float
    lf_before: float
    lf_after: float
    peak_reduction_pct: float
    loss_reduction_at_peak_pct: float
    dg_energy_mwh_per_day: float
    demand_energy_mwh_per_day: float
    unit: str = "MW"
    lf_horizon: str = "00:00-24:00"
    dg_windows: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        data = {name: getattr(self, name) for name in self.__dataclass_fields__}
        data["dg_windows"] = ",".join(self.dg_windows)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ImprovementReport":
        names = cls.__dataclass_fields__
        missing = [name for name in names if name not in data]
        if missing:
            raise ValidationError(
                f"Improvement report is missing fields: {', '.join(missing)}."
            )
        values = {name: data[name] for name in names}
        for name in names:
            if name in _TEXT_FIELDS:
                continue
            value = values[name]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{name} must be a number, got {value!r}.")
        windows = values["dg_windows"]
        if not isinstance(windows, str):
            raise ValidationError("dg_windows must be a comma-separated string.")
        values["dg_windows"] = tuple(part for part in windows.split(",") if part)
        return cls(**values)


def size_dg(curve: LoadCurve, spec: SizingSpec = SizingSpec()) -> float:
    """DG capacity = peak minus the mean of the midday base window, floored at 0."""
    p_peak = peak(curve)
    p_base = window_average(curve, spec.base_window)
    return max(0.0, p_peak - p_base)


def plan_for(
    curve: LoadCurve,
    spec: SizingSpec = SizingSpec(),
    windows: tuple[TimeWindow, ...] = DEFAULT_DG_WINDOWS,
    extend_to_shoulders: bool = True,
) -> DgPlan:
    """Default plan: capacity from `size_dg`, clipping at the base-window average."""
    return DgPlan(
        capacity=size_dg(curve, spec),
        policy=ThresholdClip(window_average(curve, spec.base_window)),
        windows=windows,
        extend_to_shoulders=extend_to_shoulders,
    )


def _extend_windows(
    demand: LoadCurve, windows: tuple[TimeWindow, ...], threshold: float
) -> tuple[TimeWindow, ...]:
    grid = demand.grid
    values = demand.values
    # samples within float noise of the threshold need no DG
    limit = threshold + _TOLERANCE * max(1.0, threshold)
    spans: list[tuple[int, int]] = []
    for window in windows:
        part = grid.slice_for(window)
        start, stop = part.start, part.stop
        while start > 0 and values[start - 1] > limit:
            start -= 1
        while stop < values.size and values[stop] > limit:
            stop += 1
        if spans and start <= spans[-1][1]:
            spans[-1] = (spans[-1][0], max(stop, spans[-1][1]))
        else:
            spans.append((start, stop))
    step = grid.step_minutes
    return tuple(TimeWindow(start * step, stop * step) for start, stop in spans)


def apply_dispatch(demand: LoadCurve, plan: DgPlan) -> DispatchResult:
    windows = plan.windows
    if isinstance(plan.policy, ThresholdClip) and plan.extend_to_shoulders:
        windows = _extend_windows(demand, windows, plan.policy.threshold)
        if windows != plan.windows:
            logger.debug(
                "DG windows extended over shoulders: %s",
                ", ".join(window.label() for window in windows),
            )
    active = demand.grid.mask_for(windows)
    values = demand.values

    if isinstance(plan.policy, ThresholdClip):
        clipped = np.minimum(values, plan.policy.threshold)
        after = np.maximum(clipped, values - plan.capacity)
    else:
        after = np.maximum(values - plan.capacity, 0.0)
    grid_values = np.where(active, after, values)
    dg_values = np.where(active, values - grid_values, 0.0)

    return DispatchResult(
        grid_curve=demand.with_values(grid_values),
        dg_curve=demand.with_values(dg_values),
        windows=windows,
        capacity=plan.capacity,
    )


def loss_reduction_pct(peak_before: float, peak_after: float) -> float:
    """Peak-time I^2R loss cut, losses taken as quadratic in power."""
    return 100.0 * (1.0 - (peak_after / peak_before) ** 2)


def improvement_indices(
    demand: LoadCurve,
    result: DispatchResult,
    horizon: TimeWindow,
    spec: SizingSpec = SizingSpec(),
) -> ImprovementReport:
    if result.grid_curve.grid != demand.grid:
        raise GridMismatch("Dispatch result and demand use different grids.")
    mismatch = np.abs(result.demand.values - demand.values).max()
    if mismatch > _TOLERANCE * max(1.0, peak(demand)):
        raise ValidationError(
            f"Dispatch result does not add up to demand (off by {mismatch:.3g})."
        )

    p_peak_before = peak(demand)
    if p_peak_before <= 0:
        raise AllZeroInHorizon("Demand curve is all zero; nothing to improve.")
    p_peak_after = peak(result.grid_curve)
    step_hours = demand.grid.step_hours
    return ImprovementReport(
        p_peak_before=p_peak_before,
        p_base=window_average(demand, spec.base_window),
        p_dg=result.capacity,
        p_peak_after=p_peak_after,
        lf_before=load_factor(demand, horizon),
        lf_after=load_factor(result.grid_curve, horizon),
        peak_reduction_pct=100.0 * (1.0 - p_peak_after / p_peak_before),
        loss_reduction_at_peak_pct=loss_reduction_pct(p_peak_before, p_peak_after),
        dg_energy_mwh_per_day=float(result.dg_curve.values.sum()) * step_hours,
        demand_energy_mwh_per_day=float(demand.values.sum()) * step_hours,
        unit=demand.unit.value,
        lf_horizon=horizon.label(),
        dg_windows=tuple(window.label() for window in result.windows),
    )
