from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

from metrodg.curve import FULL_DAY, LoadCurve, TimeWindow, peak

from .dispatch import (
    DEFAULT_DG_WINDOWS,
    DgPlan,
    ImprovementReport,
    SizingSpec,
    ThresholdClip,
    apply_dispatch,
    improvement_indices,
    size_dg,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepPoint:
    capacity: float
    threshold: float
    report: ImprovementReport


def _evaluate(
    demand: LoadCurve,
    capacity: float,
    windows: tuple[TimeWindow, ...],
    extend_to_shoulders: bool,
    horizon: TimeWindow,
    spec: SizingSpec,
) -> SweepPoint:
    threshold = max(0.0, peak(demand) - capacity)
    plan = DgPlan(
        capacity=capacity,
        policy=ThresholdClip(threshold),
        windows=windows,
        extend_to_shoulders=extend_to_shoulders,
    )
    result = apply_dispatch(demand, plan)
    return SweepPoint(
        capacity, threshold, improvement_indices(demand, result, horizon, spec)
    )


def sweep_capacities(
    demand: LoadCurve,
    capacities: Sequence[float],
    windows: tuple[TimeWindow, ...] = DEFAULT_DG_WINDOWS,
    extend_to_shoulders: bool = True,
    horizon: TimeWindow = FULL_DAY,
    spec: SizingSpec = SizingSpec(),
    workers: int = 1,
    on_done: Callable[[SweepPoint], None] | None = None,
) -> list[SweepPoint]:
    """
    Shaves `capacity` off the peak (threshold = peak - capacity) for every
    capacity. Results keep the input order; `workers > 1` evaluates them on a
    thread pool.
    """

    def run(capacity: float) -> SweepPoint:
        point = _evaluate(
            demand, capacity, windows, extend_to_shoulders, horizon, spec
        )
        if on_done is not None:
            on_done(point)
        return point

    logger.info(
        "Sweeping %d DG capacities with %d worker(s).", len(capacities), workers
    )
    if workers <= 1:
        return [run(capacity) for capacity in capacities]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, capacities))


def flattening_capacity(demand: LoadCurve, spec: SizingSpec = SizingSpec()) -> float:
    """Capacity past which extra DG no longer lowers the peak below the base level."""
    return size_dg(demand, spec)
