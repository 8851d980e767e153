from __future__ import annotations

from typing import Callable

import numpy as np
import pytest

from metrodg.curve import LoadCurve, TimeGrid, TimeWindow, Unit
from metrodg.demand import reference_curve

CASES = 200


@pytest.fixture(scope="session")
def reference() -> LoadCurve:
    return reference_curve()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_curve(
    rng: np.random.Generator, step: int = 15, unit: Unit = Unit.MW
) -> LoadCurve:
    grid = TimeGrid(step)
    values = rng.uniform(0.1, 10.0, grid.samples_per_day)
    # some days carry a flat stretch
    if rng.random() < 0.3:
        start = int(rng.integers(0, grid.samples_per_day - 4))
        values[start : start + 4] = values[start]
    return LoadCurve(grid, values, unit)


def random_windows(
    rng: np.random.Generator, grid: TimeGrid, count: int | None = None
) -> tuple[TimeWindow, ...]:
    """Up to three disjoint grid-aligned windows, never the whole day."""
    count = count or int(rng.integers(1, 4))
    edges = sorted(
        rng.choice(np.arange(1, grid.samples_per_day), size=2 * count, replace=False)
    )
    step = grid.step_minutes
    return tuple(
        TimeWindow(int(edges[i]) * step, int(edges[i + 1]) * step)
        for i in range(0, len(edges), 2)
    )


@pytest.fixture
def make_curve(rng) -> Callable[..., LoadCurve]:
    def factory(step: int = 15, unit: Unit = Unit.MW) -> LoadCurve:
        return random_curve(rng, step, unit)

    return factory


def flat_curve(value: float, step: int = 15, unit: Unit = Unit.MW) -> LoadCurve:
    grid = TimeGrid(step)
    return LoadCurve(grid, np.full(grid.samples_per_day, value), unit)
