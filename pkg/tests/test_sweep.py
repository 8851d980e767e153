import threading

import numpy as np
import pytest
from conftest import random_curve

from metrodg.curve import FULL_DAY
from metrodg.planner import (
    DEFAULT_DG_WINDOWS,
    apply_dispatch,
    flattening_capacity,
    improvement_indices,
    plan_for,
    sweep_capacities,
)

CAPACITIES = [0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4]


def test_sweep_thresholds_follow_capacity(reference):
    points = sweep_capacities(reference, CAPACITIES)
    assert [point.capacity for point in points] == CAPACITIES
    for point in points:
        assert point.threshold == pytest.approx(1.0 - point.capacity)
        assert point.report.p_peak_after == pytest.approx(1.0 - point.capacity)


def test_sweep_lf_rises_up_to_flattening_point(reference):
    points = sweep_capacities(reference, CAPACITIES)
    lf_after = [point.report.lf_after for point in points]
    assert all(b >= a - 1e-12 for a, b in zip(lf_after, lf_after[1:]))
    assert lf_after[0] == pytest.approx(0.53, abs=1e-9)


def test_sweep_at_flattening_capacity_matches_default_plan(reference):
    capacity = flattening_capacity(reference)
    assert capacity == pytest.approx(0.4)
    (point,) = sweep_capacities(reference, [capacity])
    plan = plan_for(reference)
    expected = improvement_indices(reference, apply_dispatch(reference, plan), FULL_DAY)
    assert point.report.p_peak_after == pytest.approx(expected.p_peak_after)
    assert point.report.lf_after == pytest.approx(expected.lf_after, rel=1e-9)


def test_strict_window_sweep_is_monotone(rng):
    for _ in range(50):
        curve = random_curve(rng)
        inside = curve.grid.mask_for(DEFAULT_DG_WINDOWS)
        top = float(curve.values.max())
        room = top - float(curve.values[~inside].max())
        if room <= 0:
            continue
        capacities = np.linspace(0.0, room, 6).tolist()
        points = sweep_capacities(curve, capacities, extend_to_shoulders=False)
        lf_after = [point.report.lf_after for point in points]
        assert all(b >= a - 1e-12 for a, b in zip(lf_after, lf_after[1:]))


def test_threaded_sweep_keeps_order_and_results(reference):
    serial = sweep_capacities(reference, CAPACITIES, workers=1)
    seen = []
    lock = threading.Lock()

    def on_done(point):
        with lock:
            seen.append(point.capacity)

    threaded = sweep_capacities(reference, CAPACITIES, workers=4, on_done=on_done)
    assert threaded == serial
    assert sorted(seen) == sorted(CAPACITIES)
