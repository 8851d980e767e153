import numpy as np
import pytest
from conftest import CASES, flat_curve, random_curve, random_windows

from metrodg.curve import FULL_DAY, TimeWindow, load_factor, scale
from metrodg.errors import ValidationError
from metrodg.planner import (
    DEFAULT_BASE_WINDOW,
    DEFAULT_DG_WINDOWS,
    ConstantOutput,
    DgPlan,
    DispatchResult,
    ImprovementReport,
    SizingSpec,
    ThresholdClip,
    apply_dispatch,
    improvement_indices,
    loss_reduction_pct,
    plan_for,
    size_dg,
)


def test_flat_curve_needs_no_dg():
    assert size_dg(flat_curve(5.0)) == 0.0


def test_peak_on_the_base_plateau_needs_no_dg():
    values = np.ones(96)
    values[38:64] = 3.0
    curve = flat_curve(1.0).with_values(values)
    assert size_dg(curve) == 0.0


def test_plan_for_reference(reference):
    plan = plan_for(reference)
    assert plan.capacity == pytest.approx(0.4)
    assert isinstance(plan.policy, ThresholdClip)
    assert plan.policy.threshold == pytest.approx(0.6)
    assert plan.windows == DEFAULT_DG_WINDOWS


def test_reference_dispatch_covers_shoulders(reference):
    result = apply_dispatch(reference, plan_for(reference))
    assert result.windows == (TimeWindow(375, 570), TimeWindow(960, 1185))
    assert result.grid_curve.values.max() == pytest.approx(0.6)
    assert result.dg_curve.values.max() == pytest.approx(0.4)
    assert result.dg_curve.energy() == pytest.approx(2.23225, abs=1e-9)


def test_reference_improvement(reference):
    result = apply_dispatch(reference, plan_for(reference))
    report = improvement_indices(reference, result, FULL_DAY)
    assert report.p_peak_before == 1.0
    assert report.p_base == pytest.approx(0.6)
    assert report.p_dg == pytest.approx(0.4)
    assert report.p_peak_after == pytest.approx(0.6)
    assert report.peak_reduction_pct == pytest.approx(40.0, abs=1e-6)
    assert report.loss_reduction_at_peak_pct == pytest.approx(64.0, abs=1e-6)
    assert report.lf_before == pytest.approx(0.53, abs=1e-9)
    assert report.lf_after == pytest.approx(0.72832, abs=1e-4)
    assert 0.70 <= report.lf_after <= 0.80
    assert report.dg_energy_mwh_per_day == pytest.approx(2.23225, abs=1e-9)
    assert report.demand_energy_mwh_per_day == pytest.approx(12.72, abs=1e-9)
    assert report.unit == "pu"
    assert report.dg_windows == ("06:15-09:30", "16:00-19:45")


def test_report_serialises_flat(reference):
    result = apply_dispatch(reference, plan_for(reference))
    report = improvement_indices(reference, result, FULL_DAY)
    data = report.to_dict()
    assert data["dg_windows"] == "06:15-09:30,16:00-19:45"
    assert all(isinstance(value, (int, float, str)) for value in data.values())
    assert ImprovementReport.from_dict(data) == report

    with pytest.raises(ValidationError):
        ImprovementReport.from_dict({**data, "lf_after": None})
    with pytest.raises(ValidationError):
        ImprovementReport.from_dict({**data, "dg_windows": ["06:15-09:30"]})


def test_strict_windows_bound_dg_energy(reference):
    plan = plan_for(reference, extend_to_shoulders=False)
    result = apply_dispatch(reference, plan)
    report = improvement_indices(reference, result, FULL_DAY)
    assert result.windows == DEFAULT_DG_WINDOWS
    assert report.dg_energy_mwh_per_day == pytest.approx(1.6, abs=1e-9)
    assert report.p_peak_after == pytest.approx(0.9405, abs=1e-6)
    assert report.peak_reduction_pct == pytest.approx(5.95, abs=1e-4)


def test_constant_output_runs_at_capacity(reference):
    plan = DgPlan(capacity=0.3, policy=ConstantOutput())
    result = apply_dispatch(reference, plan)
    assert result.windows == DEFAULT_DG_WINDOWS
    inside = reference.grid.mask_for(DEFAULT_DG_WINDOWS)
    assert np.allclose(result.dg_curve.values[inside], 0.3)
    assert np.all(result.dg_curve.values[~inside] == 0.0)


def test_constant_output_never_exceeds_demand():
    curve = flat_curve(0.2)
    result = apply_dispatch(curve, DgPlan(capacity=0.5, policy=ConstantOutput()))
    assert result.grid_curve.values.min() == 0.0
    assert result.dg_curve.values.max() == pytest.approx(0.2)


def test_plan_validation():
    with pytest.raises(ValidationError):
        DgPlan(capacity=-1.0, policy=ConstantOutput())
    overlapping = (TimeWindow(420, 540), TimeWindow(500, 600))
    with pytest.raises(ValidationError):
        DgPlan(capacity=1.0, policy=ConstantOutput(), windows=overlapping)
    with pytest.raises(ValidationError):
        ThresholdClip(-0.1)


def test_plan_needs_a_policy():
    with pytest.raises(TypeError):
        DgPlan(capacity=1.0)


def test_plan_sorts_windows():
    windows = (TimeWindow(1020, 1140), TimeWindow(420, 540))
    plan = DgPlan(capacity=1.0, policy=ConstantOutput(), windows=windows)
    assert plan.windows == DEFAULT_DG_WINDOWS


def test_dispatch_result_rejects_output_outside_windows():
    demand = flat_curve(1.0)
    dg_values = np.zeros(96)
    dg_values[0] = 0.5
    with pytest.raises(ValidationError):
        DispatchResult(
            grid_curve=demand.with_values(demand.values - dg_values),
            dg_curve=demand.with_values(dg_values),
            windows=DEFAULT_DG_WINDOWS,
            capacity=1.0,
        )


def test_indices_reject_inconsistent_result(reference):
    result = apply_dispatch(reference, plan_for(reference))
    with pytest.raises(ValidationError):
        improvement_indices(scale(reference, 2.0), result, FULL_DAY)


def test_loss_reduction_is_quadratic():
    assert loss_reduction_pct(1.0, 0.6) == pytest.approx(64.0)
    assert loss_reduction_pct(10.0, 10.0) == 0.0


def _random_plan(rng, curve):
    top = float(curve.values.max())
    capacity = float(rng.uniform(0.0, top))
    if rng.random() < 0.5:
        policy = ThresholdClip(float(rng.uniform(0.0, top)))
    else:
        policy = ConstantOutput()
    return DgPlan(
        capacity=capacity,
        policy=policy,
        windows=random_windows(rng, curve.grid),
        extend_to_shoulders=bool(rng.random() < 0.5),
    )


def test_dispatch_properties(rng):
    for _ in range(CASES):
        curve = random_curve(rng, step=int(rng.choice([5, 15, 30, 60])))
        plan = _random_plan(rng, curve)
        result = apply_dispatch(curve, plan)
        top = float(curve.values.max())
        grid, dg = result.grid_curve.values, result.dg_curve.values

        assert np.allclose(grid + dg, curve.values, rtol=0.0, atol=1e-12 * top)
        assert np.all(dg >= 0.0)
        assert np.all(dg <= plan.capacity + 1e-12 * top)
        outside = ~curve.grid.mask_for(result.windows)
        assert np.all(dg[outside] == 0.0)
        assert np.all(grid[outside] == curve.values[outside])
        if not plan.extend_to_shoulders or isinstance(plan.policy, ConstantOutput):
            assert result.windows == plan.windows


def test_size_dg_is_scale_equivariant(rng):
    for _ in range(CASES):
        curve = random_curve(rng)
        factor = float(rng.uniform(0.01, 100.0))
        assert size_dg(scale(curve, factor)) == pytest.approx(
            factor * size_dg(curve), rel=1e-9, abs=1e-12
        )


def _brute_force(values, step, plan, base, horizon):
    """Per-sample reimplementation of dispatch plus every report field."""
    n = len(values)
    threshold = getattr(plan.policy, "threshold", None)
    active = [False] * n
    if threshold is not None:
        limit = threshold + 1e-9 * max(1.0, threshold)
    for window in plan.windows:
        lo, hi = window.start_minute // step, window.end_minute // step
        if threshold is not None and plan.extend_to_shoulders:
            while lo > 0 and values[lo - 1] > limit:
                lo -= 1
            while hi < n and values[hi] > limit:
                hi += 1
        for idx in range(lo, hi):
            active[idx] = True

    grid = []
    for idx, demand in enumerate(values):
        if not active[idx]:
            grid.append(demand)
        elif threshold is None:
            grid.append(max(demand - plan.capacity, 0.0))
        else:
            grid.append(max(min(demand, threshold), demand - plan.capacity))
    dg = [demand - after for demand, after in zip(values, grid)]

    def lf(series):
        part = series[horizon.start_minute // step : horizon.end_minute // step]
        return (sum(part) / len(part)) / max(part)

    base_part = values[base.start_minute // step : base.end_minute // step]
    before, after = max(values), max(grid)
    return {
        "p_peak_before": before,
        "p_base": sum(base_part) / len(base_part),
        "p_dg": plan.capacity,
        "p_peak_after": after,
        "lf_before": lf(values),
        "lf_after": lf(grid),
        "peak_reduction_pct": 100.0 * (1.0 - after / before),
        "loss_reduction_at_peak_pct": 100.0 * (1.0 - (after / before) ** 2),
        "dg_energy_mwh_per_day": sum(dg) * step / 60.0,
        "demand_energy_mwh_per_day": sum(values) * step / 60.0,
    }


def test_indices_match_brute_force(rng):
    horizons = [FULL_DAY, TimeWindow(360, 1320), TimeWindow(300, 1380)]
    for case in range(CASES):
        curve = random_curve(rng, step=int(rng.choice([5, 15, 30])))
        plan = _random_plan(rng, curve)
        horizon = horizons[case % len(horizons)]
        result = apply_dispatch(curve, plan)
        report = improvement_indices(curve, result, horizon)

        expected = _brute_force(
            curve.values.tolist(),
            curve.grid.step_minutes,
            plan,
            DEFAULT_BASE_WINDOW,
            horizon,
        )
        for name, value in expected.items():
            assert getattr(report, name) == pytest.approx(
                value, rel=1e-9, abs=1e-9
            ), name


def test_lower_threshold_never_lowers_load_factor(rng):
    for _ in range(CASES):
        curve = random_curve(rng)
        windows = random_windows(rng, curve.grid)
        inside = curve.grid.mask_for(windows)
        top = float(curve.values.max())
        floor = max(float(curve.values[~inside].max()), 1e-6)
        if floor >= top:
            continue
        previous = None
        for threshold in np.linspace(top, floor, 8):
            plan = DgPlan(
                capacity=top,
                policy=ThresholdClip(float(threshold)),
                windows=windows,
                extend_to_shoulders=False,
            )
            result = apply_dispatch(curve, plan)
            lf_after = load_factor(result.grid_curve)
            if previous is not None:
                assert lf_after >= previous - 1e-12
            previous = lf_after


def test_custom_base_window(reference):
    spec = SizingSpec(TimeWindow(0, 300))
    assert size_dg(reference, spec) == 1.0
