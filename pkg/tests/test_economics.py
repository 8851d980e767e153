import pytest

from metrodg.economics import (
    IMMEDIATE,
    CostAssumptions,
    UnitError,
    evaluate_economics,
)
from metrodg.errors import ValidationError
from metrodg.planner import ImprovementReport

COSTS = CostAssumptions(
    dg_capex_per_kw=500.0,
    demand_charge_per_kw_month=10.0,
    grid_energy_tariff_peak=0.15,
    dg_fuel_cost_per_kwh=0.10,
    operating_days_per_year=365,
)


def _report(unit="MW", scale=1.0):
    return ImprovementReport(
        p_peak_before=10.0 * scale,
        p_base=6.0 * scale,
        p_dg=4.0 * scale,
        p_peak_after=6.0 * scale,
        lf_before=0.53,
        lf_after=0.73,
        peak_reduction_pct=40.0,
        loss_reduction_at_peak_pct=64.0,
        dg_energy_mwh_per_day=8.0 * scale,
        demand_energy_mwh_per_day=127.2 * scale,
        unit=unit,
    )


def test_megawatt_report():
    result = evaluate_economics(_report(), COSTS)
    assert result.capex_gross == pytest.approx(2_000_000.0)
    assert result.capex_net == pytest.approx(2_000_000.0)
    assert result.annual_demand_charge_savings == pytest.approx(480_000.0)
    assert result.annual_energy_cost_delta == pytest.approx(146_000.0)
    assert result.annual_net_savings == pytest.approx(626_000.0)
    assert result.simple_payback_years == pytest.approx(2_000_000.0 / 626_000.0)
    assert result.roi_annual_pct == pytest.approx(31.3)
    assert not result.non_positive_savings
    assert not result.avoided_capex_exceeds_gross


def test_per_unit_report_needs_peak():
    with pytest.raises(UnitError):
        evaluate_economics(_report(unit="pu", scale=0.1), COSTS)
    with pytest.raises(UnitError):
        evaluate_economics(_report(unit="pu", scale=0.1), COSTS, peak_mw=0.0)


def test_per_unit_report_scaled_by_peak():
    per_unit = evaluate_economics(_report(unit="pu", scale=0.1), COSTS, peak_mw=10.0)
    absolute = evaluate_economics(_report(), COSTS)
    assert per_unit.annual_net_savings == pytest.approx(absolute.annual_net_savings)
    assert per_unit.capex_gross == pytest.approx(absolute.capex_gross)


def test_avoided_capex_beyond_gross_pays_back_immediately():
    costs = CostAssumptions(
        dg_capex_per_kw=100.0,
        demand_charge_per_kw_month=10.0,
        avoided_emergency_genset_capex=300_000.0,
        avoided_battery_capex=200_000.0,
    )
    result = evaluate_economics(_report(), costs)
    assert result.capex_gross == pytest.approx(400_000.0)
    assert result.capex_net == 0.0
    assert result.avoided_capex_exceeds_gross
    assert result.simple_payback_years == IMMEDIATE


def test_fuel_dearer_than_grid_never_pays_back():
    costs = CostAssumptions(
        dg_capex_per_kw=500.0,
        grid_energy_tariff_peak=0.10,
        dg_fuel_cost_per_kwh=0.30,
    )
    result = evaluate_economics(_report(), costs)
    assert result.annual_net_savings < 0
    assert result.simple_payback_years is None
    assert result.non_positive_savings
    assert result.roi_annual_pct < 0


def test_roi_without_capex():
    free = CostAssumptions(demand_charge_per_kw_month=10.0)
    assert evaluate_economics(_report(), free).roi_annual_pct is None
    nothing = evaluate_economics(_report(), CostAssumptions())
    assert nothing.roi_annual_pct == 0.0
    assert nothing.simple_payback_years is None


def test_cost_assumption_validation():
    with pytest.raises(ValidationError):
        CostAssumptions(dg_capex_per_kw=-1.0)
    with pytest.raises(ValidationError):
        CostAssumptions(operating_days_per_year=400)
    with pytest.raises(ValidationError):
        CostAssumptions(grid_energy_tariff_peak=float("nan"))
    with pytest.raises(ValidationError):
        CostAssumptions.from_dict({"capex": 1.0})


def test_roi_identity_over_random_assumptions(rng):
    for _ in range(100):
        costs = CostAssumptions(
            dg_capex_per_kw=float(rng.uniform(1.0, 2000.0)),
            demand_charge_per_kw_month=float(rng.uniform(0.0, 40.0)),
            grid_energy_tariff_peak=float(rng.uniform(0.0, 0.5)),
            dg_fuel_cost_per_kwh=float(rng.uniform(0.0, 0.5)),
            operating_days_per_year=float(rng.integers(200, 367)),
            avoided_emergency_genset_capex=float(rng.uniform(0.0, 1e6)),
            avoided_battery_capex=float(rng.uniform(0.0, 1e6)),
        )
        result = evaluate_economics(_report(scale=float(rng.uniform(0.1, 10))), costs)
        assert result.roi_annual_pct * result.capex_gross == pytest.approx(
            100.0 * result.annual_net_savings, rel=1e-12, abs=1e-6
        )
        if result.annual_net_savings > 0 and not result.avoided_capex_exceeds_gross:
            assert result.simple_payback_years * result.annual_net_savings == (
                pytest.approx(result.capex_net, rel=1e-12)
            )
