from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, fields

from metrodg.errors import ValidationError
from metrodg.planner import ImprovementReport

logger = logging.getLogger(__name__)

KW_PER_MW = 1000.0
MONTHS_PER_YEAR = 12
IMMEDIATE = "immediate"


class UnitError(ValidationError):
    pass


@dataclass(frozen=True)
class CostAssumptions:
    dg_capex_per_kw: float = 0.0
    demand_charge_per_kw_month: float = 0.0
    grid_energy_tariff_peak: float = 0.0
    dg_fuel_cost_per_kwh: float = 0.0
    operating_days_per_year: float = 365
    avoided_emergency_genset_capex: float = 0.0
    avoided_battery_capex: float = 0.0

    def __post_init__(self) -> None:
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValidationError(f"{item.name} must be a number, got {value!r}.")
            if not math.isfinite(value):
                raise ValidationError(f"{item.name} must be a finite number.")
            if value < 0:
                raise ValidationError(f"{item.name} must be >= 0, got {value}.")
        if not 1 <= self.operating_days_per_year <= 366:
            raise ValidationError(
                "operating_days_per_year must lie in [1, 366], "
                f"got {self.operating_days_per_year}."
            )

    @classmethod
    def from_dict(cls, data: dict) -> "CostAssumptions":
        known = {item.name for item in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"Unknown cost fields: {', '.join(unknown)}.")
        return cls(**data)


@dataclass(frozen=True)
class EconomicReport:
    capex_gross: float
    capex_net: float
    avoided_capex_exceeds_gross: bool
    annual_demand_charge_savings: float
    annual_energy_cost_delta: float
    annual_net_savings: float
    # years, IMMEDIATE, or None when savings are not positive
    simple_payback_years: float | str | None
    roi_annual_pct: float | None
    non_positive_savings: bool

    def to_dict(self) -> dict:
        return asdict(self)


def _kw_scale(report: ImprovementReport, peak_mw: float | None) -> float:
    if report.unit == "MW":
        return KW_PER_MW
    if report.unit == "pu":
        if peak_mw is None:
            raise UnitError(
                "Per-unit report needs a peak demand in MW to price it "
                "(pass peak_mw)."
            )
        if not math.isfinite(peak_mw) or peak_mw <= 0:
            raise UnitError(f"peak_mw must be positive, got {peak_mw}.")
        return peak_mw * KW_PER_MW
    raise UnitError(f"Unknown report unit {report.unit!r}.")


def evaluate_economics(
    report: ImprovementReport,
    assumptions: CostAssumptions,
    peak_mw: float | None = None,
) -> EconomicReport:
    """Undiscounted first cost, yearly savings, simple payback and ROI."""
    kw = _kw_scale(report, peak_mw)
    capacity_kw = report.p_dg * kw
    peak_cut_kw = (report.p_peak_before - report.p_peak_after) * kw
    dg_kwh_per_day = report.dg_energy_mwh_per_day * kw

    capex_gross = assumptions.dg_capex_per_kw * capacity_kw
    avoided = (
        assumptions.avoided_emergency_genset_capex
        + assumptions.avoided_battery_capex
    )
    capex_raw = capex_gross - avoided
    demand_savings = (
        MONTHS_PER_YEAR * assumptions.demand_charge_per_kw_month * peak_cut_kw
    )
    energy_delta = (
        assumptions.operating_days_per_year
        * dg_kwh_per_day
        * (assumptions.grid_energy_tariff_peak - assumptions.dg_fuel_cost_per_kwh)
    )
    net_savings = demand_savings + energy_delta
    capex_net = max(0.0, capex_raw)

    if net_savings <= 0:
        payback: float | str | None = None
        if capacity_kw > 0:
            logger.warning(
                "DG does not pay back: annual net savings are %.2f.", net_savings
            )
    elif capex_raw <= 0:
        payback = IMMEDIATE
    else:
        payback = capex_raw / net_savings

    if capex_gross > 0:
        roi: float | None = 100.0 * net_savings / capex_gross
    else:
        roi = 0.0 if net_savings == 0 else None

    return EconomicReport(
        capex_gross=capex_gross,
        capex_net=capex_net,
        avoided_capex_exceeds_gross=capex_raw < 0,
        annual_demand_charge_savings=demand_savings,
        annual_energy_cost_delta=energy_delta,
        annual_net_savings=net_savings,
        simple_payback_years=payback,
        roi_annual_pct=roi,
        non_positive_savings=net_savings <= 0,
    )
