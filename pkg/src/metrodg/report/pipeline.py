from __future__ import annotations

import logging
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from metrodg.config import AppConfig, ScenarioConfig
from metrodg.curve import LoadCurve, Unit, peak, resample, window_average
from metrodg.demand import reference_curve, synthesize_metro
from metrodg.economics import EconomicReport, evaluate_economics
from metrodg.errors import MetroDgError
from metrodg.planner import (
    ConstantOutput,
    DgPlan,
    DispatchResult,
    ImprovementReport,
    ThresholdClip,
    apply_dispatch,
    improvement_indices,
    size_dg,
)

from .outputs import emit_outputs

logger = logging.getLogger(__name__)

PUBLISHED_LF_AFTER = 0.73
LF_AFTER_BAND = (0.70, 0.80)


@dataclass(frozen=True)
class ScenarioResults:
    mode: str
    demand: LoadCurve
    plan: DgPlan
    dispatch: DispatchResult
    improvement: ImprovementReport
    economics: EconomicReport | None
    notes: tuple[str, ...] = ()
    tps: LoadCurve | None = None
    lps: LoadCurve | None = None


@contextmanager
def _stage(name: str) -> Iterator[None]:
    logger.info("Stage: %s", name)
    try:
        yield
    except MetroDgError as exc:
        if exc.stage is None:
            exc.stage = name
        raise


def load_demand(
    config: ScenarioConfig,
) -> tuple[LoadCurve, LoadCurve | None, LoadCurve | None]:
    """Returns (demand, tps, lps); the parts are None unless synthesised."""
    if config.mode == "reference":
        with _stage("synthesis"):
            return reference_curve(config.reference_lf, config.grid), None, None
    if config.mode == "measured":
        with _stage("load"):
            return resample(config.measured_curve, config.grid), None, None
    with _stage("synthesis"):
        tps, lps, combined = synthesize_metro(
            config.timetable,
            config.traction,
            config.passenger_profile,
            config.lps_model,
            config.ratio,
            config.grid,
            config.lps_peak_mw,
        )
    return combined, tps, lps


def build_plan(config: ScenarioConfig, demand: LoadCurve) -> DgPlan:
    """
    Capacity is `size_dg` unless the scenario pins one. A clip genset cuts at
    the scenario threshold, else at the base-window average for the sized
    capacity, else at peak minus the pinned capacity.
    """
    with _stage("sizing"):
        if config.capacity is None:
            capacity = size_dg(demand, config.sizing)
        else:
            capacity = config.capacity.resolve(demand, config.peak_mw)
        logger.info("DG capacity %.6g %s", capacity, demand.unit.value)

        if config.policy == "constant":
            policy = ConstantOutput()
        elif config.threshold is not None:
            policy = ThresholdClip(config.threshold)
        elif config.capacity is None:
            policy = ThresholdClip(window_average(demand, config.sizing.base_window))
        else:
            policy = ThresholdClip(max(0.0, peak(demand) - capacity))

        return DgPlan(
            capacity=capacity,
            policy=policy,
            windows=config.dg_windows,
            extend_to_shoulders=config.extend_to_shoulders,
        )


def _reference_notes(report: ImprovementReport) -> list[str]:
    low, high = LF_AFTER_BAND
    note = (
        f"lf_after {report.lf_after:.4f} against the published "
        f"{PUBLISHED_LF_AFTER:.2f}; accepted band [{low:.2f}, {high:.2f}]"
    )
    if not low <= report.lf_after <= high:
        logger.warning("Reference run outside the LF band: %s", note)
        note += " (outside band)"
    return [note]


def _economics(
    config: ScenarioConfig, report: ImprovementReport, notes: list[str]
) -> EconomicReport | None:
    if report.unit == Unit.PU.value and config.peak_mw is None:
        message = "economics skipped: per-unit curve and no peak_mw given"
        logger.warning(message)
        notes.append(message)
        return None
    with _stage("economics"):
        return evaluate_economics(report, config.costs, config.peak_mw)


def analyze_scenario(
    config: ScenarioConfig, with_economics: bool = True
) -> ScenarioResults:
    """Synthesis (or load), sizing, dispatch, indices and economics; no files."""
    demand, tps, lps = load_demand(config)
    plan = build_plan(config, demand)
    with _stage("dispatch"):
        result = apply_dispatch(demand, plan)
    with _stage("indices"):
        report = improvement_indices(
            demand, result, config.lf_horizon, config.sizing
        )

    notes: list[str] = []
    if config.mode == "reference":
        notes.extend(_reference_notes(report))
    economics = _economics(config, report, notes) if with_economics else None

    return ScenarioResults(
        mode=config.mode,
        demand=demand,
        plan=plan,
        dispatch=result,
        improvement=report,
        economics=economics,
        notes=tuple(notes),
        tps=tps,
        lps=lps,
    )


def resolve_out_dir(
    config: ScenarioConfig,
    out_dir: Path | None = None,
    app_cfg: AppConfig | None = None,
) -> Path:
    if out_dir is not None:
        return out_dir
    if config.output_dir is not None:
        return config.output_dir
    if app_cfg is not None:
        return app_cfg.out_dir
    return Path("outputs")


def run_scenario(
    config: ScenarioConfig,
    out_dir: Path | None = None,
    app_cfg: AppConfig | None = None,
) -> ScenarioResults:
    results = analyze_scenario(config)
    with _stage("output"):
        emit_outputs(results, resolve_out_dir(config, out_dir, app_cfg), app_cfg)
    return results
