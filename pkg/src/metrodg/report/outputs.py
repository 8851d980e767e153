from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

from metrodg.config import AppConfig
from metrodg.curve import format_float, read_text, write_curve_csv
from metrodg.errors import IoError, ParseError
from metrodg.planner import ImprovementReport, SweepPoint

from .charts import render_comparison_png, render_comparison_svg

if TYPE_CHECKING:
    from .pipeline import ScenarioResults

logger = logging.getLogger(__name__)

DEMAND_CSV = "demand.csv"
GRID_AFTER_CSV = "grid_after.csv"
DG_CSV = "dg.csv"
REPORT_JSON = "report.json"
COMPARISON_SVG = "comparison.svg"
COMPARISON_PNG = "comparison.png"
SWEEP_JSON = "sweep.json"


def report_document(results: "ScenarioResults") -> dict:
    """Flat report: improvement indices, then economics when they were priced."""
    data: dict = {"mode": results.mode}
    data.update(results.improvement.to_dict())
    if results.economics is not None:
        data.update(results.economics.to_dict())
    data["notes"] = list(results.notes)
    return data


def dump_json(data: dict) -> str:
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(exc.strerror or str(exc), path=path) from None
    return path


def emit_outputs(
    results: "ScenarioResults", out_dir: Path, app_cfg: AppConfig | None = None
) -> list[Path]:
    """Writes the curve CSVs, report.json and the comparison chart(s)."""
    width = app_cfg.chart_width if app_cfg else 1024
    height = app_cfg.chart_height if app_cfg else 560
    grid_after = results.dispatch.grid_curve

    written = [
        write_curve_csv(results.demand, out_dir / DEMAND_CSV),
        write_curve_csv(grid_after, out_dir / GRID_AFTER_CSV),
        write_curve_csv(results.dispatch.dg_curve, out_dir / DG_CSV),
        write_text(out_dir / REPORT_JSON, dump_json(report_document(results))),
        write_text(
            out_dir / COMPARISON_SVG,
            render_comparison_svg(results.demand, grid_after, width, height),
        ),
    ]
    if app_cfg is not None and app_cfg.png_preview:
        path = out_dir / COMPARISON_PNG
        try:
            written.append(
                render_comparison_png(results.demand, grid_after, path, width, height)
            )
        except OSError as exc:
            raise IoError(exc.strerror or str(exc), path=path) from None
    logger.info("Wrote %d output files to %s", len(written), out_dir)
    return written


def capacity_dir_name(capacity: float) -> str:
    return f"capacity_{format_float(capacity)}"


def emit_sweep(
    points: Sequence[SweepPoint],
    out_dir: Path,
    flattening_capacity: float | None = None,
) -> tuple[Path, list[Path]]:
    """One report.json per capacity plus a sweep.json summary."""
    reports = []
    summary = []
    used: set[str] = set()
    for idx, point in enumerate(points):
        name = capacity_dir_name(point.capacity)
        if name in used:
            name = f"{name}_{idx}"
        used.add(name)
        data = point.report.to_dict()
        data["threshold"] = point.threshold
        reports.append(write_text(out_dir / name / REPORT_JSON, dump_json(data)))
        summary.append(
            {
                "capacity": point.capacity,
                "threshold": point.threshold,
                "p_peak_after": point.report.p_peak_after,
                "lf_after": point.report.lf_after,
                "peak_reduction_pct": point.report.peak_reduction_pct,
                "report": f"{name}/{REPORT_JSON}",
            }
        )
    document: dict = {"points": summary}
    if flattening_capacity is not None:
        document["flattening_capacity"] = flattening_capacity
    sweep_path = write_text(out_dir / SWEEP_JSON, dump_json(document))
    return sweep_path, reports


def read_report_json(path: Path) -> tuple[ImprovementReport, dict]:
    """Loads a report.json; returns the improvement part and the raw document."""
    text = read_text(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path=path, line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError("report must be a JSON object", path=path)
    try:
        report = ImprovementReport.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), path=path) from None
    return report, data
