from __future__ import annotations

import argparse
import logging
import os
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from dotenv import load_dotenv
from rich.console import Console
from rich.progress import (
    BarColumn,
    MofNCompleteColumn,
    Progress,
    TextColumn,
    TimeElapsedColumn,
)
from rich.table import Table

from metrodg.config import (
    AppConfig,
    ScenarioConfig,
    load_app_config,
    load_inputs,
    parse_bool,
    parse_capacity,
    parse_horizon,
    resolve_config_path,
    save_app_config,
)
from metrodg.curve import (
    LoadCurve,
    format_clock,
    load_factor,
    peak,
    peak_index,
    read_curve_csv,
    window_average,
    write_curve_csv,
)
from metrodg.economics import EconomicReport, evaluate_economics
from metrodg.errors import EXIT_OK, MetroDgError, ValidationError
from metrodg.planner import (
    ImprovementReport,
    flattening_capacity,
    size_dg,
    sweep_capacities,
)
from metrodg.report import (
    ScenarioResults,
    analyze_scenario,
    dump_json,
    emit_outputs,
    emit_sweep,
    load_demand,
    read_report_json,
    resolve_out_dir,
    run_scenario,
    write_text,
)

logger = logging.getLogger(__name__)

_DEBUG_VALUES = {"1", "true", "yes", "on"}


def _parse_log_level(value: str | None) -> int | None:
    if not value:
        return None
    level = logging.getLevelName(value.upper())
    return level if isinstance(level, int) else None


def configure_logging() -> None:
    level = _parse_log_level(os.getenv("METRO_DG_LOG"))
    if level is None:
        debug = os.getenv("METRO_DG_DEBUG", "").lower() in _DEBUG_VALUES
        level = logging.DEBUG if debug else logging.WARNING

    logging.basicConfig(
        level=level,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _scenario_from_args(args: argparse.Namespace) -> ScenarioConfig:
    """Scenario file (or defaults) with the command-line flags applied on top."""
    config_path = getattr(args, "config", None)
    base = load_inputs(config_path) if config_path else ScenarioConfig()
    updates: dict[str, object] = {}

    if getattr(args, "reference", False):
        updates["reference"] = True
    curve_path = getattr(args, "curve", None)
    if curve_path is not None:
        curve = read_curve_csv(curve_path)
        updates["measured_curve"] = curve
        if config_path is None:
            updates["grid"] = curve.grid
    if getattr(args, "horizon", None):
        updates["lf_horizon"] = parse_horizon(args.horizon)
    if getattr(args, "policy", None):
        updates["policy"] = args.policy
    if getattr(args, "capacity", None):
        updates["capacity"] = parse_capacity(args.capacity)
    if getattr(args, "threshold", None) is not None:
        updates["threshold"] = args.threshold
    if getattr(args, "peak_mw", None) is not None:
        updates["peak_mw"] = args.peak_mw
    if getattr(args, "strict_windows", False):
        updates["extend_to_shoulders"] = False

    return replace(base, **updates) if updates else base


def _fmt(value: object) -> str:
    if isinstance(value, bool) or value is None:
        return "-" if value is None else str(value).lower()
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)


def _improvement_table(report: ImprovementReport) -> Table:
    table = Table(title=f"DG improvement ({report.unit})")
    table.add_column("Index")
    table.add_column("Value", justify="right")
    rows = [
        ("Peak before", report.p_peak_before),
        ("Base (window mean)", report.p_base),
        ("DG capacity", report.p_dg),
        ("Peak after", report.p_peak_after),
        (f"LF before ({report.lf_horizon})", report.lf_before),
        (f"LF after ({report.lf_horizon})", report.lf_after),
        ("Peak reduction %", report.peak_reduction_pct),
        ("Peak loss reduction %", report.loss_reduction_at_peak_pct),
        (f"DG energy ({report.unit}h/day)", report.dg_energy_mwh_per_day),
        ("DG windows", ", ".join(report.dg_windows)),
    ]
    for label, value in rows:
        table.add_row(label, _fmt(value))
    return table


def _economics_table(economics: EconomicReport) -> Table:
    table = Table(title="Economics (undiscounted)")
    table.add_column("Item")
    table.add_column("Value", justify="right")
    for name, value in economics.to_dict().items():
        table.add_row(name, _fmt(value))
    return table


def _say(console: Console, text: str) -> None:
    console.print(text, markup=False, highlight=False, soft_wrap=True)


def _print_results(console: Console, results: ScenarioResults) -> None:
    console.print(_improvement_table(results.improvement))
    if results.economics is not None:
        console.print(_economics_table(results.economics))
    for note in results.notes:
        _say(console, f"note: {note}")


def handle_synthesize(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    config = _scenario_from_args(args)
    demand, tps, lps = load_demand(config)
    out_dir = resolve_out_dir(config, args.out, app_cfg)
    written = [write_curve_csv(demand, out_dir / "demand.csv")]
    if tps is not None and lps is not None:
        written.append(write_curve_csv(tps, out_dir / "tps.csv"))
        written.append(write_curve_csv(lps, out_dir / "lps.csv"))

    console = Console()
    table = Table(title=f"Synthesised curves ({demand.unit.value})")
    table.add_column("Curve")
    table.add_column("Peak", justify="right")
    table.add_column("LF (24 h)", justify="right")
    table.add_column("Energy", justify="right")
    for name, curve in (("tps", tps), ("lps", lps), ("demand", demand)):
        if curve is None:
            continue
        lf = load_factor(curve) if peak(curve) > 0 else None
        table.add_row(name, _fmt(peak(curve)), _fmt(lf), _fmt(curve.energy()))
    console.print(table)
    for path in written:
        _say(console, f"Wrote {path}")


def _describe_curve(
    console: Console, config: ScenarioConfig, demand: LoadCurve
) -> None:
    table = Table(title=f"Load curve ({config.mode}, {demand.unit.value})")
    table.add_column("Measure")
    table.add_column("Value", justify="right")
    base = config.sizing.base_window
    time = format_clock(peak_index(demand) * demand.grid.step_minutes)
    table.add_row("Grid step (min)", str(demand.grid.step_minutes))
    table.add_row("Peak", _fmt(peak(demand)))
    table.add_row("Peak at", time)
    lf = load_factor(demand, config.lf_horizon)
    table.add_row(f"LF ({config.lf_horizon.label()})", _fmt(lf))
    table.add_row(f"Base mean ({base.label()})", _fmt(window_average(demand, base)))
    table.add_row("DG size (peak - base)", _fmt(size_dg(demand, config.sizing)))
    console.print(table)


def handle_analyze(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    config = _scenario_from_args(args)
    demand, _, _ = load_demand(config)
    _describe_curve(Console(), config, demand)


def handle_plan(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    config = _scenario_from_args(args)
    results = analyze_scenario(config, with_economics=False)
    console = Console()
    _print_results(console, results)
    if args.out is not None:
        emit_outputs(results, args.out, app_cfg)
        _say(console, f"Wrote outputs to {args.out}")


def handle_run(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    config = _scenario_from_args(args)
    out_dir = resolve_out_dir(config, args.out, app_cfg)
    results = run_scenario(config, out_dir, app_cfg)
    console = Console()
    _print_results(console, results)
    _say(console, f"Wrote outputs to {out_dir}")


def handle_economics(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    report, _ = read_report_json(args.report)
    config = load_inputs(args.config) if args.config else ScenarioConfig()
    peak_mw = args.peak_mw if args.peak_mw is not None else config.peak_mw
    economics = evaluate_economics(report, config.costs, peak_mw)
    console = Console()
    console.print(_economics_table(economics))
    if args.out is not None:
        path = write_text(args.out / "economics.json", dump_json(economics.to_dict()))
        _say(console, f"Wrote {path}")


def _parse_capacities(
    text: str, demand: LoadCurve, peak_mw: float | None
) -> list[float]:
    """Comma-separated capacities; bare numbers are in the curve's unit."""
    capacities = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            value = float(token)
        except ValueError:
            value = parse_capacity(token).resolve(demand, peak_mw)
        if value < 0:
            raise ValidationError(f"Capacities must be >= 0, got {token!r}.")
        capacities.append(value)
    if not capacities:
        raise ValidationError("--capacities needs at least one value.")
    return capacities


def handle_sweep(args: argparse.Namespace, app_cfg: AppConfig) -> None:
    config = _scenario_from_args(args)
    demand, _, _ = load_demand(config)
    capacities = _parse_capacities(args.capacities, demand, config.peak_mw)
    out_dir = resolve_out_dir(config, args.out, app_cfg) / "sweep"
    workers = args.workers or app_cfg.sweep_workers

    console = Console()
    with Progress(
        TextColumn("[bold blue]Sweep[/]"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task("sweep", total=len(capacities))
        points = sweep_capacities(
            demand,
            capacities,
            windows=config.dg_windows,
            extend_to_shoulders=config.extend_to_shoulders,
            horizon=config.lf_horizon,
            spec=config.sizing,
            workers=workers,
            on_done=lambda _: progress.advance(task),
        )
    flattening = flattening_capacity(demand, config.sizing)
    sweep_path, _ = emit_sweep(points, out_dir, flattening)

    table = Table(title=f"Capacity sweep ({demand.unit.value})")
    for name in ("Capacity", "Threshold", "Peak after", "LF after", "Peak cut %"):
        table.add_column(name, justify="right")
    for point in points:
        table.add_row(
            _fmt(point.capacity),
            _fmt(point.threshold),
            _fmt(point.report.p_peak_after),
            _fmt(point.report.lf_after),
            _fmt(point.report.peak_reduction_pct),
        )
    console.print(table)
    _say(console, f"Flattening capacity: {_fmt(flattening)} {demand.unit.value}")
    _say(console, f"Wrote {sweep_path}")


def handle_configure(args: argparse.Namespace) -> None:
    config_path = resolve_config_path(args.config_path)
    current = load_app_config(config_path, include_env=False)

    updates: dict[str, object] = {}
    if args.out_dir is not None:
        updates["out_dir"] = args.out_dir.expanduser()
    for name in ("sweep_workers", "chart_width", "chart_height"):
        value = getattr(args, name)
        if value is None:
            continue
        if value <= 0:
            raise ValidationError(f"{name} must be greater than 0, got {value}.")
        updates[name] = value
    if args.png_preview is not None:
        updates["png_preview"] = parse_bool(args.png_preview, "png_preview", False)

    if not updates:
        raise ValidationError("No configuration values provided.")
    path = save_app_config(replace(current, **updates), config_path)
    print(f"Saved config to {path}")


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config", type=Path, default=None, help="Scenario JSON file."
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument(
        "--reference",
        action="store_true",
        default=False,
        help="Use the built-in calibrated two-peak reference curve (per-unit).",
    )
    source.add_argument(
        "--curve", type=Path, default=None, help="Measured load curve CSV."
    )
    parser.add_argument(
        "--out", type=Path, default=None, help="Output directory."
    )
    parser.add_argument(
        "--horizon",
        type=str,
        default=None,
        help="Load factor horizon: full or a window such as 06:00..22:00.",
    )
    parser.add_argument(
        "--peak-mw",
        type=float,
        default=None,
        help="Peak demand in MW, used to price per-unit curves.",
    )


def _add_dispatch_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--policy",
        choices=["clip", "constant"],
        default=None,
        help="DG dispatch policy inside the peak windows.",
    )
    parser.add_argument(
        "--capacity",
        type=str,
        default=None,
        help="DG capacity such as 0.4pu, 5000kW or 5MW (default: peak - base).",
    )
    parser.add_argument(
        "--threshold",
        type=float,
        default=None,
        help="Clip threshold in the curve's unit.",
    )
    parser.add_argument(
        "--strict-windows",
        action="store_true",
        default=False,
        help="Keep DG inside the configured windows; do not cover the shoulders.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metrodg",
        description="Metro load curves, DG sizing, peak dispatch and economics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    configure = sub.add_parser(
        "configure", help="Store default settings on disk."
    )
    configure.add_argument(
        "--config-path",
        type=Path,
        default=None,
        help="Optional config file path override.",
    )
    configure.add_argument(
        "--out-dir", type=Path, default=None, help="Default output directory."
    )
    configure.add_argument(
        "--sweep-workers",
        type=int,
        default=None,
        help="Threads used by the sweep command.",
    )
    configure.add_argument(
        "--png-preview",
        type=str,
        default=None,
        help="Also write comparison.png (true or false).",
    )
    configure.add_argument(
        "--chart-width", type=int, default=None, help="Chart width in pixels."
    )
    configure.add_argument(
        "--chart-height", type=int, default=None, help="Chart height in pixels."
    )

    synthesize = sub.add_parser(
        "synthesize", help="Build the metro demand curve and write it as CSV."
    )
    _add_scenario_args(synthesize)

    analyze = sub.add_parser(
        "analyze", help="Peak, load factor and DG size of a load curve."
    )
    _add_scenario_args(analyze)

    plan = sub.add_parser(
        "plan", help="Size the DG, dispatch it and report the improvement."
    )
    _add_scenario_args(plan)
    _add_dispatch_args(plan)

    run = sub.add_parser("run", help="Full pipeline including economics and files.")
    _add_scenario_args(run)
    _add_dispatch_args(run)

    sweep = sub.add_parser(
        "sweep", help="Evaluate the peak-shaving result for several DG capacities."
    )
    _add_scenario_args(sweep)
    sweep.add_argument(
        "--capacities",
        type=str,
        required=True,
        help="Comma-separated capacities, e.g. 0.1pu,0.2pu,0.4pu.",
    )
    sweep.add_argument(
        "--strict-windows",
        action="store_true",
        default=False,
        help="Keep DG inside the configured windows; do not cover the shoulders.",
    )
    sweep.add_argument(
        "--workers",
        type=int,
        default=None,
        help="Thread count (default from settings).",
    )

    economics = sub.add_parser(
        "economics", help="Price an existing report.json."
    )
    economics.add_argument(
        "--report", type=Path, required=True, help="report.json to price."
    )
    economics.add_argument(
        "--config",
        type=Path,
        default=None,
        help="Scenario JSON carrying the cost assumptions.",
    )
    economics.add_argument(
        "--peak-mw",
        type=float,
        default=None,
        help="Peak demand in MW, used to price per-unit reports.",
    )
    economics.add_argument(
        "--out", type=Path, default=None, help="Write economics.json here."
    )

    return parser


_HANDLERS = {
    "synthesize": handle_synthesize,
    "analyze": handle_analyze,
    "plan": handle_plan,
    "run": handle_run,
    "sweep": handle_sweep,
    "economics": handle_economics,
}


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "configure":
            handle_configure(args)
        else:
            _HANDLERS[args.command](args, load_app_config())
    except MetroDgError as exc:
        if logger.isEnabledFor(logging.DEBUG):
            logger.exception("metrodg %s failed", args.command)
        stage = f"[{exc.stage}]" if exc.stage else ""
        _say(Console(stderr=True), f"error{stage}: {exc.message}")
        return exc.exit_code
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
