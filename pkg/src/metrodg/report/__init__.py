from .charts import render_comparison_png, render_comparison_svg
from .outputs import (
    REPORT_JSON,
    SWEEP_JSON,
    capacity_dir_name,
    dump_json,
    emit_outputs,
    emit_sweep,
    read_report_json,
    report_document,
    write_text,
)
from .pipeline import (
    LF_AFTER_BAND,
    PUBLISHED_LF_AFTER,
    ScenarioResults,
    analyze_scenario,
    build_plan,
    load_demand,
    resolve_out_dir,
    run_scenario,
)

__all__ = [
    "LF_AFTER_BAND",
    "PUBLISHED_LF_AFTER",
    "REPORT_JSON",
    "SWEEP_JSON",
    "ScenarioResults",
    "analyze_scenario",
    "build_plan",
    "capacity_dir_name",
    "dump_json",
    "emit_outputs",
    "emit_sweep",
    "load_demand",
    "read_report_json",
    "render_comparison_png",
    "render_comparison_svg",
    "report_document",
    "resolve_out_dir",
    "run_scenario",
    "write_text",
]
