from .core import (
    FULL_DAY,
    MINUTES_PER_DAY,
    AllZeroInHorizon,
    EmptyWindow,
    GridMismatch,
    IncompatibleGrids,
    LoadCurve,
    MisalignedWindow,
    TimeGrid,
    TimeWindow,
    Unit,
    UnitMismatch,
    check_disjoint,
    format_clock,
    linear_combine,
    load_factor,
    parse_clock,
    peak,
    peak_index,
    resample,
    scale,
    window_average,
)
from .csvio import (
    curve_to_csv,
    format_float,
    read_curve_csv,
    read_table,
    read_text,
    write_curve_csv,
)

__all__ = [
    "FULL_DAY",
    "MINUTES_PER_DAY",
    "AllZeroInHorizon",
    "EmptyWindow",
    "GridMismatch",
    "IncompatibleGrids",
    "LoadCurve",
    "MisalignedWindow",
    "TimeGrid",
    "TimeWindow",
    "Unit",
    "UnitMismatch",
    "check_disjoint",
    "curve_to_csv",
    "format_clock",
    "format_float",
    "linear_combine",
    "load_factor",
    "parse_clock",
    "peak",
    "peak_index",
    "read_curve_csv",
    "read_table",
    "read_text",
    "resample",
    "scale",
    "window_average",
    "write_curve_csv",
]
