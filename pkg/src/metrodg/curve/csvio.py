from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Sequence

from metrodg.errors import IoError, ParseError, ValidationError

from .core import LoadCurve, TimeGrid, Unit

CURVE_COLUMNS = ("time_min", "power")


def format_float(value: float) -> str:
    """Shortest text that parses back to the identical float."""
    return repr(float(value))


def read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            f"file is not valid UTF-8 (byte offset {exc.start})", path=path
        ) from None
    except OSError as exc:
        raise IoError(exc.strerror or str(exc), path=path) from None


def read_table(
    path: Path, columns: Sequence[str]
) -> tuple[dict[str, str], list[tuple[int, list[float]]]]:
    """
    Reads a numeric CSV with the exact header `columns`.
    Lines starting with `#` before the header carry `key=value` metadata.
    Returns the metadata and (line number, row values) pairs.
    """
    text = read_text(path)
    metadata: dict[str, str] = {}
    rows: list[tuple[int, list[float]]] = []
    header_seen = False

    for line_no, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not cell.strip() for cell in row):
            continue
        first = row[0].strip()
        if first.startswith("#"):
            if header_seen:
                continue
            key, sep, value = ",".join(row).lstrip("#").partition("=")
            if sep:
                metadata[key.strip().lower()] = value.strip()
            continue
        if not header_seen:
            header = tuple(cell.strip() for cell in row)
            if header != tuple(columns):
                raise ParseError(
                    f"expected header {','.join(columns)!r}, got {','.join(row)!r}",
                    path=path,
                    line=line_no,
                )
            header_seen = True
            continue
        if len(row) != len(columns):
            raise ParseError(
                f"expected {len(columns)} columns, got {len(row)}",
                path=path,
                line=line_no,
            )
        parsed = []
        for name, cell in zip(columns, row):
            try:
                number = float(cell)
            except ValueError:
                raise ParseError(
                    f"not a number: {cell.strip()!r}",
                    path=path,
                    line=line_no,
                    field=name,
                ) from None
            if not math.isfinite(number):
                raise ParseError(
                    f"value must be finite: {cell.strip()!r}",
                    path=path,
                    line=line_no,
                    field=name,
                )
            parsed.append(number)
        rows.append((line_no, parsed))

    if not header_seen:
        raise ParseError(f"missing header {','.join(columns)!r}", path=path)
    return metadata, rows


def read_curve_csv(path: Path, default_unit: Unit = Unit.MW) -> LoadCurve:
    metadata, rows = read_table(path, CURVE_COLUMNS)
    try:
        unit = Unit.parse(metadata["unit"]) if "unit" in metadata else default_unit
        grid = TimeGrid.infer(len(rows))
    except ValidationError as exc:
        raise ParseError(exc.message, path=path) from None

    values = []
    for idx, (line_no, (time_min, power)) in enumerate(rows):
        expected = idx * grid.step_minutes
        if time_min != expected:
            raise ParseError(
                f"time_min {time_min:g} breaks the {grid.step_minutes}-minute grid "
                f"(expected {expected})",
                path=path,
                line=line_no,
                field="time_min",
            )
        if power < 0:
            raise ParseError(
                f"power must be non-negative, got {power:g}",
                path=path,
                line=line_no,
                field="power",
            )
        values.append(power)
    return LoadCurve(grid, values, unit)


def curve_to_csv(curve: LoadCurve) -> str:
    lines = [f"# unit={curve.unit.value}", ",".join(CURVE_COLUMNS)]
    for start, value in zip(curve.grid.sample_starts(), curve.values):
        lines.append(f"{int(start)},{format_float(value)}")
    return "\n".join(lines) + "\n"


def write_curve_csv(curve: LoadCurve, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(curve_to_csv(curve), encoding="utf-8")
    except OSError as exc:
        raise IoError(exc.strerror or str(exc), path=path) from None
    return path
