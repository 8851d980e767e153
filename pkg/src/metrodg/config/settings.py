from __future__ import annotations

import configparser
import io
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from metrodg.errors import IoError, ParseError, ValidationError

DEFAULT_OUT_DIR = "outputs"
DEFAULT_SWEEP_WORKERS = 4
DEFAULT_CHART_WIDTH = 1024
DEFAULT_CHART_HEIGHT = 560

_TRUE_VALUES = {"1", "true", "yes", "on"}
_FALSE_VALUES = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class AppConfig:
    out_dir: Path
    sweep_workers: int
    png_preview: bool
    chart_width: int
    chart_height: int


def _default_config_dir() -> Path:
    if os.name == "nt":
        base = Path(os.getenv("APPDATA", Path.home() / "AppData" / "Roaming"))
    elif sys.platform == "darwin":
        base = Path.home() / "Library" / "Application Support"
    else:
        base = Path(os.getenv("XDG_CONFIG_HOME", Path.home() / ".config"))
    return base / "metrodg"


def resolve_config_path(explicit: Path | None = None) -> Path:
    if explicit is not None:
        return explicit.expanduser()
    env_path = os.getenv("METRODG_CONFIG_PATH")
    if env_path:
        return Path(env_path).expanduser()
    return _default_config_dir() / "config.ini"


def _clean(value: str | None) -> str | None:
    if value is None:
        return None
    stripped = value.strip()
    return stripped or None


def _parse_int(value: str | None, name: str, default: int) -> int:
    text = _clean(value)
    if text is None:
        return default
    try:
        parsed = int(float(text))
    except ValueError:
        raise ValidationError(f"Invalid {name}: {value!r}") from None
    if parsed <= 0:
        raise ValidationError(f"{name} must be greater than 0, got {parsed}.")
    return parsed


def parse_bool(value: str | None, name: str, default: bool) -> bool:
    text = _clean(value)
    if text is None:
        return default
    lowered = text.lower()
    if lowered in _TRUE_VALUES:
        return True
    if lowered in _FALSE_VALUES:
        return False
    raise ValidationError(f"Invalid {name}: {value!r}. Use true or false.")


def load_app_config(
    config_path: Path | None = None, include_env: bool = True
) -> AppConfig:
    path = resolve_config_path(config_path)
    parser = configparser.ConfigParser()
    if path.is_file():
        try:
            parser.read(path, encoding="utf-8")
        except (configparser.Error, UnicodeDecodeError) as exc:
            raise ParseError(f"unreadable settings file: {exc}", path=path) from None
    section = parser["default"] if parser.has_section("default") else {}

    out_dir = _clean(section.get("out_dir")) or DEFAULT_OUT_DIR
    workers = section.get("sweep_workers")
    png_preview = section.get("png_preview")
    width = section.get("chart_width")
    height = section.get("chart_height")

    if include_env:
        out_dir = os.getenv("METRODG_OUT_DIR") or out_dir
        workers = os.getenv("METRODG_SWEEP_WORKERS") or workers
        png_preview = os.getenv("METRODG_PNG_PREVIEW") or png_preview
        width = os.getenv("METRODG_CHART_WIDTH") or width
        height = os.getenv("METRODG_CHART_HEIGHT") or height

    return AppConfig(
        out_dir=Path(out_dir).expanduser(),
        sweep_workers=_parse_int(workers, "sweep_workers", DEFAULT_SWEEP_WORKERS),
        png_preview=parse_bool(png_preview, "png_preview", False),
        chart_width=_parse_int(width, "chart_width", DEFAULT_CHART_WIDTH),
        chart_height=_parse_int(height, "chart_height", DEFAULT_CHART_HEIGHT),
    )


def save_app_config(config: AppConfig, config_path: Path | None = None) -> Path:
    path = resolve_config_path(config_path)
    parser = configparser.ConfigParser()
    parser["default"] = {
        "out_dir": str(config.out_dir),
        "sweep_workers": str(config.sweep_workers),
        "png_preview": "true" if config.png_preview else "false",
        "chart_width": str(config.chart_width),
        "chart_height": str(config.chart_height),
    }
    buffer = io.StringIO()
    parser.write(buffer)
    content = buffer.getvalue()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if os.name == "posix":
            fd = os.open(path, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(content)
        else:
            path.write_text(content, encoding="utf-8")
    except OSError as exc:
        raise IoError(exc.strerror or str(exc), path=path) from None
    return path
