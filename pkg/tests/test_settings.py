import os
import stat
from pathlib import Path

import pytest

from metrodg.config import (
    AppConfig,
    load_app_config,
    parse_bool,
    resolve_config_path,
    save_app_config,
)
from metrodg.errors import ParseError, ValidationError

ENV_VARS = (
    "METRODG_CONFIG_PATH",
    "METRODG_OUT_DIR",
    "METRODG_SWEEP_WORKERS",
    "METRODG_PNG_PREVIEW",
    "METRODG_CHART_WIDTH",
    "METRODG_CHART_HEIGHT",
)


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ENV_VARS:
        monkeypatch.delenv(name, raising=False)


def test_defaults_without_config_file(tmp_path):
    config = load_app_config(tmp_path / "missing.ini")
    assert config.out_dir == Path("outputs")
    assert config.sweep_workers == 4
    assert config.png_preview is False
    assert (config.chart_width, config.chart_height) == (1024, 560)


def test_save_then_load(tmp_path):
    path = tmp_path / "nested" / "config.ini"
    saved = AppConfig(
        out_dir=tmp_path / "runs",
        sweep_workers=2,
        png_preview=True,
        chart_width=800,
        chart_height=400,
    )
    assert save_app_config(saved, path) == path
    assert load_app_config(path) == saved


@pytest.mark.skipif(os.name != "posix", reason="POSIX permissions")
def test_saved_config_is_private(tmp_path):
    path = save_app_config(load_app_config(tmp_path / "c.ini"), tmp_path / "c.ini")
    assert stat.S_IMODE(path.stat().st_mode) == 0o600


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = tmp_path / "config.ini"
    path.write_text("[default]\nsweep_workers = 2\nout_dir = a\n", encoding="utf-8")
    monkeypatch.setenv("METRODG_SWEEP_WORKERS", "8")
    monkeypatch.setenv("METRODG_PNG_PREVIEW", "yes")
    config = load_app_config(path)
    assert config.sweep_workers == 8
    assert config.png_preview is True
    assert config.out_dir == Path("a")
    assert load_app_config(path, include_env=False).sweep_workers == 2


def test_invalid_values(tmp_path, monkeypatch):
    monkeypatch.setenv("METRODG_SWEEP_WORKERS", "many")
    with pytest.raises(ValidationError):
        load_app_config(tmp_path / "missing.ini")
    monkeypatch.setenv("METRODG_SWEEP_WORKERS", "0")
    with pytest.raises(ValidationError):
        load_app_config(tmp_path / "missing.ini")


def test_parse_bool():
    assert parse_bool("On", "flag", False) is True
    assert parse_bool("0", "flag", True) is False
    assert parse_bool(None, "flag", True) is True
    assert parse_bool("  ", "flag", False) is False
    with pytest.raises(ValidationError):
        parse_bool("maybe", "flag", False)


def test_config_path_resolution(tmp_path, monkeypatch):
    explicit = tmp_path / "explicit.ini"
    assert resolve_config_path(explicit) == explicit
    monkeypatch.setenv("METRODG_CONFIG_PATH", str(tmp_path / "env.ini"))
    assert resolve_config_path() == tmp_path / "env.ini"
    monkeypatch.delenv("METRODG_CONFIG_PATH")
    assert resolve_config_path().name == "config.ini"
    assert resolve_config_path().parent.name == "metrodg"


def test_malformed_settings_file(tmp_path):
    path = tmp_path / "config.ini"
    path.write_text("sweep_workers = 2\n", encoding="utf-8")
    with pytest.raises(ParseError) as info:
        load_app_config(path)
    assert info.value.path == path
    path.write_bytes(b"[default]\nout_dir = \xff\n")
    with pytest.raises(ParseError):
        load_app_config(path)
