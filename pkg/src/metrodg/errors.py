from __future__ import annotations

from pathlib import Path

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_IO = 4


class MetroDgError(Exception):
    """Base error. `stage` is filled in when raised inside the pipeline."""

    exit_code = 1

    def __init__(self, message: str, *, stage: str | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class ValidationError(MetroDgError, ValueError):
    exit_code = EXIT_VALIDATION


class ParseError(MetroDgError, ValueError):
    exit_code = EXIT_PARSE

    def __init__(
        self,
        message: str,
        *,
        path: Path | None = None,
        line: int | None = None,
        field: str | None = None,
        stage: str | None = None,
    ) -> None:
        location = []
        if path is not None:
            location.append(str(path))
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field {field!r}")
        text = f"{', '.join(location)}: {message}" if location else message
        super().__init__(text, stage=stage)
        self.path = path
        self.line = line
        self.field = field


class IoError(MetroDgError):
    exit_code = EXIT_IO

    def __init__(
        self, message: str, *, path: Path | None = None, stage: str | None = None
    ) -> None:
        text = f"{path}: {message}" if path is not None else message
        super().__init__(text, stage=stage)
        self.path = path
