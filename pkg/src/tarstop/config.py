"""Key/value config files and MethodParams resolution.

Precedence: built-in defaults < config file < command-line flags.
"""

from __future__ import annotations

from dataclasses import fields
from pathlib import Path

from tarstop.core import MethodParams
from tarstop.errors import ValidationError

_INT_FIELDS = {"gamma", "target_count", "epsilon"}


def parse_config(path: str | Path) -> dict[str, float | int]:
    """Parse ``key = value`` lines; '#' starts a comment, blanks ignored."""
    known = {f.name for f in fields(MethodParams)}
    values: dict[str, float | int] = {}
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in known:
            raise ValidationError(f"{path}:{line_no}: unknown parameter {key!r}")
        try:
            values[key] = int(value) if key in _INT_FIELDS else float(value)
        except ValueError as exc:
            raise ValidationError(f"{path}:{line_no}: {exc}") from exc
    return values


def resolve_params(config_path: str | Path | None = None, **flags) -> MethodParams:
    """Merge defaults, config-file values, and non-None flag overrides."""
    merged: dict[str, float | int] = {}
    if config_path is not None:
        merged.update(parse_config(config_path))
    merged.update({k: v for k, v in flags.items() if v is not None})
    return MethodParams(**merged)
