"""Plot specifications and the strict-schema error type."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path


class SchemaError(ValueError):
    """Input CSV (or spec) does not match the documented schema."""


REQUIRED_VALUE_COLUMNS = ("seed", "sv_index", "sv_value")
SUPPORTED_FORMATS = ("png",)


@dataclass
class PlotSpec:
    """What to render: inputs, grouping, cutoff, output target.

    ``group_keys`` name the CSV columns whose value combinations form the
    plotted series (e.g. ["state", "rotation", "k"]).  ``top_k`` caps the
    singular-value index (16 for trial-state runs, 256 for fermion runs).
    """

    input_csvs: list[str]
    output: str
    top_k: int = 16
    group_keys: list[str] = field(default_factory=lambda: ["state", "rotation", "k"])
    format: str = "png"
    log_y: bool = True
    title: str | None = None

    def __post_init__(self):
        if not self.input_csvs:
            raise SchemaError("spec lists no input CSVs")
        if self.top_k < 1:
            raise SchemaError("top_k must be positive")
        if not self.group_keys:
            raise SchemaError("spec lists no grouping keys")
        if self.format not in SUPPORTED_FORMATS:
            raise SchemaError(
                f"format {self.format!r} cannot carry row-checksum metadata; "
                f"supported: {SUPPORTED_FORMATS}"
            )

    @classmethod
    def from_file(cls, path) -> "PlotSpec":
        try:
            raw = json.loads(Path(path).read_text())
        except FileNotFoundError as exc:
            raise SchemaError(f"spec file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(f"spec file is not valid JSON: {exc}") from exc
        known = set(cls.__dataclass_fields__)
        unknown = set(raw) - known
        if unknown:
            raise SchemaError(f"unknown spec keys: {sorted(unknown)}")
        missing = {"input_csvs", "output"} - set(raw)
        if missing:
            raise SchemaError(f"spec is missing required keys: {sorted(missing)}")
        return cls(**raw)
