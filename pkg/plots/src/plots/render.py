"""Render singular-value spectra from schmidt-cert CSV output.

One series per combination of the grouping keys; each series shows the
median across seeds with a min-max band, versus the singular-value index.
Values are plotted exactly as read (normalization happened upstream).  The
SHA-256 of the concatenated raw bytes of the input CSVs is embedded in the
image metadata under ``schmidt-cert-rows-sha256`` so a figure can always be
matched to the rows it was drawn from.
"""

from __future__ import annotations

import csv
import hashlib
from collections import defaultdict
from pathlib import Path
from statistics import median

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .spec import REQUIRED_VALUE_COLUMNS, PlotSpec, SchemaError

CHECKSUM_KEY = "schmidt-cert-rows-sha256"


def rows_checksum(paths) -> str:
    digest = hashlib.sha256()
    for path in paths:
        digest.update(Path(path).read_bytes())
    return digest.hexdigest()


def _read_rows(path, required: set[str]) -> list[dict]:
    try:
        with open(path, newline="") as handle:
            reader = csv.DictReader(handle)
            columns = reader.fieldnames or []
            missing = sorted(required - set(columns))
            if missing:
                raise SchemaError(
                    f"{path}: missing columns {missing}; found {sorted(columns)}"
                )
            rows = list(reader)
    except FileNotFoundError as exc:
        raise SchemaError(f"input CSV not found: {path}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows (empty seed group)")
    return rows


def _series(spec: PlotSpec, rows: list[dict]) -> dict:
    grouped: dict[tuple, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        try:
            index = int(row["sv_index"])
            value = float(row["sv_value"])
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"malformed row {row!r}") from exc
        if index >= spec.top_k:
            continue
        key = tuple(row[k] for k in spec.group_keys)
        if any(v is None for v in key):
            raise SchemaError(f"row missing grouping values: {row!r}")
        grouped[key][index].append(value)
    if not grouped:
        raise SchemaError(
            f"no rows survive the top_k={spec.top_k} cutoff; refusing to emit an empty plot"
        )
    return grouped


def render(spec: PlotSpec) -> str:
    """Render the figure described by the spec; returns the output path."""
    required = set(spec.group_keys) | set(REQUIRED_VALUE_COLUMNS)
    rows = []
    for path in spec.input_csvs:
        rows.extend(_read_rows(path, required))
    grouped = _series(spec, rows)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for key in sorted(grouped):
        per_index = grouped[key]
        indices = sorted(per_index)
        med = [median(per_index[i]) for i in indices]
        low = [min(per_index[i]) for i in indices]
        high = [max(per_index[i]) for i in indices]
        label = ", ".join(f"{name}={value}" for name, value in zip(spec.group_keys, key))
        line, = ax.plot(indices, med, marker="o", markersize=3, label=label)
        ax.fill_between(indices, low, high, alpha=0.2, color=line.get_color())
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel("singular value index")
    ax.set_ylabel("rescaled singular value")
    if spec.title:
        ax.set_title(spec.title)
    ax.legend(fontsize=7)
    fig.tight_layout()

    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(
        out,
        format=spec.format,
        metadata={CHECKSUM_KEY: rows_checksum(spec.input_csvs)},
    )
    plt.close(fig)
    return str(out)
