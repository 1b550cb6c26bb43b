"""Machine-readable result tables with deterministic CSV/JSON export.

CSV layout: leading ``# key=value`` metadata lines, a header row of column
names, then one newline-terminated row per sweep point with every number
printed to 17 significant digits, so a re-imported table reproduces the
original float64 values bit for bit and re-export is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable


@dataclass(frozen=True)
class ResultTable:
    """Rectangular numeric table plus a metadata block."""

    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    meta: dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        width = len(self.columns)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")

    def column(self, name: str) -> list[float]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def make_table(
    columns: Iterable[str],
    rows: Iterable[Iterable[float]],
    meta: dict[str, object] | None = None,
) -> ResultTable:
    return ResultTable(
        columns=tuple(columns),
        rows=tuple(tuple(float(x) for x in row) for row in rows),
        meta=dict(meta or {}),
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _meta_value(value: object) -> str:
    if isinstance(value, float):
        return _fmt(value)
    return str(value)


def to_csv(table: ResultTable) -> str:
    lines = [f"# {key}={_meta_value(value)}" for key, value in table.meta.items()]
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def to_json(table: ResultTable) -> str:
    # allow_nan=False: an undefined cell (inf/nan, e.g. a degenerate SNR)
    # must fail loudly instead of emitting non-standard JSON tokens.
    payload = {
        "meta": table.meta,
        "columns": list(table.columns),
        "rows": [list(row) for row in table.rows],
    }
    return json.dumps(payload, indent=2, sort_keys=False, allow_nan=False) + "\n"


def from_csv(text: str) -> ResultTable:
    meta: dict[str, object] = {}
    lines = [ln for ln in text.splitlines() if ln]
    body = []
    for ln in lines:
        if ln.startswith("#"):
            key, _, value = ln[1:].strip().partition("=")
            meta[key.strip()] = value
        else:
            body.append(ln)
    if not body:
        raise ValueError("CSV has no header row")
    columns = tuple(body[0].split(","))
    rows = tuple(tuple(float(x) for x in ln.split(",")) for ln in body[1:])
    return ResultTable(columns=columns, rows=rows, meta=meta)


def validate_table_json(obj: object) -> None:
    """Enforce the shipped result-table schema on a decoded JSON object."""
    if not isinstance(obj, dict):
        raise ValueError("table JSON must be an object")
    for key in ("meta", "columns", "rows"):
        if key not in obj:
            raise ValueError(f"missing required key {key!r}")
    extra = set(obj) - {"meta", "columns", "rows"}
    if extra:
        raise ValueError(f"unexpected keys {sorted(extra)}")
    meta = obj["meta"]
    if not isinstance(meta, dict):
        raise ValueError("meta must be an object")
    for key in ("scenario", "kind", "version"):
        if not isinstance(meta.get(key), str):
            raise ValueError(f"meta.{key} must be a string")
    if "seed" in meta and not isinstance(meta["seed"], int):
        raise ValueError("meta.seed must be an integer")
    columns = obj["columns"]
    if not isinstance(columns, list) or not all(isinstance(c, str) for c in columns):
        raise ValueError("columns must be an array of strings")
    rows = obj["rows"]
    if not isinstance(rows, list):
        raise ValueError("rows must be an array")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(columns):
            raise ValueError(f"row {i} is not an array of width {len(columns)}")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in row):
            raise ValueError(f"row {i} contains a non-numeric cell")


def schema_text() -> str:
    """The shipped JSON schema for exported tables."""
    return resources.files(__package__).joinpath("result_table.schema.json").read_text()


def export(table: ResultTable, fmt: str, destination: str | Path) -> Path:
    """Write the table as ``fmt`` ("csv" or "json") to ``destination``."""
    if fmt == "csv":
        text = to_csv(table)
    elif fmt == "json":
        text = to_json(table)
    else:
        raise ValueError(f"unknown format {fmt!r} (expected 'csv' or 'json')")
    path = Path(destination)
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path
