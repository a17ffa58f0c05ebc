"""Result tables and their CSV/JSON serialization."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__


def config_hash(config: dict) -> str:
    """SHA-256 of the canonical JSON form of a configuration."""
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def make_metadata(config: dict, seed, timestamp: str | None = None) -> dict:
    return {
        "toolkit_version": __version__,
        "seed": seed,
        "config_hash": config_hash(config),
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


@dataclass
class ResultTable:
    name: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table {self.name!r} has {len(self.columns)} columns")
        self.rows.append(tuple(values))

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    if hasattr(value, "item"):  # numpy scalar
        return _fmt(value.item())
    return str(value)


def _plain(value: Any):
    if hasattr(value, "item"):
        return value.item()
    return value


def emit(table: ResultTable, path, fmt: str = "csv") -> Path:
    """Write a table as CSV (header + rows) or JSON (metadata + columns + rows).

    Floats are written with 17 significant digits so they parse back to the
    same IEEE-754 value. CSV carries no metadata; JSON embeds it.
    """
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(table.columns)
            for row in table.rows:
                w.writerow([_fmt(v) for v in row])
    elif fmt == "json":
        doc = {
            "name": table.name,
            "metadata": table.metadata,
            "columns": table.columns,
            "rows": [[_plain(v) for v in row] for row in table.rows],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return path


def _parse(cell: str):
    if cell in ("true", "false"):
        return cell == "true"
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_csv(path) -> tuple[list[str], list[tuple]]:
    with Path(path).open(newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [tuple(_parse(c) for c in row) for row in r]


def read_json(path) -> ResultTable:
    doc = json.loads(Path(path).read_text())
    return ResultTable(doc["name"], doc["columns"], [tuple(r) for r in doc["rows"]], doc["metadata"])
