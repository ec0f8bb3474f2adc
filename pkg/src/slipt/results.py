"""CSV result tables for sweeps.

A table is a ``#``-prefixed metadata block followed by the data section (one
header row, then one row per :class:`~slipt.scenario.SweepRecord`). Numbers are
written with 12 significant digits and no locale formatting, so identical
inputs give byte-identical data sections.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from pathlib import Path
from typing import Sequence

from . import __version__
from .scenario import SweepRecord

COLUMNS = ("policy", "axis_name", "axis_value", "feasible", "energy_j", "T", "A1_a", "B1_a",
           "fov1_deg", "fov2_deg", "rate_bpshz", "sinr_linear")
_FLOAT_COLUMNS = COLUMNS[4:]


def format_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".12g")


def record_row(record: SweepRecord) -> list[str]:
    return [format_number(getattr(record, c)) if c not in ("policy", "axis_name") else getattr(record, c)
            for c in COLUMNS]


def parse_row(row: Sequence[str]) -> SweepRecord:
    if len(row) != len(COLUMNS):
        raise ValueError(f"expected {len(COLUMNS)} columns, got {len(row)}")
    values = dict(zip(COLUMNS, row))
    axis_raw = values["axis_value"]
    fields = {
        "policy": values["policy"],
        "axis_name": values["axis_name"],
        "axis_value": int(axis_raw) if values["axis_name"] == "n" else float(axis_raw),
        "feasible": {"true": True, "false": False}[values["feasible"]],
    }
    for c in _FLOAT_COLUMNS:
        fields[c] = float(values[c]) if values[c] != "" else None
    return SweepRecord(**fields)


def quantize(record: SweepRecord) -> SweepRecord:
    """The record as it reads back from CSV (12 significant digits)."""
    return parse_row(record_row(record))


def metadata(preset: str | None, digest: str, extra: dict | None = None) -> dict:
    meta = {"preset": preset or "", "tool_version": __version__, "config_digest": digest}
    meta.update(extra or {})
    return meta


def data_section(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in records:
        writer.writerow(record_row(r))
    return buf.getvalue()


def render_table(records: Sequence[SweepRecord], meta: dict) -> str:
    head = "".join(f"# {k}: {v}\n" for k, v in meta.items())
    return head + data_section(records)


def write_table(path: str | Path, records: Sequence[SweepRecord], meta: dict) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(render_table(records, meta), encoding="utf-8", newline="")


def write_json(path: str | Path, records: Sequence[SweepRecord], meta: dict) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    rows = [dict(zip(COLUMNS, (dataclasses.asdict(quantize(r))[c] for c in COLUMNS))) for r in records]
    with p.open("w", encoding="utf-8") as handle:
        json.dump({"metadata": meta, "columns": list(COLUMNS), "records": rows}, handle, indent=2)
        handle.write("\n")


def read_table(path_or_text: str | Path) -> tuple[dict, list[SweepRecord]]:
    text = Path(path_or_text).read_text(encoding="utf-8") if isinstance(path_or_text, Path) else path_or_text
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        else:
            body.append(line)
    rows = list(csv.reader(body))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ValueError("missing or unexpected header row")
    return meta, [parse_row(r) for r in rows[1:]]


def split_data_section(text: str) -> str:
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))
