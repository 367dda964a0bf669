"""CSV / JSON / text rendering of results with a single flat schema.

Floats are written with 17 significant digits, which reproduces every
binary64 value exactly when parsed back.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Iterable

from .american import ConvergenceCurve
from .bench import BenchmarkRecord
from .european import Method, PricingResult

__all__ = ["CSV_HEADER", "ResultRow", "to_rows", "render", "emit_results", "read_results"]

CSV_HEADER = ("method", "n_paths", "m", "lanes", "chunk", "seed", "price", "std_error", "elapsed_s")


@dataclass(frozen=True)
class ResultRow:
    method: str
    n_paths: int
    m: int
    lanes: int
    chunk: int
    seed: int
    price: float
    std_error: float
    elapsed_s: float

    @classmethod
    def coerce(cls, raw: dict) -> "ResultRow":
        values = {}
        for f in fields(cls):
            value = raw[f.name]
            if f.type == "str":
                values[f.name] = str(value)
            elif f.type == "int":
                values[f.name] = int(value)
            else:
                values[f.name] = math.nan if value in (None, "", "nan") else float(value)
        return cls(**values)


def _row(item) -> ResultRow:
    if isinstance(item, ResultRow):
        return item
    if isinstance(item, PricingResult):
        return ResultRow(
            Method(item.method).value, item.n_paths, item.m, item.lanes, item.chunk,
            item.seed, item.price, item.std_error, item.elapsed,
        )
    if isinstance(item, BenchmarkRecord):
        return ResultRow(
            Method(item.method).value, item.n_paths, item.m, item.lanes, item.chunk,
            item.seed, item.price, item.std_error, item.elapsed,
        )
    raise TypeError(f"cannot render {type(item).__name__}")


def to_rows(records) -> list[ResultRow]:
    if isinstance(records, ConvergenceCurve):
        return [_row(r) for r in records.results]
    if isinstance(records, (PricingResult, BenchmarkRecord, ResultRow)):
        return [_row(records)]
    rows: list[ResultRow] = []
    for item in records:
        rows.extend(to_rows(item) if isinstance(item, ConvergenceCurve) else [_row(item)])
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _render_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([_fmt(v) for v in astuple(row)])
    return buf.getvalue()


def _json_value(value) -> str:
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, float) and not math.isfinite(value):
        return "null"
    return _fmt(value)


def _render_json(rows: Iterable[ResultRow]) -> str:
    objects = [
        "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in zip(CSV_HEADER, astuple(row))) + "}"
        for row in rows
    ]
    return "[\n" + ",\n".join("  " + o for o in objects) + "\n]\n"


def _render_table(rows: list[ResultRow]) -> str:
    cells = [list(CSV_HEADER)]
    for row in rows:
        r = astuple(row)
        cells.append([r[0], *map(str, r[1:6]), f"{r[6]:.6f}", f"{r[7]:.6f}", f"{r[8]:.4f}"])
    widths = [max(len(c[i]) for c in cells) for i in range(len(CSV_HEADER))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(line, widths)) for line in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def render(records, fmt: str | None) -> str:
    rows = to_rows(records)
    if not rows:
        raise ValueError("nothing to emit: records is empty")
    if fmt == "csv":
        return _render_csv(rows)
    if fmt == "json":
        return _render_json(rows)
    if fmt in (None, "table"):
        return _render_table(rows)
    raise ValueError(f"unknown format {fmt!r}")


def emit_results(records, fmt: str | None = "csv", path: str | Path | None = None) -> None:
    """Write ``records`` to ``path``, or stdout when ``path`` is None or "-"."""
    text = render(records, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror or exc}") from exc


def read_results(source: str | Path, fmt: str | None = None) -> list[ResultRow]:
    """Parse a file written by :func:`emit_results` (format taken from the suffix if not given)."""
    path = Path(source)
    text = path.read_text(encoding="utf-8")
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    if fmt == "json":
        return [ResultRow.coerce(obj) for obj in json.loads(text)]
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [ResultRow.coerce(raw) for raw in reader]
