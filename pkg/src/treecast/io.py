"""File formats: dataset ingestion, forecast output, SVG plots and model
persistence.

Two dataset formats are accepted and normalized to SeriesFileRecord:

* long CSV with header ``series_id,index,value`` and optional metadata
  lines ``#frequency=<int>`` / ``#horizon=<int>``;
* a Monash-style text format: ``@frequency <int>``, optional
  ``@horizon <int>``, an ``@data`` marker, then one series per line as
  ``name:start:value,value,...`` where start is ``cycle`` or
  ``cycle-phase``.

Forecasts write to CSV (``period,value`` rows with a ``#frequency``
header) or JSON, both with 12 significant digits. Saved models are a
versioned JSON document with sorted keys, so equal models serialize to
identical bytes.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    DuplicateSeriesName,
    EmptyDataset,
    NonFiniteValue,
    ParseError,
)
from .forest import Forest
from .model import ForecastModel, ForecastResult
from .series import LagSet, TimeSeries, shift_period
from .tree import RegressionTree
from .trend import TrendSpec

__all__ = [
    "SeriesFileRecord",
    "parse_series_file",
    "write_series_file",
    "record_to_series",
    "period_label",
    "parse_period_label",
    "write_forecast",
    "read_forecast",
    "emit_plot",
    "save_model",
    "load_model",
    "MODEL_FORMAT",
    "MODEL_VERSION",
]

MODEL_FORMAT = "treecast.model"
MODEL_VERSION = 1

_CSV_HEADER = ("series_id", "index", "value")


@dataclass(frozen=True)
class SeriesFileRecord:
    """One series as read from a dataset file."""

    name: str
    values: tuple[float, ...]
    frequency: int = 1
    start: tuple[int, int] = (1, 1)
    horizon: int | None = None


def record_to_series(record: SeriesFileRecord) -> TimeSeries:
    return TimeSeries(record.values, frequency=record.frequency, start=record.start)


def _parse_float(text: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"not a number: {text!r}", line) from None
    if not math.isfinite(value):
        raise NonFiniteValue(f"line {line}: non-finite value {text!r}")
    return value


def _parse_int(text: str, line: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {text!r}", line) from None


def parse_series_file(data: bytes | str) -> list[SeriesFileRecord]:
    """Parse a dataset file, auto-detecting the format."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped:
            if stripped.startswith("@"):
                return _parse_monash(text)
            return _parse_csv(text)
    raise EmptyDataset("input file is empty")


def _parse_csv(text: str) -> list[SeriesFileRecord]:
    frequency = 1
    horizon: int | None = None
    header_seen = False
    order: list[str] = []
    rows: dict[str, dict[int, float]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if not sep:
                raise ParseError(f"metadata line needs key=value, got {line!r}", lineno)
            key = key.strip()
            if key == "frequency":
                frequency = _parse_int(value.strip(), lineno, "frequency")
            elif key == "horizon":
                horizon = _parse_int(value.strip(), lineno, "horizon")
            else:
                raise ParseError(f"unknown metadata key {key!r}", lineno)
            continue
        fields = [f.strip() for f in line.split(",")]
        if not header_seen:
            if tuple(fields) != _CSV_HEADER:
                raise ParseError(f"expected header {','.join(_CSV_HEADER)!r}, got {line!r}", lineno)
            header_seen = True
            continue
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}", lineno)
        name = fields[0]
        if not name:
            raise ParseError("empty series_id", lineno)
        index = _parse_int(fields[1], lineno, "index")
        value = _parse_float(fields[2], lineno)
        if name not in rows:
            rows[name] = {}
            order.append(name)
        if index in rows[name]:
            raise ParseError(f"duplicate index {index} for series {name!r}", lineno)
        rows[name][index] = value
    if not order:
        raise EmptyDataset("no data rows in CSV input")
    records = []
    for name in order:
        by_index = rows[name]
        values = tuple(by_index[i] for i in sorted(by_index))
        records.append(SeriesFileRecord(name=name, values=values, frequency=frequency, horizon=horizon))
    return records


_START_RE = re.compile(r"^(-?\d+)(?:-(\d+))?$")


def _parse_start(text: str, line: int) -> tuple[int, int]:
    m = _START_RE.match(text.strip())
    if not m:
        raise ParseError(f"start must be 'cycle' or 'cycle-phase', got {text!r}", line)
    return int(m.group(1)), int(m.group(2)) if m.group(2) else 1


def _parse_monash(text: str) -> list[SeriesFileRecord]:
    frequency = 1
    horizon: int | None = None
    in_data = False
    records: list[SeriesFileRecord] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if not in_data:
            if line == "@data":
                in_data = True
            elif line.startswith("@frequency"):
                frequency = _parse_int(line[len("@frequency"):].strip(), lineno, "frequency")
            elif line.startswith("@horizon"):
                horizon = _parse_int(line[len("@horizon"):].strip(), lineno, "horizon")
            else:
                raise ParseError(f"unexpected line before @data: {line!r}", lineno)
            continue
        parts = line.split(":")
        if len(parts) != 3:
            raise ParseError(f"expected name:start:values, got {line!r}", lineno)
        name, start_text, values_text = parts
        if not name:
            raise ParseError("empty series name", lineno)
        if name in seen:
            raise DuplicateSeriesName(f"line {lineno}: series {name!r} appears twice")
        seen.add(name)
        start = _parse_start(start_text, lineno)
        items = [v.strip() for v in values_text.split(",")]
        if items == [""]:
            raise ParseError("series has no values", lineno)
        values = tuple(_parse_float(v, lineno) for v in items)
        records.append(
            SeriesFileRecord(name=name, values=values, frequency=frequency, start=start, horizon=horizon)
        )
    if not in_data:
        raise ParseError("missing @data marker")
    if not records:
        raise EmptyDataset("no series after @data")
    return records


def _format_value(v: float) -> str:
    return f"{v:.12g}"


def write_series_file(records: Sequence[SeriesFileRecord], format: str = "monash") -> str:
    """Serialize records to one of the dataset formats.

    All records must share one frequency (both formats carry it per file);
    the horizon is written only when every record agrees on it.
    """
    if not records:
        raise EmptyDataset("nothing to write")
    for r in records:
        if not r.name or any(ch in r.name for ch in ":,\n"):
            raise ValueError(f"series name {r.name!r} cannot be written unambiguously")
    frequencies = {r.frequency for r in records}
    if len(frequencies) > 1:
        raise ValueError("all records in one file must share a frequency")
    frequency = records[0].frequency
    horizons = {r.horizon for r in records}
    horizon = records[0].horizon if len(horizons) == 1 else None
    if format == "monash":
        lines = [f"@frequency {frequency}"]
        if horizon is not None:
            lines.append(f"@horizon {horizon}")
        lines.append("@data")
        for r in records:
            cycle, phase = r.start
            start = str(cycle) if phase == 1 else f"{cycle}-{phase}"
            lines.append(f"{r.name}:{start}:{','.join(_format_value(v) for v in r.values)}")
        return "\n".join(lines) + "\n"
    if format == "csv":
        lines = [f"#frequency={frequency}"]
        if horizon is not None:
            lines.append(f"#horizon={horizon}")
        lines.append(",".join(_CSV_HEADER))
        for r in records:
            for i, v in enumerate(r.values, 1):
                lines.append(f"{r.name},{i},{_format_value(v)}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown series file format {format!r}")


def period_label(cycle: int, phase: int, frequency: int) -> str:
    if frequency == 1:
        return str(cycle)
    if frequency == 4:
        return f"{cycle}Q{phase}"
    if frequency == 12:
        return f"{cycle}M{phase:02d}"
    return f"{cycle}P{phase:02d}"


_LABEL_RE = re.compile(r"^(-?\d+)(?:[QMP](\d+))?$")


def parse_period_label(label: str) -> tuple[int, int]:
    m = _LABEL_RE.match(label.strip())
    if not m:
        raise ParseError(f"bad period label {label!r}")
    return int(m.group(1)), int(m.group(2)) if m.group(2) else 1


def write_forecast(result: ForecastResult, format: str = "csv") -> str:
    """Serialize a forecast with labeled periods, 12 significant digits."""
    if format == "csv":
        lines = [f"#frequency={result.frequency}", "period,value"]
        cycle, phase = result.start
        for v in result.values:
            lines.append(f"{period_label(cycle, phase, result.frequency)},{_format_value(v)}")
            cycle, phase = shift_period((cycle, phase), 1, result.frequency)
        return "\n".join(lines) + "\n"
    if format == "json":
        values = ",".join(_format_value(v) for v in result.values)
        return (
            "{"
            f'"frequency":{result.frequency},'
            f'"start":[{result.start[0]},{result.start[1]}],'
            f'"values":[{values}]'
            "}\n"
        )
    raise ValueError(f"unknown forecast format {format!r}")


def read_forecast(text: str, format: str = "csv") -> ForecastResult:
    if format == "json":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad forecast JSON: {exc}") from None
        return ForecastResult(
            values=tuple(float(v) for v in obj["values"]),
            horizon=len(obj["values"]),
            start=(int(obj["start"][0]), int(obj["start"][1])),
            frequency=int(obj["frequency"]),
        )
    if format == "csv":
        frequency = 1
        start: tuple[int, int] | None = None
        values: list[float] = []
        header_seen = False
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#frequency="):
                frequency = _parse_int(line.split("=", 1)[1], lineno, "frequency")
                continue
            if not header_seen:
                if line != "period,value":
                    raise ParseError(f"expected 'period,value' header, got {line!r}", lineno)
                header_seen = True
                continue
            label, sep, value = line.partition(",")
            if not sep:
                raise ParseError("expected period,value", lineno)
            if start is None:
                start = parse_period_label(label)
            values.append(_parse_float(value, lineno))
        if start is None or not values:
            raise ParseError("forecast CSV has no rows")
        return ForecastResult(values=tuple(values), horizon=len(values), start=start, frequency=frequency)
    raise ValueError(f"unknown forecast format {format!r}")


_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")
_HISTORY_COLOR = "#000000"


def emit_plot(
    history: TimeSeries,
    forecast_result: ForecastResult,
    alternatives: Mapping[str, ForecastResult] | None = None,
    forecast_label: str = "forecast",
    width: int = 800,
    height: int = 480,
) -> str:
    """One SVG document: the history polyline plus one polyline and legend
    entry per forecast. Output is a pure function of the inputs.
    """
    margin = 50.0
    named: list[tuple[str, Sequence[float]]] = [(forecast_label, forecast_result.values)]
    for name, alt in (alternatives or {}).items():
        named.append((name, alt.values))

    T = len(history)
    h_max = max(len(v) for _, v in named)
    x_span = max(T + h_max - 1, 1)
    all_values = list(history.values) + [v for _, vals in named for v in vals]
    lo, hi = min(all_values), max(all_values)
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0

    def sx(i: float) -> float:
        return margin + (width - 2 * margin) * (i / x_span)

    def sy(v: float) -> float:
        return (height - margin) - (height - 2 * margin) * ((v - lo) / (hi - lo))

    def polyline(xs, ys, color) -> str:
        points = " ".join(f"{x:.2f},{y:.2f}" for x, y in zip(xs, ys))
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{points}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
        f'<line x1="{margin:.2f}" y1="{height - margin:.2f}" x2="{width - margin:.2f}" '
        f'y2="{height - margin:.2f}" stroke="#333333"/>',
        f'<line x1="{margin:.2f}" y1="{margin:.2f}" x2="{margin:.2f}" '
        f'y2="{height - margin:.2f}" stroke="#333333"/>',
        f'<text class="axis" x="{margin - 6:.2f}" y="{sy(lo):.2f}" text-anchor="end" '
        f'font-size="11">{_format_value(lo)}</text>',
        f'<text class="axis" x="{margin - 6:.2f}" y="{sy(hi):.2f}" text-anchor="end" '
        f'font-size="11">{_format_value(hi)}</text>',
        polyline([sx(i) for i in range(T)], [sy(v) for v in history.values], _HISTORY_COLOR),
    ]
    for k, (_, vals) in enumerate(named):
        color = _PALETTE[k % len(_PALETTE)]
        xs = [sx(T + i) for i in range(len(vals))]
        parts.append(polyline(xs, [sy(v) for v in vals], color))

    legend_entries = [("history", _HISTORY_COLOR)] + [
        (name, _PALETTE[k % len(_PALETTE)]) for k, (name, _) in enumerate(named)
    ]
    lx, ly = width - margin - 150.0, margin + 4.0
    for i, (name, color) in enumerate(legend_entries):
        y = ly + 16.0 * i
        parts.append(f'<rect x="{lx:.2f}" y="{y:.2f}" width="12" height="12" fill="{color}"/>')
        parts.append(
            f'<text class="legend" x="{lx + 18:.2f}" y="{y + 10:.2f}" font-size="12">{name}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _trend_to_dict(spec: TrendSpec) -> dict:
    return {
        "kind": spec.kind,
        "transform_features": spec.transform_features,
        "n_diff": spec.n_diff,
        "last_values": list(spec.last_values),
    }


def _trend_from_dict(d: dict) -> TrendSpec:
    return TrendSpec(
        kind=d["kind"],
        transform_features=bool(d["transform_features"]),
        n_diff=int(d["n_diff"]),
        last_values=tuple(d["last_values"]),
    )


def save_model(model: ForecastModel) -> str:
    """Serialize a fitted model to the versioned portable JSON format."""
    if isinstance(model.regressor, RegressionTree):
        regressor = {"kind": "tree", **model.regressor.to_dict()}
    else:
        regressor = {"kind": "forest", **model.regressor.to_dict()}
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "method": model.method,
        "lags": list(model.lags),
        "trend": _trend_to_dict(model.trend),
        "tail": list(model.tail),
        "frequency": model.frequency,
        "start": list(model.start),
        "n_obs": model.n_obs,
        "regressor": regressor,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def load_model(text: str | bytes) -> ForecastModel:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad model JSON: {exc}") from None
    if doc.get("format") != MODEL_FORMAT:
        raise ParseError(f"not a {MODEL_FORMAT} document")
    if doc.get("version") != MODEL_VERSION:
        raise ParseError(f"unsupported model version {doc.get('version')!r}")
    reg = doc["regressor"]
    if reg["kind"] == "tree":
        regressor: RegressionTree | Forest = RegressionTree.from_dict(reg)
    elif reg["kind"] == "forest":
        regressor = Forest.from_dict(reg)
    else:
        raise ParseError(f"unknown regressor kind {reg['kind']!r}")
    return ForecastModel(
        method=doc["method"],
        lags=LagSet(doc["lags"]),
        trend=_trend_from_dict(doc["trend"]),
        regressor=regressor,
        tail=tuple(doc["tail"]),
        frequency=int(doc["frequency"]),
        start=(int(doc["start"][0]), int(doc["start"][1])),
        n_obs=int(doc["n_obs"]),
    )
