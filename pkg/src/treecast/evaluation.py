"""Forecast accuracy measurement (MASE) and dataset-level benchmarking.

The MASE of a forecast is its mean absolute error scaled by the in-sample
mean absolute error of the seasonal-naive method on the training series.
A dataset benchmark fits and forecasts every series with one shared
configuration and aggregates the per-series MASE into mean and median.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateScale, DimensionMismatch, EmptyDataset, SeriesTooShort, TreecastError
from .model import create_model, forecast
from .series import TimeSeries
from .tree import TreeParams

__all__ = [
    "EvalRecord",
    "BenchmarkReport",
    "BenchmarkConfig",
    "mase",
    "run_benchmark",
    "summarize_records",
    "render_report",
]


@dataclass(frozen=True)
class EvalRecord:
    """Per-series outcome; ``mase`` is NaN unless status is "ok"."""

    series_id: str
    mase: float
    horizon: int
    status: str = "ok"  # "ok" | "degenerate" | "error"
    message: str = ""


@dataclass(frozen=True)
class BenchmarkReport:
    records: tuple[EvalRecord, ...]
    mean_mase: float
    median_mase: float
    n_series: int
    n_degenerate: int


@dataclass(frozen=True)
class BenchmarkConfig:
    """Shared modeling options for a benchmark run."""

    method: str = "rf"
    lags: tuple[int, ...] | None = None
    trend: str | None = None
    transform_features: bool | None = None
    tree_params: TreeParams | None = None
    n_trees: int | None = None
    mtry: int | None = None
    n_diff: int | None = None
    seed: int = 0


def mase(train: TimeSeries, actuals, forecast_values) -> float:
    """Mean absolute scaled error of a forecast.

    The scale is the mean absolute one-season-ahead naive error on the
    training series (lag-f differences, f = the series frequency). Raises
    DegenerateScale when that scale is zero, i.e. the training series is
    seasonally constant.
    """
    y = np.asarray(actuals, dtype=float)
    yhat = np.asarray(forecast_values, dtype=float)
    if y.size != yhat.size or y.size == 0:
        raise DimensionMismatch(f"actuals ({y.size}) and forecast ({yhat.size}) must have equal, nonzero length")
    f = train.frequency
    T = len(train)
    if T <= f:
        raise SeriesTooShort(f"MASE needs a training series longer than its frequency ({T} <= {f})")
    values = train.values
    err_sum = float(np.abs(y - yhat).sum())
    naive_sum = float(np.abs(values[f:] - values[:-f]).sum())
    if naive_sum == 0.0:
        if err_sum == 0.0:
            return 0.0  # an exact forecast costs 0 on any scale
        raise DegenerateScale("seasonal-naive in-sample error is zero; MASE is undefined")
    # single quotient keeps the metric exactly invariant under scaling
    return (err_sum * (T - f)) / (naive_sum * y.size)


def _nan() -> float:
    return float("nan")


def run_benchmark(
    dataset: Iterable[tuple[str, TimeSeries, Sequence[float]]],
    config: BenchmarkConfig | None = None,
) -> BenchmarkReport:
    """Fit and forecast every (id, train, actuals) triple independently.

    Per-series failures become error records instead of aborting the run;
    degenerate MASE denominators are flagged and excluded from aggregates.
    """
    config = config or BenchmarkConfig()
    records: list[EvalRecord] = []
    for series_id, train, actuals in dataset:
        h = len(actuals)
        try:
            model = create_model(
                train,
                method=config.method,
                lags=config.lags,
                trend=config.trend,
                transform_features=config.transform_features,
                tree_params=config.tree_params,
                n_trees=config.n_trees,
                mtry=config.mtry,
                n_diff=config.n_diff,
                seed=config.seed,
            )
            result = forecast(model, h)
            value = mase(train, actuals, result.values)
        except DegenerateScale as exc:
            records.append(EvalRecord(series_id, _nan(), h, status="degenerate", message=str(exc)))
            continue
        except (TreecastError, ValueError) as exc:
            records.append(EvalRecord(series_id, _nan(), h, status="error", message=str(exc)))
            continue
        records.append(EvalRecord(series_id, value, h))
    if not records:
        raise EmptyDataset("benchmark received no series")
    return summarize_records(records)


def summarize_records(records: Sequence[EvalRecord]) -> BenchmarkReport:
    """Aggregate records into a report; only "ok" records enter mean/median."""
    if not records:
        raise EmptyDataset("no records to summarize")
    ok = [r.mase for r in records if r.status == "ok"]
    return BenchmarkReport(
        records=tuple(records),
        mean_mase=float(np.mean(ok)) if ok else _nan(),
        median_mase=float(statistics.median(ok)) if ok else _nan(),
        n_series=len(records),
        n_degenerate=sum(1 for r in records if r.status == "degenerate"),
    )


def render_report(report: BenchmarkReport) -> str:
    """Tabular text: one row per series, then a summary block."""
    lines = ["series_id\tmase\tstatus"]
    for r in report.records:
        value = f"{r.mase:.6g}" if math.isfinite(r.mase) else "NA"
        suffix = f"\t{r.status}" + (f" ({r.message})" if r.message else "")
        lines.append(f"{r.series_id}\t{value}{suffix}")
    lines.append("")
    mean = f"{report.mean_mase:.6g}" if math.isfinite(report.mean_mase) else "NA"
    median = f"{report.median_mase:.6g}" if math.isfinite(report.median_mase) else "NA"
    lines.append(f"mean_mase\t{mean}")
    lines.append(f"median_mase\t{median}")
    lines.append(f"n_series\t{report.n_series}")
    lines.append(f"n_degenerate\t{report.n_degenerate}")
    return "\n".join(lines) + "\n"
