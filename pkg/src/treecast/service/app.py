"""FastAPI service exposing the forecasting pipeline.

The endpoints wrap the core package one to one: /forecast fits a model
and returns its recursive forecast, /benchmark evaluates a dataset by
MASE, /inspect returns the model summary (plus the tree listing for
single-tree models) and /plot renders an SVG comparison chart. Domain
errors map to HTTP 400 with the error class name in the detail.

Handlers are synchronous on purpose: fitting is CPU-bound, so FastAPI
dispatches them to its worker threadpool instead of blocking the event
loop.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import TreecastError
from ..evaluation import BenchmarkConfig, run_benchmark
from ..io import emit_plot, save_model
from ..model import create_model, describe_model, forecast, make_tree_params, resolve_method
from ..series import TimeSeries
from ..tree import tree_to_text
from . import schemas

__all__ = ["create_app", "app"]


def _series(payload: schemas.SeriesIn) -> TimeSeries:
    return TimeSeries(payload.values, frequency=payload.frequency, start=tuple(payload.start))


def _tree_params(options: schemas.ModelOptions):
    overrides = (options.min_split, options.min_bucket, options.max_depth, options.cp)
    if all(v is None for v in overrides):
        return None
    return make_tree_params(
        resolve_method(options.method),
        min_split=options.min_split,
        min_bucket=options.min_bucket,
        max_depth=options.max_depth,
        cp=options.cp,
    )


def _fit(options: schemas.ModelOptions, series: TimeSeries):
    return create_model(
        series,
        method=options.method,
        lags=options.lags,
        trend=options.trend,
        transform_features=options.transform_features,
        tree_params=_tree_params(options),
        n_trees=options.n_trees,
        mtry=options.mtry,
        n_diff=options.n_diff,
        seed=options.seed,
    )


def create_app() -> FastAPI:
    app = FastAPI(title="treecast", version=__version__)

    @app.exception_handler(TreecastError)
    async def _domain_error(_: Request, exc: TreecastError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": f"{type(exc).__name__}: {exc}"})

    @app.exception_handler(ValueError)
    async def _value_error(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": f"ValueError: {exc}"})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/forecast", response_model=schemas.ForecastResponse)
    def forecast_endpoint(req: schemas.ForecastRequest) -> schemas.ForecastResponse:
        model = _fit(req, _series(req.series))
        result = forecast(model, req.horizon)
        return schemas.ForecastResponse(
            values=list(result.values),
            start=result.start,
            frequency=result.frequency,
            model_summary=describe_model(model),
            model_json=save_model(model) if req.include_model else None,
        )

    @app.post("/benchmark", response_model=schemas.BenchmarkResponse)
    def benchmark_endpoint(req: schemas.BenchmarkRequest) -> schemas.BenchmarkResponse:
        dataset = []
        for entry in req.series:
            horizon = entry.horizon if entry.horizon is not None else req.horizon
            if horizon is None:
                raise HTTPException(
                    status_code=400,
                    detail=f"series {entry.name!r} has no horizon and no default was given",
                )
            if len(entry.values) <= horizon:
                dataset.append((entry.name, None, entry.values))
                continue
            train = TimeSeries(
                entry.values[: len(entry.values) - horizon],
                frequency=entry.frequency,
                start=tuple(entry.start),
            )
            dataset.append((entry.name, train, entry.values[len(entry.values) - horizon :]))

        usable = [(name, train, actuals) for name, train, actuals in dataset if train is not None]
        config = BenchmarkConfig(
            method=req.method,
            lags=tuple(req.lags) if req.lags else None,
            trend=req.trend,
            transform_features=req.transform_features,
            tree_params=_tree_params(req),
            n_trees=req.n_trees,
            mtry=req.mtry,
            n_diff=req.n_diff,
            seed=req.seed,
        )
        records = []
        if usable:
            report = run_benchmark(usable, config)
            records = list(report.records)
            mean_mase, median_mase = report.mean_mase, report.median_mase
            n_degenerate = report.n_degenerate
        else:
            mean_mase = median_mase = float("nan")
            n_degenerate = 0
        by_name = {r.series_id: r for r in records}
        out = []
        for name, train, actuals in dataset:
            if train is None:
                out.append(
                    schemas.BenchmarkRecordOut(
                        series_id=name,
                        horizon=len(actuals),
                        status="error",
                        message="series is not longer than its horizon",
                    )
                )
                continue
            r = by_name[name]
            out.append(
                schemas.BenchmarkRecordOut(
                    series_id=r.series_id,
                    mase=r.mase if math.isfinite(r.mase) else None,
                    horizon=r.horizon,
                    status=r.status,
                    message=r.message,
                )
            )
        return schemas.BenchmarkResponse(
            records=out,
            mean_mase=mean_mase if math.isfinite(mean_mase) else None,
            median_mase=median_mase if math.isfinite(median_mase) else None,
            n_series=len(out),
            n_degenerate=n_degenerate,
        )

    @app.post("/inspect", response_model=schemas.InspectResponse)
    def inspect_endpoint(req: schemas.InspectRequest) -> schemas.InspectResponse:
        model = _fit(req, _series(req.series))
        dump = tree_to_text(model.regressor) if model.method == "tree" else None
        return schemas.InspectResponse(summary=describe_model(model), tree_dump=dump)

    @app.post("/plot")
    def plot_endpoint(req: schemas.PlotRequest) -> Response:
        series = _series(req.series)
        if req.compare_trends:
            results = {}
            for kind in req.compare_trends:
                options = req.model_copy(update={"trend": kind})
                results[kind] = forecast(_fit(options, series), req.horizon)
            first, *rest = req.compare_trends
            svg = emit_plot(
                series,
                results[first],
                alternatives={k: results[k] for k in rest},
                forecast_label=first,
            )
        else:
            svg = emit_plot(series, forecast(_fit(req, series), req.horizon))
        return Response(content=svg, media_type="image/svg+xml")

    return app


app = create_app()
