"""Command-line client for the forecasting service.

The CLI parses local dataset files, sends modeling work to the HTTP
service (an in-process instance by default, or a remote one via
``--server``) and writes the results. Exit codes: 0 success, 1 usage
error, 2 input parse error, 3 modeling error.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import os
import sys
from pathlib import Path

import httpx

from .errors import TreecastError
from .evaluation import EvalRecord, render_report, summarize_records
from .io import load_model, parse_series_file, write_forecast
from .model import ForecastResult, describe_model
from .tree import RegressionTree, tree_to_text

__all__ = ["main", "entrypoint"]

DEFAULT_SEED = 0

_USAGE_EXIT = 1
_PARSE_EXIT = 2
_MODEL_EXIT = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


def parse_lag_spec(text: str) -> list[int]:
    """``a:b`` (inclusive range), ``k`` or ``k1,k2,...`` into a lag list."""
    text = text.strip()
    if ":" in text:
        lo_text, _, hi_text = text.partition(":")
        lo, hi = int(lo_text), int(hi_text)
        if lo < 1 or hi < lo:
            raise ValueError(f"bad lag range {text!r}")
        return list(range(lo, hi + 1))
    lags = [int(part) for part in text.split(",") if part.strip()]
    if not lags or any(k < 1 for k in lags):
        raise ValueError(f"bad lag list {text!r}")
    return lags


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--help", action="help", help="show this help message and exit")
    common.add_argument("--server", metavar="URL", default=None,
                        help="base URL of a running service (default: run in-process)")
    common.add_argument("--method", default="rf",
                        choices=["rt", "tree", "bagging", "rf", "random_forest"])
    common.add_argument("--lags", type=parse_lag_spec, default=None, metavar="SPEC",
                        help="lag spec: 'a:b', 'k' or 'k1,k2,...' (default: automatic)")
    common.add_argument("--trend", default=None,
                        choices=["none", "additive", "multiplicative", "differences"],
                        help="trend strategy (default: additive, features and targets)")
    common.add_argument("--transform-features", action=argparse.BooleanOptionalAction,
                        default=None, help="also transform features (additive/multiplicative)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--min-split", type=int, default=None)
    common.add_argument("--min-bucket", type=int, default=None)
    common.add_argument("--max-depth", type=int, default=None)
    common.add_argument("--cp", type=float, default=None)
    common.add_argument("--n-trees", type=int, default=None)
    common.add_argument("--mtry", type=int, default=None)
    common.add_argument("--n-diff", type=int, default=None, choices=[0, 1, 2])

    parser = _Parser(prog="treecast", add_help=False,
                     description="Forecast univariate time series with tree ensembles.")
    parser.add_argument("--help", action="help", help="show this help message and exit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_forecast = sub.add_parser("forecast", parents=[common], add_help=False,
                                help="fit a model and forecast future values")
    p_forecast.add_argument("input", help="dataset file (CSV or Monash-style)")
    p_forecast.add_argument("--series", default=None, help="series name when the file has several")
    p_forecast.add_argument("-h", "--horizon", type=int, required=True)
    p_forecast.add_argument("-o", "--output", default=None, help="output path (default: stdout)")
    p_forecast.add_argument("--format", default="csv", choices=["csv", "json"])
    p_forecast.add_argument("--save-model", default=None, metavar="PATH",
                            help="also save the fitted model as JSON")

    p_benchmark = sub.add_parser("benchmark", parents=[common], add_help=False,
                                 help="evaluate a dataset by MASE")
    p_benchmark.add_argument("input")
    p_benchmark.add_argument("-h", "--horizon", type=int, default=None,
                             help="fallback horizon for series without one")
    p_benchmark.add_argument("-o", "--output", default=None)
    p_benchmark.add_argument("--format", default="text", choices=["text", "json"])

    p_inspect = sub.add_parser("inspect", parents=[common], add_help=False,
                               help="print the model summary and tree listing")
    p_inspect.add_argument("input", nargs="?", default=None)
    p_inspect.add_argument("--series", default=None)
    p_inspect.add_argument("--model", default=None, metavar="PATH", help="inspect a saved model file")

    p_plot = sub.add_parser("plot", parents=[common], add_help=False,
                            help="render the series and forecast(s) as SVG")
    p_plot.add_argument("input")
    p_plot.add_argument("--series", default=None)
    p_plot.add_argument("-h", "--horizon", type=int, required=True)
    p_plot.add_argument("--compare-trends", default=None, metavar="LIST",
                        help="comma-separated trend strategies to overlay")
    p_plot.add_argument("-o", "--output", default="plot.svg")

    p_serve = sub.add_parser("serve", parents=[common], add_help=False,
                             help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)

    return parser


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    if server is None:
        from .service.app import create_app

        async def call() -> httpx.Response:
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(transport=transport, base_url="http://treecast.local") as client:
                return await client.post(path, json=payload, timeout=None)

        return asyncio.run(call())
    with httpx.Client(base_url=server, timeout=300.0) as client:
        return client.post(path, json=payload)


def _check(response: httpx.Response) -> None:
    if response.status_code == 200:
        return
    try:
        detail = response.json().get("detail")
    except Exception:
        detail = response.text
    raise TreecastError(f"service error {response.status_code}: {detail}")


def _model_options(args) -> dict:
    return {
        "method": args.method,
        "lags": args.lags,
        "trend": args.trend,
        "transform_features": args.transform_features,
        "seed": args.seed,
        "min_split": args.min_split,
        "min_bucket": args.min_bucket,
        "max_depth": args.max_depth,
        "cp": args.cp,
        "n_trees": args.n_trees,
        "mtry": args.mtry,
        "n_diff": args.n_diff,
    }


def _read_records(path: str):
    return parse_series_file(Path(path).read_bytes())


def _pick_record(records, name: str | None):
    if name is not None:
        for record in records:
            if record.name == name:
                return record
        raise _UsageError(f"series {name!r} not found in input")
    if len(records) > 1:
        names = ", ".join(r.name for r in records[:5])
        if len(records) > 5:
            names += ", ..."
        raise _UsageError(f"input has {len(records)} series ({names}); pick one with --series")
    return records[0]


def _resolve_output(path: str | None) -> Path | None:
    if path is None or path == "-":
        return None
    out = Path(path)
    base = os.environ.get("TREECAST_OUTPUT_DIR")
    if base and not out.is_absolute():
        out = Path(base) / out
    return out


def _write_text(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _series_payload(record) -> dict:
    return {"values": list(record.values), "frequency": record.frequency, "start": list(record.start)}


def _cmd_forecast(args) -> int:
    record = _pick_record(_read_records(args.input), args.series)
    payload = _model_options(args) | {
        "series": _series_payload(record),
        "horizon": args.horizon,
        "include_model": args.save_model is not None,
    }
    response = _post(args.server, "/forecast", payload)
    _check(response)
    body = response.json()
    result = ForecastResult(
        values=tuple(body["values"]),
        horizon=len(body["values"]),
        start=tuple(body["start"]),
        frequency=body["frequency"],
    )
    _write_text(_resolve_output(args.output), write_forecast(result, args.format))
    if args.save_model:
        _write_text(_resolve_output(args.save_model), body["model_json"])
    return 0


def _cmd_benchmark(args) -> int:
    records = _read_records(args.input)
    if args.horizon is None and any(r.horizon is None for r in records):
        missing = [r.name for r in records if r.horizon is None]
        raise _UsageError(f"no horizon for series {missing}; pass -h or add horizons to the file")
    payload = _model_options(args) | {
        "series": [_series_payload(r) | {"name": r.name, "horizon": r.horizon} for r in records],
        "horizon": args.horizon,
    }
    response = _post(args.server, "/benchmark", payload)
    _check(response)
    body = response.json()
    if args.format == "json":
        text = json.dumps(body, sort_keys=True, indent=2) + "\n"
    else:
        eval_records = [
            EvalRecord(
                series_id=r["series_id"],
                mase=r["mase"] if r["mase"] is not None else math.nan,
                horizon=r["horizon"],
                status=r["status"],
                message=r.get("message", ""),
            )
            for r in body["records"]
        ]
        text = render_report(summarize_records(eval_records))
    _write_text(_resolve_output(args.output), text)
    return 0


def _cmd_inspect(args) -> int:
    if args.model:
        model = load_model(Path(args.model).read_text(encoding="utf-8"))
        print(describe_model(model))
        if isinstance(model.regressor, RegressionTree):
            print()
            print(tree_to_text(model.regressor))
        return 0
    if not args.input:
        raise _UsageError("inspect needs an input file or --model")
    record = _pick_record(_read_records(args.input), args.series)
    payload = _model_options(args) | {"series": _series_payload(record)}
    response = _post(args.server, "/inspect", payload)
    _check(response)
    body = response.json()
    print(body["summary"])
    if body.get("tree_dump"):
        print()
        print(body["tree_dump"])
    return 0


def _cmd_plot(args) -> int:
    record = _pick_record(_read_records(args.input), args.series)
    trends = None
    if args.compare_trends:
        trends = [t.strip() for t in args.compare_trends.split(",") if t.strip()]
        allowed = {"none", "additive", "multiplicative", "differences"}
        bad = [t for t in trends if t not in allowed]
        if bad:
            raise _UsageError(f"unknown trend(s) {bad}; choose from {sorted(allowed)}")
    payload = _model_options(args) | {
        "series": _series_payload(record),
        "horizon": args.horizon,
        "compare_trends": trends,
    }
    response = _post(args.server, "/plot", payload)
    _check(response)
    _write_text(_resolve_output(args.output), response.text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("treecast.service.app:app", host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "forecast": _cmd_forecast,
    "benchmark": _cmd_benchmark,
    "inspect": _cmd_inspect,
    "plot": _cmd_plot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            parser.print_usage(sys.stderr)
            return _USAGE_EXIT
        if getattr(args, "horizon", None) is not None and args.horizon < 1:
            raise _UsageError("horizon must be >= 1")
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _USAGE_EXIT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _PARSE_EXIT
    except TreecastError as exc:
        from .errors import ParseError, NonFiniteValue, DuplicateSeriesName, EmptyDataset

        print(f"error: {exc}", file=sys.stderr)
        if isinstance(exc, (ParseError, NonFiniteValue, DuplicateSeriesName, EmptyDataset)):
            return _PARSE_EXIT
        return _MODEL_EXIT


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
