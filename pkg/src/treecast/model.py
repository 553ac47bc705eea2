"""The automated forecasting pipeline: lag selection, model creation and
recursive multi-step forecasting.

``create_model`` plus ``forecast`` is the whole user-facing surface. With
everything left at defaults the pipeline picks lags automatically
(seasonal period if one is declared, significant PACF lags otherwise,
falling back to 1..5), applies the additive transform to features and
targets, and fits a random forest.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import SeriesTooShort
from .forest import EnsembleParams, Forest, deep_tree_params, fit_forest
from .pacf import pacf
from .series import LagSet, TimeSeries, build_training_set, prediction_window, shift_period
from .tree import RegressionTree, TreeParams, fit_tree
from .trend import TrendSpec, back_transform_forecast, difference, estimate_n_diff, integrate, transform_examples

__all__ = [
    "METHODS",
    "ForecastModel",
    "ForecastResult",
    "select_lags",
    "create_model",
    "forecast",
    "describe_model",
    "resolve_method",
    "make_tree_params",
]

METHODS = ("tree", "bagging", "random_forest")

_METHOD_ALIASES = {
    "rt": "tree",
    "tree": "tree",
    "bagging": "bagging",
    "rf": "random_forest",
    "random_forest": "random_forest",
}

# Method defaults: 25 trees for bagging; 500 trees with p/3 candidate
# features per split for random forests.
_BAGGING_TREES = 25
_RF_TREES = 500

_PACF_MAX_LAG_CAP = 20
_FALLBACK_LAGS = (1, 2, 3, 4, 5)


def resolve_method(name: str) -> str:
    try:
        return _METHOD_ALIASES[name.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown method {name!r}; expected one of rt, bagging, rf") from None


@dataclass(frozen=True, eq=False)
class ForecastModel:
    """A fitted model bundle: regressor, lags, trend handling and the
    series tail needed to start the forecast recursion.

    ``tail`` holds the last ``max(lags)`` observations on the processed
    scale (differenced when the trend strategy is differencing, original
    otherwise). ``frequency``/``start``/``n_obs`` describe the original
    series for output labeling.
    """

    method: str
    lags: LagSet
    trend: TrendSpec
    regressor: RegressionTree | Forest
    tail: tuple[float, ...]
    frequency: int
    start: tuple[int, int]
    n_obs: int

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if len(self.tail) != self.lags.max_lag:
            raise ValueError("tail length must equal the maximum lag")
        if self.regressor.n_features != len(self.lags):
            raise ValueError("regressor feature count must match the lag count")
        object.__setattr__(self, "tail", tuple(float(v) for v in self.tail))


@dataclass(frozen=True)
class ForecastResult:
    """h future values plus the (cycle, phase) label of the first one."""

    values: tuple[float, ...]
    horizon: int
    start: tuple[int, int]
    frequency: int

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if len(values) != self.horizon:
            raise ValueError("value count must equal the horizon")
        if not all(math.isfinite(v) for v in values):
            raise ValueError("forecast values must be finite")
        object.__setattr__(self, "values", values)


def select_lags(series: TimeSeries) -> LagSet:
    """Automatic lag selection.

    Seasonal series (frequency > 1) get lags 1..frequency. Non-seasonal
    series get the lags whose partial autocorrelation is significant,
    testing lags 1..min(T//3, 20) at a family-wise 5% level; when none
    qualify the fallback is lags 1..5. The maximum lag is always capped at
    T - 2 so at least two training rows exist.
    """
    T = len(series)
    if T < 3:
        raise SeriesTooShort("lag selection needs at least 3 observations")
    if series.frequency > 1:
        chosen = list(range(1, series.frequency + 1))
    else:
        max_lag = min(T // 3, _PACF_MAX_LAG_CAP)
        coeffs = pacf(series.values, max_lag)
        # family-wise 5% significance across the tested lags
        z = NormalDist().inv_cdf(1.0 - 0.05 / (2.0 * max_lag))
        threshold = z / math.sqrt(T)
        chosen = [k for k in range(1, max_lag + 1) if abs(coeffs[k]) > threshold]
        if not chosen:
            chosen = list(_FALLBACK_LAGS)
    cap = T - 2
    chosen = [k for k in chosen if k <= cap]
    return LagSet(chosen or [1])


def make_tree_params(
    method: str,
    min_split: int | None = None,
    min_bucket: int | None = None,
    max_depth: int | None = None,
    cp: float | None = None,
) -> TreeParams:
    """Tree parameters for a method, with optional per-field overrides.

    Single trees start from the classic defaults (min_split 20, cp 0.01);
    ensemble members start deep (min_split 2, cp 0). An overridden
    min_split without an explicit min_bucket re-derives the bucket as
    ceil(min_split / 3).
    """
    base = TreeParams() if method == "tree" else deep_tree_params()
    if min_bucket is None:
        min_bucket = math.ceil(min_split / 3) if min_split is not None else base.min_bucket
    return TreeParams(
        min_split=base.min_split if min_split is None else min_split,
        min_bucket=min_bucket,
        max_depth=base.max_depth if max_depth is None else max_depth,
        cp=base.cp if cp is None else cp,
    )


def _build_trend_spec(
    series: TimeSeries,
    trend: str | None,
    transform_features: bool | None,
    n_diff: int | None,
) -> TrendSpec:
    kind = "additive" if trend is None or trend == "auto" else trend
    if kind in ("additive", "multiplicative"):
        tf = True if transform_features is None else transform_features
        return TrendSpec(kind=kind, transform_features=tf)
    if kind == "none":
        return TrendSpec(kind="none")
    if kind == "differences":
        d = estimate_n_diff(series) if n_diff is None else n_diff
        return TrendSpec(kind="differences", n_diff=d)
    raise ValueError(f"unknown trend {trend!r}")


def create_model(
    series: TimeSeries,
    method: str = "rf",
    lags=None,
    trend: str | None = None,
    transform_features: bool | None = None,
    tree_params: TreeParams | None = None,
    n_trees: int | None = None,
    mtry: int | None = None,
    n_diff: int | None = None,
    seed: int = 0,
) -> ForecastModel:
    """Fit a forecasting model on a series.

    ``lags=None`` selects lags automatically, ``trend=None`` applies the
    automatic policy (additive transform of features and targets).
    ``tree_params`` configures the single tree or the ensemble members;
    ``n_trees``/``mtry``/``seed`` only apply to ensemble methods.
    """
    method = resolve_method(method)
    lag_set = select_lags(series) if lags is None else (lags if isinstance(lags, LagSet) else LagSet(lags))
    spec = _build_trend_spec(series, trend, transform_features, n_diff)

    if spec.kind == "differences":
        work, spec = difference(series, spec.n_diff)
    else:
        work = series

    ts = transform_examples(build_training_set(work, lag_set), spec)

    if method == "tree":
        regressor: RegressionTree | Forest = fit_tree(ts, tree_params or TreeParams())
    else:
        p = ts.n_features
        if method == "bagging":
            params = EnsembleParams(
                n_trees=_BAGGING_TREES if n_trees is None else n_trees,
                mtry=p if mtry is None else mtry,
                tree_params=tree_params or deep_tree_params(),
                seed=seed,
            )
        else:
            params = EnsembleParams(
                n_trees=_RF_TREES if n_trees is None else n_trees,
                mtry=max(1, p // 3) if mtry is None else mtry,
                tree_params=tree_params or deep_tree_params(),
                seed=seed,
            )
        regressor = fit_forest(ts, params)

    max_lag = lag_set.max_lag
    return ForecastModel(
        method=method,
        lags=lag_set,
        trend=spec,
        regressor=regressor,
        tail=tuple(work.values[len(work) - max_lag :]),
        frequency=series.frequency,
        start=series.start,
        n_obs=len(series),
    )


def _one_step(model: ForecastModel, window: np.ndarray) -> float:
    spec = model.trend
    if spec.kind in ("none", "differences"):
        return float(model.regressor.predict(window))
    mean = float(window.mean())
    if spec.kind == "multiplicative" and mean == 0.0:
        # division by zero is undefined; degrade to the additive mapping,
        # which at mean 0 is the identity
        warnings.warn(
            "forecast window mean is zero; using the additive back-transform for this step",
            RuntimeWarning,
            stacklevel=3,
        )
        raw = float(model.regressor.predict(window - mean if spec.transform_features else window))
        return raw + mean
    if spec.kind == "additive":
        x = window - mean if spec.transform_features else window
        raw = float(model.regressor.predict(x))
    else:
        x = window / mean if spec.transform_features else window
        raw = float(model.regressor.predict(x))
    return back_transform_forecast(raw, mean, spec)


def forecast(model: ForecastModel, h: int) -> ForecastResult:
    """Recursive h-step forecast.

    Each step forms the input window from the rolling tail (the newest
    forecasts fill in for the unknown observations), predicts one value,
    back-transforms it and appends it to the tail. With differencing the
    whole recursion runs on the differenced scale and is integrated back
    once at the end.
    """
    if h < 1:
        raise ValueError("forecast horizon must be >= 1")
    history = list(model.tail)
    for _ in range(h):
        window = prediction_window(np.asarray(history), model.lags)
        history.append(_one_step(model, window))
    values = np.asarray(history[-h:])
    if model.trend.kind == "differences":
        values = integrate(values, model.trend)
    return ForecastResult(
        values=tuple(float(v) for v in values),
        horizon=h,
        start=shift_period(model.start, model.n_obs, model.frequency),
        frequency=model.frequency,
    )


def describe_model(model: ForecastModel) -> str:
    """Stable human-readable summary: method, lags and trend policy."""
    if model.method == "tree":
        method_line = "Method: regression tree"
    else:
        params = model.regressor.params
        label = "bagging" if model.method == "bagging" else "random forest"
        mtry = model.regressor.n_features if params.mtry is None else params.mtry
        method_line = f"Method: {label} ({params.n_trees} trees, mtry {mtry})"
    spec = model.trend
    if spec.kind == "none":
        trend_line = "Trend handling: no trend transformation"
    elif spec.kind == "differences":
        trend_line = f"Trend handling: differencing (d={spec.n_diff})"
    else:
        what = "features and targets" if spec.transform_features else "targets"
        trend_line = f"Trend handling: {spec.kind} transformation applied to {what}"
    return "\n".join(
        [
            method_line,
            f"Autoregressive lags: {' '.join(str(k) for k in model.lags)}",
            trend_line,
        ]
    )
