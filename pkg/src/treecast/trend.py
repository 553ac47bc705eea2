"""Trend-handling strategies and their forecast back-transforms.

Four kinds are supported:

* ``none`` leaves examples untouched;
* ``additive`` subtracts each example's raw feature mean from its target
  (and optionally the features), suiting linear trends and level shifts;
* ``multiplicative`` divides instead, suiting exponential trends;
* ``differences`` trains on a d-times differenced series and integrates
  forecasts back at the end, with d estimated by repeated KPSS
  level-stationarity tests when not given.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SeriesTooShort, SpecMismatch, ZeroFeatureMean
from .series import TimeSeries, TrainingSet, shift_period

__all__ = [
    "TREND_KINDS",
    "TrendSpec",
    "KpssOutcome",
    "KPSS_CRITICAL_5PCT",
    "transform_examples",
    "back_transform_forecast",
    "difference",
    "integrate",
    "kpss_level",
    "estimate_n_diff",
]

TREND_KINDS = ("none", "additive", "multiplicative", "differences")

# 5% critical value of the KPSS level-stationarity test.
KPSS_CRITICAL_5PCT = 0.463


@dataclass(frozen=True)
class TrendSpec:
    """How a model handles trend.

    ``transform_features`` only applies to the additive and multiplicative
    kinds. For ``differences``, ``last_values`` carries the ``n_diff``
    trailing original observations needed to integrate forecasts back.
    """

    kind: str = "none"
    transform_features: bool = True
    n_diff: int = 0
    last_values: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in TREND_KINDS:
            raise ValueError(f"unknown trend kind {self.kind!r}; expected one of {TREND_KINDS}")
        if self.n_diff < 0:
            raise ValueError("n_diff must be >= 0")
        object.__setattr__(self, "last_values", tuple(float(v) for v in self.last_values))


@dataclass(frozen=True)
class KpssOutcome:
    statistic: float
    critical_value: float

    @property
    def reject_stationarity(self) -> bool:
        return self.statistic > self.critical_value


def transform_examples(ts: TrainingSet, spec: TrendSpec) -> TrainingSet:
    """Apply the spec's train-time transform to a training set.

    Additive: ``target' = target - m`` with m the row's raw feature mean,
    and ``features' = features - m`` when ``transform_features``.
    Multiplicative divides instead and requires every m to be nonzero.
    ``none`` and ``differences`` pass examples through unchanged (for
    differences the series itself was transformed before featurization).
    """
    if spec.kind in ("none", "differences"):
        return ts
    m = ts.row_feature_means
    if spec.kind == "additive":
        features = ts.features - m[:, None] if spec.transform_features else ts.features
        targets = ts.targets - m
    else:
        zero = np.flatnonzero(m == 0.0)
        if zero.size:
            raise ZeroFeatureMean(f"training row {int(zero[0])} has a zero feature mean; "
                                  "the multiplicative transform is undefined there")
        features = ts.features / m[:, None] if spec.transform_features else ts.features
        targets = ts.targets / m
    return TrainingSet(
        feature_names=ts.feature_names,
        features=features,
        targets=targets,
        row_feature_means=m,
    )


def back_transform_forecast(raw_prediction: float, input_window_mean: float, spec: TrendSpec) -> float:
    """Map a raw model output back to the series scale for one step."""
    if spec.kind == "additive":
        return raw_prediction + input_window_mean
    if spec.kind == "multiplicative":
        return raw_prediction * input_window_mean
    if spec.kind == "none":
        return raw_prediction
    raise SpecMismatch("differences are inverted with integrate(), not per step")


def difference(series: TimeSeries, d: int) -> tuple[TimeSeries, TrendSpec]:
    """Apply first differencing d times.

    Returns the differenced series and a spec holding the d trailing
    original values needed by ``integrate``. The differenced series keeps
    the frequency and advances the start label by d observations.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    if len(series) <= d:
        raise SeriesTooShort(f"cannot difference a length-{len(series)} series {d} times")
    spec = TrendSpec(
        kind="differences",
        n_diff=d,
        last_values=tuple(series.values[len(series) - d :]) if d else (),
    )
    if d == 0:
        return series, spec
    values = series.values
    for _ in range(d):
        values = np.diff(values)
    out = TimeSeries(values, frequency=series.frequency, start=shift_period(series.start, d, series.frequency))
    return out, spec


def integrate(forecast_on_differenced_scale, spec: TrendSpec) -> np.ndarray:
    """Invert ``difference`` on a block of forecasts via cumulative sums."""
    if spec.kind != "differences":
        raise SpecMismatch(f"integrate needs a differences spec, got kind {spec.kind!r}")
    values = np.asarray(forecast_on_differenced_scale, dtype=float)
    if values.size == 0 or spec.n_diff == 0:
        return values.copy()
    if len(spec.last_values) != spec.n_diff:
        raise SpecMismatch(f"spec carries {len(spec.last_values)} trailing values but n_diff={spec.n_diff}")
    # tails[k] is the tail of the k-times differenced original series
    tails = [np.asarray(spec.last_values, dtype=float)]
    for _ in range(spec.n_diff - 1):
        tails.append(np.diff(tails[-1]))
    for k in range(spec.n_diff - 1, -1, -1):
        values = tails[k][-1] + np.cumsum(values)
    return values


def kpss_level(values, lags: int | None = None) -> KpssOutcome:
    """KPSS level-stationarity statistic with Bartlett-kernel long-run variance.

    ``lags`` defaults to the short truncation ``floor(4 * (T/100)^(1/4))``.
    A series with zero long-run variance (e.g. constant) gets statistic 0,
    i.e. is treated as stationary.
    """
    x = np.asarray(values, dtype=float)
    n = x.size
    if n < 2:
        raise SeriesTooShort("KPSS needs at least 2 observations")
    if lags is None:
        lags = int(4 * (n / 100.0) ** 0.25)
    e = x - x.mean()
    s = np.cumsum(e)
    eta = float(np.dot(s, s)) / (n * n)
    sigma2 = float(np.dot(e, e)) / n
    for h in range(1, lags + 1):
        weight = 1.0 - h / (lags + 1.0)
        sigma2 += 2.0 * weight * float(np.dot(e[h:], e[:-h])) / n
    statistic = 0.0 if sigma2 == 0.0 else eta / sigma2
    return KpssOutcome(statistic=statistic, critical_value=KPSS_CRITICAL_5PCT)


def estimate_n_diff(series: TimeSeries, max_diff: int = 2) -> int:
    """Number of first differences needed for level stationarity.

    Repeats the 5% KPSS test, differencing once whenever stationarity is
    rejected, up to ``max_diff`` times.
    """
    if len(series) < 10:
        raise SeriesTooShort("difference-order estimation needs at least 10 observations")
    values = series.values
    d = 0
    while d < max_diff and kpss_level(values).reject_stationarity:
        values = np.diff(values)
        d += 1
    return d
