"""Time-series containers and autoregressive featurization.

A series plus a set of lags turns into a supervised training set: one row
per predictable time step, with the lagged values as features (highest lag
first) and the next value as target.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import SeriesTooShort

__all__ = [
    "TimeSeries",
    "LagSet",
    "TrainingSet",
    "build_training_set",
    "prediction_window",
    "shift_period",
]


def _frozen_array(values, ndim: int = 1) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        arr = arr.reshape(-1) if ndim == 1 else np.atleast_2d(arr)
    arr.setflags(write=False)
    return arr


def shift_period(start: tuple[int, int], steps: int, frequency: int) -> tuple[int, int]:
    """Advance a (cycle, phase) label by ``steps`` observations."""
    cycle, phase = start
    offset = phase - 1 + steps
    return cycle + offset // frequency, offset % frequency + 1


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered real observations with a seasonal frequency and a start label.

    ``frequency`` is the number of observations per seasonal cycle (1 for
    non-seasonal, 4 for quarterly, 12 for monthly). ``start`` labels the
    first observation as ``(cycle, phase)`` with ``1 <= phase <= frequency``.
    Values are validated to be finite at construction and the stored array
    is read-only, so instances are safe to share between threads.
    """

    values: np.ndarray
    frequency: int = 1
    start: tuple[int, int] = (1, 1)

    def __post_init__(self) -> None:
        arr = _frozen_array(self.values)
        if arr.size < 1:
            raise ValueError("a time series needs at least one observation")
        if not np.isfinite(arr).all():
            raise ValueError("series values must be finite (no NaN or infinities)")
        frequency = int(self.frequency)
        if frequency < 1:
            raise ValueError(f"frequency must be >= 1, got {self.frequency}")
        cycle, phase = self.start
        if not 1 <= int(phase) <= frequency:
            raise ValueError(f"start phase {phase} outside 1..{frequency}")
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "frequency", frequency)
        object.__setattr__(self, "start", (int(cycle), int(phase)))

    def __len__(self) -> int:
        return int(self.values.size)

    def period_after_end(self) -> tuple[int, int]:
        """(cycle, phase) of the period immediately after the last observation."""
        return shift_period(self.start, len(self), self.frequency)


@dataclass(frozen=True)
class LagSet:
    """A nonempty, strictly increasing set of positive autoregressive lags."""

    lags: tuple[int, ...]

    def __init__(self, lags: Iterable[int]):
        items = [int(k) for k in lags]
        if not items:
            raise ValueError("lag set cannot be empty")
        if any(k < 1 for k in items):
            raise ValueError(f"lags must be >= 1, got {items}")
        ordered = tuple(sorted(items))
        if len(set(ordered)) != len(ordered):
            raise ValueError(f"duplicate lags in {items}")
        object.__setattr__(self, "lags", ordered)

    @property
    def max_lag(self) -> int:
        return self.lags[-1]

    def descending(self) -> tuple[int, ...]:
        return tuple(reversed(self.lags))

    def __iter__(self):
        return iter(self.lags)

    def __len__(self) -> int:
        return len(self.lags)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    """Lagged feature matrix plus target vector derived from a series.

    Feature columns are ordered by descending lag ("Lag3", "Lag2", "Lag1").
    ``row_feature_means`` holds the mean of each example's RAW feature
    vector; it is computed before any transform and carried through them,
    so forecasts can always be mapped back to the original scale.
    """

    feature_names: tuple[str, ...]
    features: np.ndarray
    targets: np.ndarray
    row_feature_means: np.ndarray

    def __post_init__(self) -> None:
        features = _frozen_array(self.features, ndim=2)
        targets = _frozen_array(self.targets)
        means = _frozen_array(self.row_feature_means)
        names = tuple(self.feature_names)
        if features.shape[1] != len(names):
            raise ValueError("feature column count does not match feature_names")
        if features.shape[0] != targets.size or targets.size != means.size:
            raise ValueError("features, targets and row_feature_means disagree on row count")
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "row_feature_means", means)

    @property
    def n_examples(self) -> int:
        return int(self.targets.size)

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])


def build_training_set(series: TimeSeries, lags: LagSet) -> TrainingSet:
    """Turn a series and a lag set into a supervised training set.

    For every target index j in ``max_lag+1 .. T`` (1-based) there is one
    row whose features are the values at ``j - lag`` in descending lag
    order and whose target is the value at j.

    Raises SeriesTooShort if no example can be formed (T <= max lag).
    """
    values = series.values
    T = values.size
    m = lags.max_lag
    if T <= m:
        raise SeriesTooShort(f"series of length {T} cannot supply lag {m} examples")
    columns = [values[m - k : T - k] for k in lags.descending()]
    features = np.column_stack(columns)
    return TrainingSet(
        feature_names=tuple(f"Lag{k}" for k in lags.descending()),
        features=features,
        targets=values[m:],
        row_feature_means=features.mean(axis=1),
    )


def prediction_window(history: Sequence[float] | np.ndarray, lags: LagSet) -> np.ndarray:
    """Feature vector for forecasting the value right after ``history``.

    Entry order matches the training set: descending lag, i.e.
    ``history[end + 1 - lag]`` for each lag.
    """
    arr = np.asarray(history, dtype=float)
    n = arr.size
    if n < lags.max_lag:
        raise SeriesTooShort(f"history of length {n} is shorter than max lag {lags.max_lag}")
    return np.array([arr[n - k] for k in lags.descending()])
