"""treecast: autoregressive time-series forecasting with regression trees,
bagging and random forests."""

from .errors import (
    DegenerateScale,
    DimensionMismatch,
    DuplicateSeriesName,
    EmptyDataset,
    EmptyTrainingSet,
    NonFiniteValue,
    ParseError,
    SeriesTooShort,
    SpecMismatch,
    TreecastError,
    ZeroFeatureMean,
)
from .evaluation import BenchmarkConfig, BenchmarkReport, EvalRecord, mase, render_report, run_benchmark
from .forest import EnsembleParams, Forest, fit_forest, predict_forest
from .io import (
    SeriesFileRecord,
    emit_plot,
    load_model,
    parse_series_file,
    read_forecast,
    record_to_series,
    save_model,
    write_forecast,
    write_series_file,
)
from .model import (
    ForecastModel,
    ForecastResult,
    create_model,
    describe_model,
    forecast,
    select_lags,
)
from .pacf import acf, pacf
from .series import LagSet, TimeSeries, TrainingSet, build_training_set, prediction_window
from .tree import RegressionTree, TreeParams, fit_tree, predict_tree, tree_to_rules, tree_to_text
from .trend import (
    KpssOutcome,
    TrendSpec,
    back_transform_forecast,
    difference,
    estimate_n_diff,
    integrate,
    kpss_level,
    transform_examples,
)

__version__ = "0.1.0"

__all__ = [
    "TimeSeries",
    "LagSet",
    "TrainingSet",
    "build_training_set",
    "prediction_window",
    "TreeParams",
    "RegressionTree",
    "fit_tree",
    "predict_tree",
    "tree_to_rules",
    "tree_to_text",
    "EnsembleParams",
    "Forest",
    "fit_forest",
    "predict_forest",
    "TrendSpec",
    "KpssOutcome",
    "transform_examples",
    "back_transform_forecast",
    "difference",
    "integrate",
    "kpss_level",
    "estimate_n_diff",
    "acf",
    "pacf",
    "ForecastModel",
    "ForecastResult",
    "select_lags",
    "create_model",
    "forecast",
    "describe_model",
    "mase",
    "run_benchmark",
    "render_report",
    "BenchmarkConfig",
    "BenchmarkReport",
    "EvalRecord",
    "SeriesFileRecord",
    "parse_series_file",
    "write_series_file",
    "record_to_series",
    "write_forecast",
    "read_forecast",
    "emit_plot",
    "save_model",
    "load_model",
    "TreecastError",
    "SeriesTooShort",
    "EmptyTrainingSet",
    "EmptyDataset",
    "DimensionMismatch",
    "ZeroFeatureMean",
    "SpecMismatch",
    "DegenerateScale",
    "NonFiniteValue",
    "DuplicateSeriesName",
    "ParseError",
    "__version__",
]
