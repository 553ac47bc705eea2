"""Pydantic request/response models for the forecasting service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

TrendName = Literal["none", "additive", "multiplicative", "differences"]
MethodName = Literal["rt", "tree", "bagging", "rf", "random_forest"]


class SeriesIn(BaseModel):
    """A univariate series with its seasonal frequency and start label."""

    values: list[float] = Field(..., min_length=1)
    frequency: int = Field(1, ge=1)
    start: tuple[int, int] = (1, 1)


class ModelOptions(BaseModel):
    """Shared modeling knobs; unset fields fall back to method defaults."""

    method: MethodName = "rf"
    lags: Optional[list[int]] = None
    trend: Optional[TrendName] = None
    transform_features: Optional[bool] = None
    seed: int = 0
    min_split: Optional[int] = Field(None, ge=1)
    min_bucket: Optional[int] = Field(None, ge=1)
    max_depth: Optional[int] = Field(None, ge=1)
    cp: Optional[float] = Field(None, ge=0.0, le=1.0)
    n_trees: Optional[int] = Field(None, ge=1)
    mtry: Optional[int] = Field(None, ge=1)
    n_diff: Optional[int] = Field(None, ge=0, le=2)


class ForecastRequest(ModelOptions):
    series: SeriesIn
    horizon: int = Field(..., ge=1)
    include_model: bool = False


class ForecastResponse(BaseModel):
    values: list[float]
    start: tuple[int, int]
    frequency: int
    model_summary: str
    model_json: Optional[str] = None


class BenchmarkSeriesIn(SeriesIn):
    name: str
    horizon: Optional[int] = Field(None, ge=1)


class BenchmarkRequest(ModelOptions):
    series: list[BenchmarkSeriesIn] = Field(..., min_length=1)
    horizon: Optional[int] = Field(None, ge=1)  # fallback for series without one


class BenchmarkRecordOut(BaseModel):
    series_id: str
    mase: Optional[float] = None  # None unless status is "ok"
    horizon: int
    status: str
    message: str = ""


class BenchmarkResponse(BaseModel):
    records: list[BenchmarkRecordOut]
    mean_mase: Optional[float] = None
    median_mase: Optional[float] = None
    n_series: int
    n_degenerate: int


class InspectRequest(ModelOptions):
    series: SeriesIn


class InspectResponse(BaseModel):
    summary: str
    tree_dump: Optional[str] = None


class PlotRequest(ModelOptions):
    series: SeriesIn
    horizon: int = Field(..., ge=1)
    compare_trends: Optional[list[TrendName]] = None


class HealthResponse(BaseModel):
    status: str
    version: str
