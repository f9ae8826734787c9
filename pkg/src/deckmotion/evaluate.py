"""One-step-ahead evaluation: predictions from observed history, absolute
error curves, and per-channel MAE.

Every prediction consumes the true preceding lookback window (never prior
predictions), is computed in normalized space, and is reported de-normalized
in physical units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lstm import predict_windows
from .seriesdata import MotionSeries, Normalizer
from .training import ModelArtifact
from .wavegen import CHANNELS


@dataclass(frozen=True)
class ForecastResult:
    """Aligned predictions and truths at strictly increasing source indices."""

    target_indices: np.ndarray  # (m,) int
    predictions: np.ndarray  # (m, 3), physical units
    truths: np.ndarray  # (m, 3), physical units

    def __post_init__(self):
        if not (len(self.target_indices) == len(self.predictions) == len(self.truths)):
            raise ValueError("target_indices, predictions and truths must have equal length")
        if len(self.target_indices) == 0:
            raise ValueError("forecast result must be non-empty")
        if np.any(np.diff(self.target_indices) <= 0):
            raise ValueError("target_indices must be strictly increasing")

    def __len__(self) -> int:
        return len(self.target_indices)


@dataclass(frozen=True)
class ErrorReport:
    """Per-channel absolute error curves with their MAE and maximum."""

    abs_errors: np.ndarray  # (m, 3)
    mae: np.ndarray  # (3,)
    max_error: np.ndarray  # (3,)


def predict_series(
    artifact: ModelArtifact,
    series: MotionSeries,
    start_index: int | None = None,
    normalizer: Normalizer | None = None,
) -> ForecastResult:
    """Predict sample j from the true samples j-lookback..j-1, for every
    j from start_index (default: lookback) to the series end.

    normalizer overrides the artifact's stored normalizer (used by the
    re-normalization CLI flag); predictions always come back de-normalized.
    """
    lookback = artifact.config.lookback
    if start_index is None:
        start_index = lookback
    if start_index < lookback:
        raise ValueError(f"start_index {start_index} is below lookback {lookback}")
    n = len(series)
    if n < lookback + 1:
        raise ValueError(f"series length {n} is shorter than lookback + 1 = {lookback + 1}")
    if start_index >= n:
        raise ValueError(f"start_index {start_index} leaves no samples to predict (n={n})")
    norm = normalizer if normalizer is not None else artifact.normalizer

    x = series.samples
    indices = np.arange(start_index, n, dtype=np.int64)
    rows = indices[:, None] + np.arange(-lookback, 0)[None, :]
    windows = norm.apply(x[rows])
    preds = norm.invert(predict_windows(artifact.params, windows))
    return ForecastResult(target_indices=indices, predictions=preds, truths=x[indices])


def error_report(result: ForecastResult) -> ErrorReport:
    """Absolute error per point and channel, plus channel MAE and maximum."""
    abs_errors = np.abs(result.predictions - result.truths)
    return ErrorReport(
        abs_errors=abs_errors,
        mae=abs_errors.mean(axis=0),
        max_error=abs_errors.max(axis=0),
    )


def summary_dict(report: ErrorReport, count: int) -> dict:
    """JSON-ready {channel: {mae, max_error}, count} summary."""
    doc = {
        name: {"mae": float(report.mae[k]), "max_error": float(report.max_error[k])}
        for k, name in enumerate(CHANNELS)
    }
    doc["count"] = count
    return doc


def errors_to_csv(result: ForecastResult, report: ErrorReport, dt: float, t0: float = 0.0) -> str:
    """Long-format CSV: t,channel,truth,prediction,abs_error."""
    lines = ["t,channel,truth,prediction,abs_error"]
    for k in range(len(result)):
        t = t0 + int(result.target_indices[k]) * dt
        for j, name in enumerate(CHANNELS):
            lines.append(
                f"{t!r},{name},{float(result.truths[k, j])!r},"
                f"{float(result.predictions[k, j])!r},{float(report.abs_errors[k, j])!r}"
            )
    return "\n".join(lines) + "\n"


def forecast_to_series(result: ForecastResult, dt: float, t0: float = 0.0) -> MotionSeries:
    """Predicted channels as a MotionSeries (requires contiguous indices)."""
    idx = result.target_indices
    if len(idx) > 1 and np.any(np.diff(idx) != 1):
        raise ValueError("forecast indices are not contiguous")
    return MotionSeries(dt=dt, samples=result.predictions, t0=t0 + int(idx[0]) * dt)
