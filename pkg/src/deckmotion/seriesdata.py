"""Uniformly sampled motion series, sliding windows, splits, normalization.

A MotionSeries holds the tri-channel samples; make_windows turns it into
lookback windows paired with next-sample targets; split_series cuts the
windows at a train/test boundary defined on target indices, so the first
test prediction consumes the last training samples as history.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .wavegen import CHANNELS, WaveModel, evaluate_model_array

CSV_HEADER = "t,heave,pitch,roll"


@dataclass(frozen=True)
class MotionSeries:
    """Tri-channel series sampled every dt seconds starting at t0."""

    dt: float
    samples: np.ndarray  # (n, 3) float64, columns heave, pitch, roll
    t0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive and finite, got {self.dt}")
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 2 or samples.shape[1] != 3:
            raise ValueError(f"samples must have shape (n, 3), got {samples.shape}")
        if samples.shape[0] < 1:
            raise ValueError("series needs at least one sample")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + np.arange(len(self)) * self.dt


def sample_series(model: WaveModel, n: int, dt: float) -> MotionSeries:
    """Sample the model at times 0, dt, ..., (n-1)*dt."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    times = np.arange(n) * dt
    return MotionSeries(dt=dt, samples=evaluate_model_array(model, times))


@dataclass(frozen=True)
class WindowedDataset:
    """Lookback windows and their next-sample targets.

    inputs[k] holds source samples target_indices[k]-lookback .. target_indices[k]-1,
    targets[k] is source sample target_indices[k].
    """

    lookback: int
    inputs: np.ndarray  # (m, lookback, 3)
    targets: np.ndarray  # (m, 3)
    target_indices: np.ndarray  # (m,) int64, indices into the source series

    def __post_init__(self):
        if not (len(self.inputs) == len(self.targets) == len(self.target_indices)):
            raise ValueError("inputs, targets and target_indices must have equal length")

    def __len__(self) -> int:
        return len(self.target_indices)


def make_windows(series: MotionSeries, lookback: int) -> WindowedDataset:
    """One window per target index in [lookback, n-1]; count = n - lookback."""
    if lookback < 1:
        raise ValueError(f"lookback must be >= 1, got {lookback}")
    n = len(series)
    if n <= lookback:
        raise ValueError(f"series length {n} must exceed lookback {lookback}")
    x = series.samples
    target_indices = np.arange(lookback, n, dtype=np.int64)
    # (m, lookback) index table: row k covers samples k .. k+lookback-1
    rows = np.arange(n - lookback)[:, None] + np.arange(lookback)[None, :]
    return WindowedDataset(
        lookback=lookback,
        inputs=x[rows],
        targets=x[target_indices],
        target_indices=target_indices,
    )


@dataclass(frozen=True)
class SplitDataset:
    """Train/test windows split at a source-index boundary."""

    train: WindowedDataset
    test: WindowedDataset
    boundary_index: int


def split_series(
    windows: WindowedDataset, train_fraction: float, source_length: int
) -> SplitDataset:
    """Split on target indices: train targets < boundary <= test targets.

    boundary = round(train_fraction * source_length). Test windows just past
    the boundary read the final training samples as input history.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    boundary = int(round(train_fraction * source_length))
    idx = windows.target_indices
    lo, hi = int(idx[0]), int(idx[-1])
    if not lo < boundary <= hi:
        raise ValueError(
            f"boundary {boundary} leaves an empty side (target indices span {lo}..{hi})"
        )
    in_train = idx < boundary

    def subset(mask: np.ndarray) -> WindowedDataset:
        return WindowedDataset(
            lookback=windows.lookback,
            inputs=windows.inputs[mask],
            targets=windows.targets[mask],
            target_indices=windows.target_indices[mask],
        )

    return SplitDataset(train=subset(in_train), test=subset(~in_train), boundary_index=boundary)


@dataclass(frozen=True)
class Normalizer:
    """Per-channel affine map x -> (x - offset) / scale."""

    offset: np.ndarray = field(default_factory=lambda: np.zeros(3))
    scale: np.ndarray = field(default_factory=lambda: np.ones(3))

    def __post_init__(self):
        offset = np.array(self.offset, dtype=np.float64).reshape(3)
        scale = np.array(self.scale, dtype=np.float64).reshape(3)
        if not np.all(scale > 0):
            raise ValueError(f"scale must be positive per channel, got {scale}")
        offset.setflags(write=False)
        scale.setflags(write=False)
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "scale", scale)

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Normalize an (..., 3) array."""
        return (np.asarray(values, dtype=np.float64) - self.offset) / self.scale

    def invert(self, values: np.ndarray) -> np.ndarray:
        """Map an (..., 3) array back to physical units."""
        return np.asarray(values, dtype=np.float64) * self.scale + self.offset


def fit_normalizer(series: MotionSeries, fit_range_end: int) -> Normalizer:
    """Per-channel z-score statistics over samples 0..fit_range_end-1.

    Uses the population standard deviation; a constant channel gets
    scale 1 so the map stays invertible.
    """
    if fit_range_end < 2:
        raise ValueError(f"fit_range_end must be >= 2, got {fit_range_end}")
    if fit_range_end > len(series):
        raise ValueError(f"fit_range_end {fit_range_end} exceeds series length {len(series)}")
    segment = series.samples[:fit_range_end]
    offset = segment.mean(axis=0)
    scale = segment.std(axis=0)
    scale = np.where(scale > 0.0, scale, 1.0)
    return Normalizer(offset=offset, scale=scale)


def apply_normalizer(norm: Normalizer, series: MotionSeries) -> MotionSeries:
    return MotionSeries(dt=series.dt, samples=norm.apply(series.samples), t0=series.t0)


def invert_normalizer(norm: Normalizer, series: MotionSeries) -> MotionSeries:
    return MotionSeries(dt=series.dt, samples=norm.invert(series.samples), t0=series.t0)


def series_to_csv(series: MotionSeries) -> str:
    """CSV text with header t,heave,pitch,roll at full float64 precision."""
    times = series.times
    lines = [CSV_HEADER]
    for i in range(len(series)):
        h, p, r = (float(v) for v in series.samples[i])
        lines.append(f"{float(times[i])!r},{h!r},{p!r},{r!r}")
    return "\n".join(lines) + "\n"


def save_series_csv(series: MotionSeries, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(series_to_csv(series))


def load_series_csv(path, dt: float | None = None) -> MotionSeries:
    """Read a t,heave,pitch,roll CSV; dt is inferred from the t column
    unless given explicitly (required for single-row files)."""
    with open(path, "r", encoding="utf-8") as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    if not lines or lines[0].replace(" ", "") != CSV_HEADER:
        raise ValueError(f"{path}: expected header '{CSV_HEADER}'")
    try:
        rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    except ValueError as exc:
        raise ValueError(f"{path}: malformed CSV row: {exc}") from exc
    if rows.size == 0:
        raise ValueError(f"{path}: no data rows")
    if rows.shape[1] != 4:
        raise ValueError(f"{path}: expected 4 columns, got {rows.shape[1]}")
    times = rows[:, 0]
    if dt is None:
        if len(times) < 2:
            raise ValueError(f"{path}: cannot infer dt from a single row; pass dt explicitly")
        dt = float(times[1] - times[0])
    expected = times[0] + np.arange(len(times)) * dt
    if not np.allclose(times, expected, rtol=0.0, atol=1e-9 * max(1.0, float(np.abs(times).max()))):
        raise ValueError(f"{path}: t column is not uniformly spaced at dt={dt}")
    return MotionSeries(dt=dt, samples=rows[:, 1:], t0=float(times[0]))
