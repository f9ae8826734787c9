"""Composite LSTM: one network jointly predicting heave, pitch and roll.

A single-layer LSTM consumes a lookback window of tri-channel samples and
a linear head maps the final hidden state to the joint next-sample
prediction. Gradients are exact backpropagation through time over the
whole window, in float64 throughout so finite-difference checks are tight.

Parameters are stored stacked (gate blocks ordered i, f, g, o within the
leading 4H dimension, matching _kernels); named per-gate views are exposed
for serialization and inspection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import as_time_major, lstm_backward, lstm_forward, lstm_predict

GATE_NAMES = ("i", "f", "g", "o")


@dataclass(frozen=True)
class LstmConfig:
    hidden_dim: int = 64
    input_dim: int = 3
    output_dim: int = 3
    lookback: int = 40

    def __post_init__(self):
        if self.hidden_dim < 1:
            raise ValueError(f"hidden_dim must be >= 1, got {self.hidden_dim}")
        if self.lookback < 1:
            raise ValueError(f"lookback must be >= 1, got {self.lookback}")
        if self.input_dim != 3 or self.output_dim != 3:
            raise ValueError("joint tri-channel prediction requires input_dim = output_dim = 3")


def _named_views(wx, wh, b, w_out, b_out) -> dict[str, np.ndarray]:
    H = wh.shape[1]
    named = {}
    for k, gate in enumerate(GATE_NAMES):
        sl = slice(k * H, (k + 1) * H)
        named[f"w_{gate}"] = wx[sl]
        named[f"u_{gate}"] = wh[sl]
        named[f"b_{gate}"] = b[sl]
    named["w_out"] = w_out
    named["b_out"] = b_out
    return named


@dataclass
class LstmParams:
    """All network weights, stacked per the kernel layout."""

    wx: np.ndarray  # (4H, input_dim)
    wh: np.ndarray  # (4H, H)
    b: np.ndarray  # (4H,)
    w_out: np.ndarray  # (output_dim, H)
    b_out: np.ndarray  # (output_dim,)

    def __post_init__(self):
        for name in ("wx", "wh", "b", "w_out", "b_out"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=np.float64))
        H = self.wh.shape[1]
        if self.wh.shape != (4 * H, H) or self.wx.shape[0] != 4 * H or self.b.shape != (4 * H,):
            raise ValueError("inconsistent gate-stack shapes")
        if self.w_out.shape[1] != H or self.b_out.shape != (self.w_out.shape[0],):
            raise ValueError("output head shape does not match hidden_dim")
        for name in ("wx", "wh", "b", "w_out", "b_out"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite entries in {name}")

    @property
    def hidden_dim(self) -> int:
        return self.wh.shape[1]

    @property
    def input_dim(self) -> int:
        return self.wx.shape[1]

    @property
    def output_dim(self) -> int:
        return self.w_out.shape[0]

    def named(self) -> dict[str, np.ndarray]:
        """Per-gate named views (w_i, u_i, b_i, ... w_out, b_out).

        Views share memory with the stacked arrays, so writing through
        them mutates the parameters.
        """
        return _named_views(self.wx, self.wh, self.b, self.w_out, self.b_out)

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (self.wx, self.wh, self.b, self.w_out, self.b_out)

    def copy(self) -> "LstmParams":
        return LstmParams(*(a.copy() for a in self.arrays()))


@dataclass
class Gradients:
    """Loss gradients, one array per parameter block (same layout)."""

    wx: np.ndarray
    wh: np.ndarray
    b: np.ndarray
    w_out: np.ndarray
    b_out: np.ndarray

    def named(self) -> dict[str, np.ndarray]:
        return _named_views(self.wx, self.wh, self.b, self.w_out, self.b_out)

    def arrays(self) -> tuple[np.ndarray, ...]:
        return (self.wx, self.wh, self.b, self.w_out, self.b_out)


def init_params(config: LstmConfig, seed: int) -> LstmParams:
    """Uniform(-s, s) weights with s = 1/sqrt(hidden_dim); zero biases
    except the forget gate, whose bias starts at 1 to keep early gradients
    flowing. Deterministic in (config, seed)."""
    rng = np.random.default_rng(seed)
    H, D, K = config.hidden_dim, config.input_dim, config.output_dim
    s = 1.0 / math.sqrt(H)
    wx = rng.uniform(-s, s, (4 * H, D))
    wh = rng.uniform(-s, s, (4 * H, H))
    w_out = rng.uniform(-s, s, (K, H))
    b = np.zeros(4 * H)
    b[H : 2 * H] = 1.0
    return LstmParams(wx=wx, wh=wh, b=b, w_out=w_out, b_out=np.zeros(K))


@dataclass
class LstmState:
    """Hidden activation h and cell state c after a step."""

    h: np.ndarray
    c: np.ndarray


def zero_state(hidden_dim: int) -> LstmState:
    return LstmState(h=np.zeros(hidden_dim), c=np.zeros(hidden_dim))


def _sigmoid(z: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):  # exp overflow saturates cleanly to 0
        return 1.0 / (1.0 + np.exp(-z))


def cell_forward(params: LstmParams, x: np.ndarray, state: LstmState) -> LstmState:
    """One LSTM step on a single input vector."""
    x = np.asarray(x, dtype=np.float64)
    H = params.hidden_dim
    z = params.wx @ x + params.wh @ state.h + params.b
    i = _sigmoid(z[:H])
    f = _sigmoid(z[H : 2 * H])
    g = np.tanh(z[2 * H : 3 * H])
    o = _sigmoid(z[3 * H :])
    c = f * state.c + i * g
    return LstmState(h=o * np.tanh(c), c=c)


def forward_window(params: LstmParams, window: np.ndarray) -> np.ndarray:
    """Run the cell over the window rows from a zero state and apply the
    output head to the final hidden state; returns the joint prediction."""
    window = np.asarray(window, dtype=np.float64)
    if window.ndim != 2 or window.shape[1] != params.input_dim:
        raise ValueError(
            f"window must have shape (lookback, {params.input_dim}), got {window.shape}"
        )
    x = as_time_major(window[None, :, :])
    with np.errstate(over="ignore"):  # gate saturation is well-defined
        y = lstm_predict(params.wx, params.wh, params.b, params.w_out, params.b_out, x)
    return y[0]


def predict_windows(params: LstmParams, windows: np.ndarray) -> np.ndarray:
    """Predict a whole (B, L, 3) batch at once; returns (B, 3)."""
    x = as_time_major(windows)
    if x.shape[2] != params.input_dim:
        raise ValueError(f"windows have {x.shape[2]} channels, expected {params.input_dim}")
    with np.errstate(over="ignore"):
        return lstm_predict(params.wx, params.wh, params.b, params.w_out, params.b_out, x)


def loss_and_gradients(
    params: LstmParams, windows: np.ndarray, targets: np.ndarray
) -> tuple[float, Gradients]:
    """Mean squared error over the batch and output channels, with exact
    BPTT gradients for every parameter."""
    windows = np.asarray(windows, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if windows.ndim != 3 or len(windows) == 0:
        raise ValueError("batch must be a non-empty (B, L, 3) array")
    if targets.shape != (len(windows), params.output_dim):
        raise ValueError(f"targets shape {targets.shape} does not match batch")
    x = as_time_major(windows)
    # overflow/invalid are legitimate here: saturated gates are well-defined,
    # and a diverging loss goes non-finite, which the training loop aborts on
    with np.errstate(over="ignore", invalid="ignore"):
        y, gi, gf, gg, go, c, tc, h = lstm_forward(
            params.wx, params.wh, params.b, params.w_out, params.b_out, x
        )
        diff = y - targets
        loss = float(np.mean(diff * diff))
        dy = (2.0 / diff.size) * diff
        d_wx, d_wh, d_b, d_wout, d_bout = lstm_backward(
            params.wx, params.wh, params.w_out, x, gi, gf, gg, go, c, tc, h, dy
        )
    return loss, Gradients(wx=d_wx, wh=d_wh, b=d_b, w_out=d_wout, b_out=d_bout)
