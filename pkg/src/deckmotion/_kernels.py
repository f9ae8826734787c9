"""LSTM compute kernels: numba-compiled hot path with a pure-numpy twin.

The forward/backward recurrences below dominate runtime, so they are
JIT-compiled with numba by default. Setting DECKMOTION_DISABLE_NUMBA=1 in
the environment selects the uncompiled numpy path instead; both paths run
the same source, so they agree to the last bit on the same BLAS.

The compiled path wins by ~5-10x wherever call dispatch dominates (single
windows, small hidden sizes, gradient checking); for wide batches numpy's
SIMD exp/tanh make the fallback competitive or slightly faster when numba
has no SVML. benchmarks/bench_lstm.py measures both regimes.

Array conventions shared by all kernels (everything float64):
  x      (L, B, D)  time-major window batch
  wx     (4H, D)    stacked input weights, gate blocks ordered i, f, g, o
  wh     (4H, H)    stacked recurrent weights, same order
  b      (4H,)      stacked gate biases
  w_out  (K, H)     linear output head
  b_out  (K,)
Gate math per step: i = sigmoid, f = sigmoid, g = tanh (cell candidate),
o = sigmoid; c' = f*c + i*g; h' = o*tanh(c').
"""

from __future__ import annotations

import os

import numpy as np

DISABLE_ENV = "DECKMOTION_DISABLE_NUMBA"


def lstm_forward_numpy(wx, wh, b, w_out, b_out, x):
    """Forward pass over a window batch, keeping per-step activations.

    Returns (y, gi, gf, gg, go, c, tc, h): y is the (B, K) head output;
    the activation stacks are (L, B, H) and feed lstm_backward.
    """
    L, B, _ = x.shape
    H = wh.shape[1]
    gi = np.empty((L, B, H))
    gf = np.empty((L, B, H))
    gg = np.empty((L, B, H))
    go = np.empty((L, B, H))
    c = np.empty((L, B, H))
    tc = np.empty((L, B, H))
    h = np.empty((L, B, H))
    h_prev = np.zeros((B, H))
    c_prev = np.zeros((B, H))
    for t in range(L):
        z = np.dot(x[t], wx.T) + np.dot(h_prev, wh.T) + b
        gi[t] = 1.0 / (1.0 + np.exp(-z[:, :H]))
        gf[t] = 1.0 / (1.0 + np.exp(-z[:, H : 2 * H]))
        gg[t] = np.tanh(z[:, 2 * H : 3 * H])
        go[t] = 1.0 / (1.0 + np.exp(-z[:, 3 * H :]))
        c[t] = gf[t] * c_prev + gi[t] * gg[t]
        tc[t] = np.tanh(c[t])
        h[t] = go[t] * tc[t]
        h_prev = h[t]
        c_prev = c[t]
    y = np.dot(h_prev, w_out.T) + b_out
    return y, gi, gf, gg, go, c, tc, h


def lstm_backward_numpy(wx, wh, w_out, x, gi, gf, gg, go, c, tc, h, dy):
    """Backpropagation through time for one batch.

    dy is d(loss)/d(head output), shape (B, K). Returns stacked gradients
    (d_wx, d_wh, d_b, d_wout, d_bout) matching the parameter layout.
    """
    L, B, _ = x.shape
    H = wh.shape[1]
    d_wx = np.zeros_like(wx)
    d_wh = np.zeros_like(wh)
    d_b = np.zeros(4 * H)
    d_wout = np.dot(dy.T, h[L - 1])
    d_bout = dy.sum(axis=0)
    dh = np.dot(dy, w_out)
    dc = np.zeros((B, H))
    dz = np.empty((B, 4 * H))
    for t in range(L - 1, -1, -1):
        i = gi[t]
        f = gf[t]
        g = gg[t]
        o = go[t]
        tct = tc[t]
        do = dh * tct
        dc = dc + dh * o * (1.0 - tct * tct)
        di = dc * g
        dg = dc * i
        if t > 0:
            df = dc * c[t - 1]
        else:
            df = dc * 0.0  # initial cell state is zero
        dz[:, :H] = di * i * (1.0 - i)
        dz[:, H : 2 * H] = df * f * (1.0 - f)
        dz[:, 2 * H : 3 * H] = dg * (1.0 - g * g)
        dz[:, 3 * H :] = do * o * (1.0 - o)
        d_wx += np.dot(dz.T, x[t])
        if t > 0:
            d_wh += np.dot(dz.T, h[t - 1])
        d_b += dz.sum(axis=0)
        dh = np.dot(dz, wh)
        dc = dc * f
    return d_wx, d_wh, d_b, d_wout, d_bout


def lstm_predict_numpy(wx, wh, b, w_out, b_out, x):
    """Forward pass without activation caching; returns the (B, K) output."""
    L, B, _ = x.shape
    H = wh.shape[1]
    h_prev = np.zeros((B, H))
    c_prev = np.zeros((B, H))
    for t in range(L):
        z = np.dot(x[t], wx.T) + np.dot(h_prev, wh.T) + b
        i = 1.0 / (1.0 + np.exp(-z[:, :H]))
        f = 1.0 / (1.0 + np.exp(-z[:, H : 2 * H]))
        g = np.tanh(z[:, 2 * H : 3 * H])
        o = 1.0 / (1.0 + np.exp(-z[:, 3 * H :]))
        c_prev = f * c_prev + i * g
        h_prev = o * np.tanh(c_prev)
    return np.dot(h_prev, w_out.T) + b_out


def _numba_wanted() -> bool:
    return os.environ.get(DISABLE_ENV, "").strip().lower() not in ("1", "true", "yes", "on")


NUMBA_ENABLED = False
lstm_forward_numba = None
lstm_backward_numba = None
lstm_predict_numba = None

if _numba_wanted():
    try:
        from numba import njit
    except ImportError:
        pass
    else:
        lstm_forward_numba = njit(cache=True)(lstm_forward_numpy)
        lstm_backward_numba = njit(cache=True)(lstm_backward_numpy)
        lstm_predict_numba = njit(cache=True)(lstm_predict_numpy)
        NUMBA_ENABLED = True

if NUMBA_ENABLED:
    lstm_forward = lstm_forward_numba
    lstm_backward = lstm_backward_numba
    lstm_predict = lstm_predict_numba
else:
    lstm_forward = lstm_forward_numpy
    lstm_backward = lstm_backward_numpy
    lstm_predict = lstm_predict_numpy


def as_time_major(windows: np.ndarray) -> np.ndarray:
    """(B, L, D) window batch -> contiguous (L, B, D) kernel input."""
    windows = np.asarray(windows, dtype=np.float64)
    if windows.ndim != 3:
        raise ValueError(f"expected a (B, L, D) batch, got shape {windows.shape}")
    return np.ascontiguousarray(windows.transpose(1, 0, 2))
