#!/usr/bin/env python3
"""Benchmark the LSTM kernels: numba-compiled path vs pure-numpy fallback.

The numpy twin is already vectorized over the batch and hidden dimensions,
so the compiled path wins mostly on dispatch overhead: expect ~5-10x for
single-window shapes and roughly parity (or a small numpy lead, courtesy of
SIMD exp/tanh) at the wide training shape. Run with defaults for the
training workload shape, or sweep sizes:

    python3 benchmarks/bench_lstm.py
    python3 benchmarks/bench_lstm.py --batch 1 --hidden 32 --iters 200

Tip: on machines with few cores, OPENBLAS_NUM_THREADS=1 roughly halves the
cost of the small per-step matrix products on both paths.
"""

import argparse
import time

import numpy as np

from deckmotion import _kernels as K
from deckmotion.lstm import LstmConfig, init_params, loss_and_gradients


def bench(fn, args, iters, warmup=3):
    for _ in range(warmup):
        fn(*args)
    t0 = time.perf_counter()
    for _ in range(iters):
        fn(*args)
    return (time.perf_counter() - t0) / iters * 1000.0


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--batch", type=int, default=32)
    parser.add_argument("--lookback", type=int, default=40)
    parser.add_argument("--hidden", type=int, default=64)
    parser.add_argument("--iters", type=int, default=50)
    args = parser.parse_args()

    print(
        f"batch={args.batch} lookback={args.lookback} hidden={args.hidden} "
        f"iters={args.iters} numba_available={K.lstm_forward_numba is not None}"
    )

    params = init_params(LstmConfig(hidden_dim=args.hidden, lookback=args.lookback), 0)
    rng = np.random.default_rng(0)
    x = K.as_time_major(rng.normal(size=(args.batch, args.lookback, 3)))
    dy = rng.normal(size=(args.batch, 3))
    fwd_args = (params.wx, params.wh, params.b, params.w_out, params.b_out, x)

    rows = []

    def compare(name, fn_numpy, fn_numba, call_args):
        t_np = bench(fn_numpy, call_args, args.iters)
        if fn_numba is None:
            rows.append((name, t_np, None))
            return
        out_np = fn_numpy(*call_args)
        out_nb = fn_numba(*call_args)
        pairs = zip(out_np, out_nb) if isinstance(out_np, tuple) else [(out_np, out_nb)]
        for a, b in pairs:
            assert np.allclose(a, b, rtol=1e-12, atol=1e-12), f"{name}: paths disagree"
        rows.append((name, t_np, bench(fn_numba, call_args, args.iters)))

    compare("predict (forward only)", K.lstm_predict_numpy, K.lstm_predict_numba, fwd_args)
    compare("forward (with cache)", K.lstm_forward_numpy, K.lstm_forward_numba, fwd_args)

    cache = K.lstm_forward_numpy(*fwd_args)[1:]
    bwd_args = (params.wx, params.wh, params.w_out, x) + cache + (dy,)
    compare("backward (BPTT)", K.lstm_backward_numpy, K.lstm_backward_numba, bwd_args)

    print(f"\n{'kernel':<24}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, t_np, t_nb in rows:
        if t_nb is None:
            print(f"{name:<24}{t_np:>10.3f}{'n/a':>10}{'':>9}")
        else:
            print(f"{name:<24}{t_np:>10.3f}{t_nb:>10.3f}{t_np / t_nb:>8.2f}x")

    # end to end: one optimizer-step-sized gradient computation
    windows = rng.normal(size=(args.batch, args.lookback, 3))
    targets = rng.normal(size=(args.batch, 3))
    t = bench(lambda: loss_and_gradients(params, windows, targets), (), args.iters)
    path = "numba" if K.NUMBA_ENABLED else "numpy"
    print(f"\nloss_and_gradients on selected path ({path}): {t:.3f} ms per batch")


if __name__ == "__main__":
    main()
