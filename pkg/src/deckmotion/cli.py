"""Command-line pipelines for deck-motion work.

Subcommands: simulate (sample a wave model to CSV), train (fit the joint
LSTM), predict (one-step-ahead forecast as a series CSV), evaluate (error
curves, summary, optional SVG plots), rest (landing-window intervals from
forecasts), plot (series CSV to SVG).

All randomness flows from explicit --seed flags, outputs carry no
timestamps, and every command writes its files only after all computation
succeeded, so identical invocations produce byte-identical outputs.

Exit codes: 0 success, 1 input/output failure, 2 usage error, 3 training
divergence.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import evaluate as ev
from . import restperiod as rp
from . import seriesdata as sd
from . import svgplot
from . import training as tr
from . import wavegen as wg

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3


class CliError(Exception):
    """User-facing failure; message printed to stderr, exit code 1."""


def _write_outputs(outputs: list[tuple[str, str]]) -> None:
    """Write (path, text) pairs atomically; on failure remove everything
    this invocation already finalized so no partial results survive."""
    done = []
    try:
        for path, text in outputs:
            parent = os.path.dirname(path)
            if parent:
                os.makedirs(parent, exist_ok=True)
            tmp = path + ".tmp"
            with open(tmp, "w", encoding="utf-8") as f:
                f.write(text)
            os.replace(tmp, path)
            done.append(path)
    except OSError:
        for path in done:
            try:
                os.remove(path)
            except OSError:
                pass
        raise


def _info(args, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def _load_series(args) -> sd.MotionSeries:
    try:
        return sd.load_series_csv(args.data, dt=args.dt)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read series {args.data}: {exc}") from exc


def _load_artifact(path) -> tr.ModelArtifact:
    try:
        return tr.load_model(path)
    except (OSError, tr.ModelFileError) as exc:
        raise CliError(f"cannot load model {path}: {exc}") from exc


def _forecast(args, artifact: tr.ModelArtifact, series: sd.MotionSeries) -> ev.ForecastResult:
    normalizer = None
    if args.renormalize:
        normalizer = sd.fit_normalizer(series, len(series))
    try:
        return ev.predict_series(
            artifact, series, start_index=args.start_index, normalizer=normalizer
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _cmd_simulate(args) -> int:
    dt = args.dt if args.dt is not None else 0.1
    if args.model_file:
        try:
            model = wg.load_wave_model(args.model_file)
        except (OSError, ValueError) as exc:
            raise CliError(f"cannot read wave model {args.model_file}: {exc}") from exc
    elif args.model == "knox":
        model = wg.knox_training_model()
    elif args.model == "seastate5":
        model = wg.sea_state5_reference_model()
    else:
        if args.spec_file:
            try:
                spec = wg.load_sea_state_spec(args.spec_file)
            except (OSError, ValueError) as exc:
                raise CliError(f"cannot read spec {args.spec_file}: {exc}") from exc
        else:
            spec = wg.sea_state5_spec()
        model = wg.random_sea_state_model(spec, args.seed, random_phases=args.random_phases)
    try:
        series = sd.sample_series(model, args.n, dt)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    outputs = [(args.out, sd.series_to_csv(series))]
    if args.save_model:
        outputs.append((args.save_model, json.dumps(wg.wave_model_to_dict(model), indent=2) + "\n"))
    _write_outputs(outputs)
    _info(args, f"wrote {args.out} ({args.n} samples of model {model.label!r}, dt={dt})")
    return EXIT_OK


def _cmd_train(args) -> int:
    series = _load_series(args)
    n = len(series)
    shuffle_seed = args.shuffle_seed if args.shuffle_seed is not None else args.seed
    config = tr.TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        optimizer=args.optimizer,
        shuffle_seed=shuffle_seed,
        hidden_dim=args.hidden,
        lookback=args.lookback,
    )
    try:
        boundary = int(round(args.split * n))
        normalizer = sd.fit_normalizer(series, boundary)
        windows = sd.make_windows(sd.apply_normalizer(normalizer, series), args.lookback)
        split = sd.split_series(windows, args.split, n)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    provenance = (
        f"data={args.data};n={n};dt={series.dt!r};split={args.split};seed={args.seed};"
        f"shuffle_seed={shuffle_seed};hidden={args.hidden};lookback={args.lookback};"
        f"epochs={args.epochs};batch={args.batch};lr={args.lr};optimizer={args.optimizer}"
    )
    artifact, report = tr.train(
        split, config, args.seed, normalizer=normalizer, provenance=provenance
    )
    outputs = [(args.out, json.dumps(tr.model_to_dict(artifact), indent=2) + "\n")]
    if args.report:
        # timing is excluded so identical runs write identical reports
        outputs.append((args.report, json.dumps(report.to_dict(include_timing=False), indent=2) + "\n"))
    _write_outputs(outputs)
    _info(
        args,
        f"wrote {args.out}: train windows {len(split.train)}, test windows {len(split.test)}, "
        f"final train loss {report.epoch_losses[-1]:.6g}, test loss {report.final_test_loss:.6g}, "
        f"{report.wall_time_seconds:.1f}s",
    )
    return EXIT_OK


def _cmd_predict(args) -> int:
    artifact = _load_artifact(args.model)
    series = _load_series(args)
    result = _forecast(args, artifact, series)
    predicted = ev.forecast_to_series(result, series.dt, series.t0)
    _write_outputs([(args.out, sd.series_to_csv(predicted))])
    _info(args, f"wrote {args.out} ({len(result)} predictions)")
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    artifact = _load_artifact(args.model)
    series = _load_series(args)
    result = _forecast(args, artifact, series)
    report = ev.error_report(result)
    outputs = [
        (args.out_csv, ev.errors_to_csv(result, report, series.dt, series.t0)),
        (args.out_json, json.dumps(ev.summary_dict(report, len(result)), indent=2) + "\n"),
    ]
    if args.svg:
        t = series.t0 + result.target_indices * series.dt
        pred_panels = []
        err_panels = []
        for k, name in enumerate(wg.CHANNELS):
            pred_panels.append(
                {
                    "title": f"{name}: truth vs prediction",
                    "x": t,
                    "curves": [
                        ("truth", result.truths[:, k]),
                        ("prediction", result.predictions[:, k]),
                    ],
                }
            )
            err_panels.append(
                {
                    "title": f"{name}: absolute error (mae {report.mae[k]:.4g})",
                    "x": t,
                    "curves": [("abs error", report.abs_errors[:, k])],
                }
            )
        outputs.append((os.path.join(args.svg, "predictions.svg"), svgplot.render_panels(pred_panels)))
        outputs.append((os.path.join(args.svg, "errors.svg"), svgplot.render_panels(err_panels)))
    _write_outputs(outputs)
    mae = ", ".join(f"{name} {report.mae[k]:.6g}" for k, name in enumerate(wg.CHANNELS))
    _info(args, f"wrote {args.out_csv}, {args.out_json} ({len(result)} points; mae: {mae})")
    return EXIT_OK


def _cmd_rest(args) -> int:
    artifact = _load_artifact(args.model)
    series = _load_series(args)
    result = _forecast(args, artifact, series)
    try:
        criteria = rp.RestCriteria(
            pitch_max=args.pitch_max,
            roll_max=args.roll_max,
            heave_rate_max=args.heave_rate_max,
            min_duration=args.min_duration,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    intervals = rp.rest_periods_from_forecast(result, series.dt, criteria, t0=series.t0)
    outputs = [(args.out, rp.intervals_to_csv(intervals))]
    if args.out_json:
        outputs.append((args.out_json, json.dumps(rp.intervals_to_dicts(intervals), indent=2) + "\n"))
    _write_outputs(outputs)
    _info(args, f"wrote {args.out} ({len(intervals)} rest intervals)")
    return EXIT_OK


def _cmd_plot(args) -> int:
    series = _load_series(args)
    t = series.times
    panels = [
        {"title": name, "x": t, "curves": [(name, series.samples[:, k])]}
        for k, name in enumerate(wg.CHANNELS)
    ]
    _write_outputs([(args.out, svgplot.render_panels(panels))])
    _info(args, f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument(
        "--dt",
        type=float,
        default=None,
        help="sampling interval in seconds (simulate default 0.1; elsewhere overrides the value inferred from the CSV)",
    )
    common.add_argument("--quiet", action="store_true", help="suppress informational messages")

    parser = argparse.ArgumentParser(
        prog="deckmotion",
        description="Simulate ship deck motion, train a joint LSTM predictor, "
        "evaluate one-step-ahead forecasts, and detect landing rest periods.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="sample a wave model to a series CSV")
    p.add_argument(
        "--model",
        choices=("knox", "seastate5", "random"),
        default="knox",
        help="built-in model or a random sea-state draw (default knox)",
    )
    p.add_argument("--model-file", default=None, help="sample a wave model JSON instead of --model")
    p.add_argument("--spec-file", default=None, help="JSON range spec for --model random (default: sea-state-5 ranges)")
    p.add_argument("--n", type=int, default=2000, help="number of samples (default 2000)")
    p.add_argument("--out", required=True, help="output series CSV path")
    p.add_argument("--save-model", default=None, help="also write the wave model as JSON")
    p.add_argument(
        "--random-phases",
        action="store_true",
        help="draw uniform random phases for --model random (default: all phases 0)",
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("train", parents=[common], help="train the joint LSTM on a series CSV")
    p.add_argument("--data", required=True, help="input series CSV")
    p.add_argument("--lookback", type=int, default=40, help="window length (default 40)")
    p.add_argument("--split", type=float, default=0.7, help="training fraction (default 0.7)")
    p.add_argument("--hidden", type=int, default=64, help="hidden units (default 64)")
    p.add_argument("--epochs", type=int, default=200, help="training epochs (default 200)")
    p.add_argument("--batch", type=int, default=32, help="mini-batch size (default 32)")
    p.add_argument("--lr", type=float, default=1e-3, help="learning rate (default 1e-3)")
    p.add_argument("--optimizer", choices=tr.OPTIMIZERS, default="adam", help="update rule (default adam)")
    p.add_argument(
        "--shuffle-seed", type=int, default=None, help="epoch shuffle seed (default: --seed)"
    )
    p.add_argument("--out", required=True, help="output model JSON path")
    p.add_argument("--report", default=None, help="also write a training report JSON")
    p.set_defaults(func=_cmd_train)

    def forecast_flags(p):
        p.add_argument("--model", required=True, help="trained model JSON")
        p.add_argument("--data", required=True, help="input series CSV")
        p.add_argument(
            "--start-index",
            type=int,
            default=None,
            help="first predicted sample index (default: lookback)",
        )
        p.add_argument(
            "--renormalize",
            action="store_true",
            help="normalize with this series' own statistics instead of the stored training statistics",
        )

    p = sub.add_parser("predict", parents=[common], help="one-step-ahead forecast to a series CSV")
    forecast_flags(p)
    p.add_argument("--out", required=True, help="output predicted-series CSV path")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", parents=[common], help="absolute-error curves and MAE summary")
    forecast_flags(p)
    p.add_argument("--out-csv", required=True, help="long-format error CSV path")
    p.add_argument("--out-json", required=True, help="per-channel summary JSON path")
    p.add_argument("--svg", default=None, help="directory for predictions.svg and errors.svg")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("rest", parents=[common], help="landing rest periods from forecasts")
    forecast_flags(p)
    p.add_argument("--pitch-max", type=float, required=True, help="max |pitch| (inclination units)")
    p.add_argument("--roll-max", type=float, required=True, help="max |roll| (inclination units)")
    p.add_argument("--heave-rate-max", type=float, default=None, help="optional max |heave rate| (units/s)")
    p.add_argument("--min-duration", type=float, default=0.0, help="minimum interval duration, seconds (default 0)")
    p.add_argument("--out", required=True, help="output intervals CSV path")
    p.add_argument("--out-json", default=None, help="also write intervals as JSON")
    p.set_defaults(func=_cmd_rest)

    p = sub.add_parser("plot", parents=[common], help="render a series CSV as an SVG chart")
    p.add_argument("--data", required=True, help="input series CSV")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"deckmotion: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except tr.TrainingDivergedError as exc:
        print(f"deckmotion: training diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except OSError as exc:
        print(f"deckmotion: i/o error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
