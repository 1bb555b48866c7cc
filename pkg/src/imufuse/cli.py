"""Command-line harness: simulate, fuse, eval, experiment.

Exit codes: 0 success, 1 usage/config error, 2 data error.  Reports go to
stdout as ``key = value`` lines in fixed order; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import filters, io
from .io import ConfigError, DataError, RunConfig
from .simulate import add_noise, generate_trajectory, ideal_imu


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1 (argparse defaults to 2, which we reserve for data errors)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _report_text(pairs) -> str:
    return "".join(f"{key} = {_fmt(value)}\n" for key, value in pairs)


@dataclass(frozen=True)
class EstimatorMetrics:
    name: str
    rmse: float
    final_drift: float
    max_abs_error: float


@dataclass(frozen=True)
class MetricsReport:
    """Per-estimator error metrics plus the run metadata that produced them."""

    entries: tuple
    seed: int
    dt: float
    duration: float

    def __post_init__(self):
        if not self.entries:
            raise ValueError("metrics report needs at least one estimator entry")
        for entry in self.entries:
            for value in (entry.rmse, entry.final_drift, entry.max_abs_error):
                if not (math.isfinite(value) and value >= 0.0):
                    raise ValueError(
                        f"non-finite or negative metric for {entry.name!r}: {value}"
                    )

    def ranking(self) -> str:
        return ",".join(e.name for e in sorted(self.entries, key=lambda e: e.rmse))

    def pairs(self):
        out = [
            ("seed", self.seed),
            ("dt", self.dt),
            ("duration", self.duration),
            ("ranking", self.ranking()),
        ]
        for entry in self.entries:
            out.append((f"{entry.name}.rmse", entry.rmse))
            out.append((f"{entry.name}.final_drift", entry.final_drift))
            out.append((f"{entry.name}.max_abs_error", entry.max_abs_error))
        return out


def _resolve_config(args) -> RunConfig:
    config = io.load_config(args.config)
    try:
        if getattr(args, "seed", None) is not None:
            config = dataclasses.replace(
                config, noise=dataclasses.replace(config.noise, seed=args.seed)
            )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if getattr(args, "out", None) is not None:
        config = dataclasses.replace(config, out_dir=Path(args.out))
    return config


def _out_dir(config: RunConfig) -> Path:
    out = Path(config.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create output directory {out}: {exc}") from None
    return out


def _estimator_kwargs(config: RunConfig, dt: float) -> dict:
    if dt <= 0.0:
        dt = 0.01  # single-sample series: tuning is never applied
    return {
        "gamma_cfg": config.gamma,
        "tuning": filters.kalman_tuning_from_noise(
            config.noise, dt, gravity=config.gamma.g
        ),
    }


def cmd_simulate(args) -> int:
    config = _resolve_config(args)
    out = _out_dir(config)
    truth = generate_trajectory(config.trajectory)
    noisy = add_noise(ideal_imu(truth, gravity=config.gamma.g), config.noise)
    io.write_truth_csv(out / "truth.csv", truth)
    io.write_imu_csv(out / "imu.csv", noisy)
    return 0


def cmd_fuse(args) -> int:
    config = _resolve_config(args)
    out = _out_dir(config)
    series = io.read_imu_csv(args.imu_csv)
    try:
        estimates = filters.run_estimator(
            series, args.estimator, **_estimator_kwargs(config, series.dt)
        )
    except ValueError as exc:
        raise DataError(f"{args.imu_csv}: {exc}") from None
    io.write_estimates_csv(out / f"estimates_{args.estimator}.csv", estimates)
    return 0


def _eval_pairs(estimates, truth):
    try:
        metrics = (
            filters.rmse(estimates, truth),
            filters.final_drift(estimates, truth),
            filters.max_abs_error(estimates, truth),
        )
    except ValueError as exc:
        raise DataError(str(exc)) from None
    duration = float(truth.t[-1] - truth.t[0])
    return [
        ("n_samples", len(truth)),
        ("dt", truth.dt),
        ("duration", duration),
        ("rmse", metrics[0]),
        ("final_drift", metrics[1]),
        ("max_abs_error", metrics[2]),
    ]


def cmd_eval(args) -> int:
    estimates = io.read_estimates_csv(args.estimates_csv)
    truth = io.read_truth_csv(args.truth_csv)
    sys.stdout.write(_report_text(_eval_pairs(estimates, truth)))
    return 0


def cmd_experiment(args) -> int:
    config = _resolve_config(args)
    out = _out_dir(config)

    def stage(name, func, *func_args, **func_kwargs):
        try:
            return func(*func_args, **func_kwargs)
        except (ConfigError, DataError):
            raise
        except ValueError as exc:
            raise DataError(f"{name}: {exc}") from None

    truth = stage("simulate", generate_trajectory, config.trajectory)
    noisy = stage(
        "simulate", add_noise, ideal_imu(truth, gravity=config.gamma.g), config.noise
    )
    io.write_truth_csv(out / "truth.csv", truth)
    io.write_imu_csv(out / "imu.csv", noisy)

    entries = []
    for kind in config.estimators:
        estimates = stage(
            f"fuse({kind})",
            filters.run_estimator,
            noisy,
            kind,
            **_estimator_kwargs(config, noisy.dt),
        )
        io.write_estimates_csv(out / f"estimates_{kind}.csv", estimates)
        entries.append(
            stage(
                f"eval({kind})",
                lambda est, tr: EstimatorMetrics(
                    name=est.name,
                    rmse=filters.rmse(est, tr),
                    final_drift=filters.final_drift(est, tr),
                    max_abs_error=filters.max_abs_error(est, tr),
                ),
                estimates,
                truth,
            )
        )

    report = MetricsReport(
        entries=tuple(entries),
        seed=config.noise.seed,
        dt=truth.dt,
        duration=float(truth.t[-1] - truth.t[0]),
    )
    text = _report_text(report.pairs())
    (out / "report.txt").write_text(text)
    sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="imufuse",
        description="Simulate noisy IMU data and estimate pitch with "
        "complementary, gyro-only, accel-only, and Kalman filters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run configuration file")
    common.add_argument(
        "--seed", type=int, metavar="U64", help="override the config RNG seed"
    )
    common.add_argument(
        "--out", metavar="DIR", help="output directory (default: current directory)"
    )

    p = sub.add_parser(
        "simulate", parents=[common], help="write truth.csv and noisy imu.csv"
    )
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "fuse", parents=[common], help="run one estimator over an IMU CSV"
    )
    p.add_argument("imu_csv", metavar="IMU_CSV")
    p.add_argument(
        "--estimator",
        required=True,
        choices=filters.ESTIMATOR_KINDS,
        help="estimator to run",
    )
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser(
        "eval", help="report error metrics of an estimates CSV against a truth CSV"
    )
    p.add_argument("estimates_csv", metavar="ESTIMATES_CSV")
    p.add_argument("truth_csv", metavar="TRUTH_CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser(
        "experiment",
        parents=[common],
        help="simulate, run all configured estimators, and write a summary report",
    )
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"imufuse: config error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"imufuse: data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"imufuse: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
