#!/usr/bin/env python3
"""Benchmark the compiled estimator kernels against the pure-Python fallback.

Times the four estimators over a batch of independently seeded noisy runs of
the default scenario, per backend, and reports the speedup.

    python benchmarks/bench_kernels.py [--seeds 200] [--repeats 3]
"""

import argparse
import importlib
import math
import time

import numpy as np

from imufuse import _kernels_py
from imufuse.filters import kalman_tuning_from_noise
from imufuse.simulate import (
    NoiseConfig,
    TrajectoryConfig,
    add_noise,
    generate_trajectory,
    ideal_imu,
)


def load_backends():
    backends = {"python": _kernels_py}
    try:
        backends["cython"] = importlib.import_module("imufuse._kernels")
    except ImportError:
        print("compiled kernels not available; benchmarking the fallback only")
    return backends


def prepare_runs(n_seeds):
    truth = generate_trajectory(TrajectoryConfig())
    imu = ideal_imu(truth)
    runs = []
    for seed in range(n_seeds):
        noisy = add_noise(imu, NoiseConfig(seed=seed))
        ax = np.ascontiguousarray(noisy.accel[:, 0])
        ay = np.ascontiguousarray(noisy.accel[:, 1])
        az = np.ascontiguousarray(noisy.accel[:, 2])
        gy = np.ascontiguousarray(noisy.gyro[:, 1])
        p0 = math.atan2(ax[0], math.sqrt(ay[0] ** 2 + az[0] ** 2))
        runs.append((ax, ay, az, gy, p0))
    return runs, truth.dt


def run_all(kernels, runs, dt, tuning):
    sink = 0.0
    for ax, ay, az, gy, p0 in runs:
        sink += kernels.run_gyro_only(p0, gy, dt)[-1]
        sink += kernels.run_accel_only(ax, ay, az)[-1]
        sink += kernels.run_complementary(p0, ax, ay, az, gy, dt, 9.81, 2.0)[-1]
        pitch, _ = kernels.run_kalman(
            p0, 0.0, tuning.p0_pitch, 0.0, 0.0, tuning.p0_bias,
            tuning.q_pitch, tuning.q_bias, tuning.r, ax, ay, az, gy, dt,
        )
        sink += pitch[-1]
    return sink


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = load_backends()
    runs, dt = prepare_runs(args.seeds)
    tuning = kalman_tuning_from_noise(NoiseConfig(), dt)
    n_samples = len(runs[0][0])
    print(
        f"{args.seeds} seeded runs x {n_samples} samples x 4 estimators, "
        f"best of {args.repeats}"
    )

    timings = {}
    results = {}
    for name, kernels in backends.items():
        best = math.inf
        for _ in range(args.repeats):
            start = time.perf_counter()
            sink = run_all(kernels, runs, dt, tuning)
            best = min(best, time.perf_counter() - start)
        timings[name] = best
        results[name] = sink
        per_run = best / args.seeds * 1e3
        print(f"  {name:<8} {best:8.3f} s total   {per_run:7.3f} ms/run")

    if len(results) == 2 and results["python"] != results["cython"]:
        print("  WARNING: backends disagree on the checksum")
    if "cython" in timings:
        print(f"  speedup: {timings['python'] / timings['cython']:.1f}x")


if __name__ == "__main__":
    main()
