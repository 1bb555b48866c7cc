"""File formats: CSV traces and the flat key=value run configuration.

CSV schemas (comma separated, header row mandatory, SI units):

* IMU:       ``t,ax,ay,az,gx,gy,gz``  (s, m/s^2, rad/s)
* truth:     ``t,pitch,pitch_rate``   (s, rad, rad/s)
* estimates: ``t,pitch_est``          (s, rad)

Numbers are serialized in shortest round-trip decimal form, so a
write-then-read cycle reproduces every value exactly.

The config format is one ``key = value`` assignment per line with ``#``
comments; nesting is a single dotted level (``noise.sigma_gyro = 0.02``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .filters import ESTIMATOR_KINDS, EstimateSeries, GammaConfig
from .simulate import ImuSeries, NoiseConfig, TrajectoryConfig, TruthSeries


class ConfigError(ValueError):
    """Unusable run configuration (bad key, bad value, bad file)."""


class DataError(ValueError):
    """Malformed or inconsistent data file."""


IMU_HEADER = "t,ax,ay,az,gx,gy,gz"
TRUTH_HEADER = "t,pitch,pitch_rate"
ESTIMATES_HEADER = "t,pitch_est"


def _fmt(value: float) -> str:
    return repr(float(value))


def _write_csv(path, header: str, columns) -> None:
    rows = np.column_stack(columns)
    with open(path, "w", newline="") as handle:
        handle.write(header + "\n")
        for row in rows:
            handle.write(",".join(_fmt(v) for v in row) + "\n")


def _read_csv(path, header: str):
    expected_fields = header.count(",") + 1
    rows = []
    with open(path, "r", newline="") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise DataError(f"{path}: empty file")
    if lines[0] != header:
        raise DataError(f"{path}: line 1: expected header {header!r}, got {lines[0]!r}")
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != expected_fields:
            raise DataError(
                f"{path}: line {lineno}: expected {expected_fields} fields, "
                f"got {len(fields)}"
            )
        try:
            values = [float(tok) for tok in fields]
        except ValueError:
            raise DataError(f"{path}: line {lineno}: invalid number in {line!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise DataError(f"{path}: line {lineno}: non-finite value in {line!r}")
        rows.append(values)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return np.array(rows)


def write_imu_csv(path, series: ImuSeries) -> None:
    _write_csv(
        path,
        IMU_HEADER,
        (series.t, series.accel[:, 0], series.accel[:, 1], series.accel[:, 2],
         series.gyro[:, 0], series.gyro[:, 1], series.gyro[:, 2]),
    )


def read_imu_csv(path) -> ImuSeries:
    data = _read_csv(path, IMU_HEADER)
    try:
        return ImuSeries(t=data[:, 0], accel=data[:, 1:4], gyro=data[:, 4:7])
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_truth_csv(path, truth: TruthSeries) -> None:
    _write_csv(path, TRUTH_HEADER, (truth.t, truth.pitch, truth.pitch_rate))


def read_truth_csv(path) -> TruthSeries:
    data = _read_csv(path, TRUTH_HEADER)
    try:
        return TruthSeries(
            t=data[:, 0],
            pitch=data[:, 1],
            pitch_rate=data[:, 2],
            linear_accel=np.zeros((len(data), 3)),
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def write_estimates_csv(path, estimates: EstimateSeries) -> None:
    _write_csv(path, ESTIMATES_HEADER, (estimates.t, estimates.pitch))


def read_estimates_csv(path, name: str = "estimates") -> EstimateSeries:
    data = _read_csv(path, ESTIMATES_HEADER)
    t = data[:, 0]
    if len(t) > 1:
        steps = np.diff(t)
        if np.any(steps <= 0.0) or np.max(np.abs(steps - steps[0])) > 1e-9:
            raise DataError(f"{path}: non-uniform or non-increasing timestamps")
    return EstimateSeries(name=name, t=t, pitch=data[:, 1])


@dataclass(frozen=True)
class RunConfig:
    """Everything a simulation/evaluation run depends on."""

    trajectory: TrajectoryConfig = TrajectoryConfig()
    noise: NoiseConfig = NoiseConfig()
    gamma: GammaConfig = GammaConfig()
    estimators: tuple = ESTIMATOR_KINDS
    out_dir: Path = Path(".")

    def __post_init__(self):
        if not self.estimators:
            raise ValueError("at least one estimator must be selected")
        for kind in self.estimators:
            if kind not in ESTIMATOR_KINDS:
                raise ValueError(f"unknown estimator kind: {kind!r}")


_FLOAT_KEYS = {
    "trajectory.amplitude": ("trajectory", "amplitude"),
    "trajectory.frequency": ("trajectory", "frequency"),
    "trajectory.duration": ("trajectory", "duration"),
    "trajectory.dt": ("trajectory", "dt"),
    "noise.sigma_accel": ("noise", "sigma_accel"),
    "noise.sigma_gyro": ("noise", "sigma_gyro"),
    "noise.sigma_rw": ("noise", "sigma_rw"),
    "gamma.g": ("gamma", "g"),
    "gamma.accel_scale": ("gamma", "accel_scale"),
}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    """Parse the key=value configuration format.

    Unknown keys, duplicate keys, unparsable values, and values violating a
    config invariant all raise :class:`ConfigError` naming the offending key
    and line.
    """
    fields = {"trajectory": {}, "noise": {}, "gamma": {}}
    estimators: Optional[tuple] = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}: line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in seen:
            raise ConfigError(f"{source}: line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _FLOAT_KEYS:
            section, name = _FLOAT_KEYS[key]
            try:
                parsed = float(value)
            except ValueError:
                raise ConfigError(
                    f"{source}: line {lineno}: key {key!r}: invalid number {value!r}"
                ) from None
            if not math.isfinite(parsed):
                raise ConfigError(
                    f"{source}: line {lineno}: key {key!r}: non-finite value"
                )
            fields[section][name] = parsed
        elif key == "noise.seed":
            try:
                fields["noise"]["seed"] = int(value)
            except ValueError:
                raise ConfigError(
                    f"{source}: line {lineno}: key {key!r}: invalid integer {value!r}"
                ) from None
        elif key == "estimators":
            kinds = tuple(item.strip() for item in value.split(",") if item.strip())
            if not kinds:
                raise ConfigError(
                    f"{source}: line {lineno}: key {key!r}: empty estimator list"
                )
            for kind in kinds:
                if kind not in ESTIMATOR_KINDS:
                    raise ConfigError(
                        f"{source}: line {lineno}: key {key!r}: unknown estimator "
                        f"{kind!r} (expected one of {ESTIMATOR_KINDS})"
                    )
            estimators = kinds
        else:
            raise ConfigError(f"{source}: line {lineno}: unknown key {key!r}")
    try:
        return RunConfig(
            trajectory=TrajectoryConfig(**fields["trajectory"]),
            noise=NoiseConfig(**fields["noise"]),
            gamma=GammaConfig(**fields["gamma"]),
            estimators=estimators if estimators is not None else ESTIMATOR_KINDS,
        )
    except ValueError as exc:
        raise ConfigError(f"{source}: {exc}") from None


def load_config(path=None) -> RunConfig:
    """Read a config file, or return the built-in defaults when ``path`` is None."""
    if path is None:
        return RunConfig()
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, source=str(path))
