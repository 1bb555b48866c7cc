"""Pitch estimators and error metrics.

Four estimators share one interface: a complementary filter blending the
gravity-geometry pitch with integrated gyro rate under an
acceleration-driven weight, the two single-sensor observers (accelerometer
tilt, cumulative gyro integration), and a two-state linear Kalman filter
estimating pitch and gyro bias.

``complementary_step``, ``kf_predict`` and ``kf_update`` are the reference
single-step operations; ``run_estimator`` executes whole series through the
selected kernel backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from ._backend import kernels
from .angles import GRAVITY, ImuSample, integrate_gyro, pitch_from_accel
from .simulate import ImuSeries, NoiseConfig, TruthSeries

ESTIMATOR_KINDS = ("complementary", "gyro_only", "accel_only", "kalman")


@dataclass(frozen=True)
class GammaConfig:
    """Parameters of the acceleration-driven blend weight.

    The weight is ``clamp(|g - a_z| / accel_scale, 0, 1)``: zero (pure
    accelerometer) when the z-axis reading equals gravity, saturating to one
    (pure gyro) as the dynamic acceleration grows past ``accel_scale``.
    """

    g: float = GRAVITY
    accel_scale: float = 2.0

    def __post_init__(self):
        if not (self.accel_scale > 0.0):
            raise ValueError(f"accel_scale must be > 0, got {self.accel_scale}")


def gamma(accel, cfg: GammaConfig = GammaConfig()) -> float:
    """Blend weight in [0, 1] for one accelerometer reading."""
    az = float(accel[2])
    if not math.isfinite(az):
        raise ValueError(f"non-finite accelerometer z reading: {az}")
    return min(max(abs(cfg.g - az) / cfg.accel_scale, 0.0), 1.0)


def complementary_step(
    prev_pitch: float,
    sample: ImuSample,
    dt: float,
    cfg: GammaConfig = GammaConfig(),
) -> float:
    """One complementary-filter step: ``pitchAcc*(1-gamma) + pitchGyro*gamma``."""
    pacc = pitch_from_accel(sample.accel)
    pgyro = integrate_gyro(prev_pitch, sample.gyro[1], dt)
    gm = gamma(sample.accel, cfg)
    return pacc * (1.0 - gm) + pgyro * gm


@dataclass(frozen=True)
class KalmanTuning:
    """Noise covariances and initial uncertainty of the pitch/bias filter."""

    q_pitch: float
    q_bias: float
    r: float
    p0_pitch: float = 0.1
    p0_bias: float = 0.01


_R_FLOOR = 1e-12  # rad^2; keeps R positive for noise-free runs (update requires R > 0)


def kalman_tuning_from_noise(
    noise: NoiseConfig, dt: float, gravity: float = GRAVITY
) -> KalmanTuning:
    """Derive filter covariances from the sensor noise model.

    Process noise discretizes the white gyro noise and the bias walk over one
    step; measurement noise is the accelerometer noise propagated to pitch at
    level attitude (first order, ``sigma_accel / g``), floored at a
    sub-microradian variance so a noise-free configuration stays well posed.
    """
    if dt <= 0.0:
        raise ValueError(f"non-positive timestep: {dt}")
    return KalmanTuning(
        q_pitch=noise.sigma_gyro**2 * dt**2,
        q_bias=noise.sigma_rw**2 * dt,
        r=max((noise.sigma_accel / gravity) ** 2, _R_FLOOR),
    )


@dataclass(frozen=True)
class KalmanModel:
    """State, covariance, and noise matrices of the pitch/bias filter.

    ``x = [pitch, gyro_bias]``; the observation is the gravity-geometry pitch
    (``H = [1, 0]``); the gyro reading enters the prediction as control input.
    ``P`` is kept symmetric by explicit symmetrization after every step.
    """

    x: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    R: float

    @classmethod
    def initial(cls, pitch: float, tuning: KalmanTuning) -> "KalmanModel":
        return cls(
            x=np.array([pitch, 0.0]),
            P=np.diag([tuning.p0_pitch, tuning.p0_bias]),
            Q=np.diag([tuning.q_pitch, tuning.q_bias]),
            R=tuning.r,
        )


def kf_predict(model: KalmanModel, gyro_y: float, dt: float) -> KalmanModel:
    """Propagate the state one step using the gyro reading as control input."""
    if dt <= 0.0:
        raise ValueError(f"non-positive timestep: {dt}")
    F = np.array([[1.0, -dt], [0.0, 1.0]])
    x = np.array([model.x[0] + (gyro_y - model.x[1]) * dt, model.x[1]])
    P = F @ model.P @ F.T + model.Q
    P = 0.5 * (P + P.T)
    return replace(model, x=x, P=P)


def kf_update(model: KalmanModel, pitch_measurement: float) -> KalmanModel:
    """Fold in one pitch measurement (standard linear update, H = [1, 0])."""
    if not (model.R > 0.0):
        raise ValueError(f"measurement noise R must be > 0, got {model.R}")
    if not math.isfinite(pitch_measurement):
        raise ValueError(f"non-finite pitch measurement: {pitch_measurement}")
    s = model.P[0, 0] + model.R
    K = model.P[:, 0] / s
    x = model.x + K * (pitch_measurement - model.x[0])
    IKH = np.array([[1.0 - K[0], 0.0], [-K[1], 1.0]])
    P = IKH @ model.P
    P = 0.5 * (P + P.T)
    return replace(model, x=x, P=P)


@dataclass(frozen=True)
class EstimateSeries:
    """Per-timestep pitch estimates from one named estimator.

    Metric fields are ``None`` until the series is scored against a truth
    series (see :func:`score`).
    """

    name: str
    t: np.ndarray
    pitch: np.ndarray
    rmse: Optional[float] = None
    final_error: Optional[float] = None

    def __len__(self) -> int:
        return len(self.t)


def _as_series(samples) -> ImuSeries:
    if isinstance(samples, ImuSeries):
        return samples
    return ImuSeries.from_samples(samples)


def run_estimator(
    samples,
    kind: str,
    *,
    gamma_cfg: Optional[GammaConfig] = None,
    tuning: Optional[KalmanTuning] = None,
    initial_pitch: Optional[float] = None,
) -> EstimateSeries:
    """Run one estimator over a uniformly sampled IMU series.

    Args:
        samples: ``ImuSeries`` or iterable of ``ImuSample``.
        kind: One of ``complementary``, ``gyro_only``, ``accel_only``,
            ``kalman``.
        gamma_cfg: Blend-weight parameters (complementary only); defaults to
            ``GammaConfig()``.
        tuning: Kalman covariances; defaults to values derived from the
            default noise model at the series spacing.
        initial_pitch: Starting estimate; defaults to the gravity-geometry
            pitch of the first sample (ignored by ``accel_only``, which is
            pointwise).

    Returns:
        One estimate per input sample, on the input timestamps.
    """
    if kind not in ESTIMATOR_KINDS:
        raise ValueError(
            f"unknown estimator kind: {kind!r} (expected one of {ESTIMATOR_KINDS})"
        )
    series = _as_series(samples)
    ax = np.ascontiguousarray(series.accel[:, 0])
    ay = np.ascontiguousarray(series.accel[:, 1])
    az = np.ascontiguousarray(series.accel[:, 2])
    gyro_y = np.ascontiguousarray(series.gyro[:, 1])
    dt = series.dt

    if kind == "accel_only":
        pitch = kernels.run_accel_only(ax, ay, az)
        return EstimateSeries(name=kind, t=series.t.copy(), pitch=pitch)

    if initial_pitch is None:
        initial_pitch = pitch_from_accel(series.accel[0])
    if kind == "gyro_only":
        pitch = kernels.run_gyro_only(initial_pitch, gyro_y, dt)
    elif kind == "complementary":
        cfg = gamma_cfg if gamma_cfg is not None else GammaConfig()
        pitch = kernels.run_complementary(
            initial_pitch, ax, ay, az, gyro_y, dt, cfg.g, cfg.accel_scale
        )
    else:
        if tuning is None:
            tuning = kalman_tuning_from_noise(NoiseConfig(), dt if dt > 0.0 else 0.01)
        pitch, _ = kernels.run_kalman(
            initial_pitch,
            0.0,
            tuning.p0_pitch,
            0.0,
            0.0,
            tuning.p0_bias,
            tuning.q_pitch,
            tuning.q_bias,
            tuning.r,
            ax,
            ay,
            az,
            gyro_y,
            dt,
        )
    return EstimateSeries(name=kind, t=series.t.copy(), pitch=pitch)


def _check_aligned(estimates: EstimateSeries, truth: TruthSeries) -> None:
    if len(estimates) != len(truth):
        raise ValueError(
            f"length mismatch: {len(estimates)} estimates vs {len(truth)} truth samples"
        )
    if not np.array_equal(estimates.t, truth.t):
        raise ValueError("timestamp mismatch between estimates and truth")


def rmse(estimates: EstimateSeries, truth: TruthSeries) -> float:
    """Root-mean-square pitch error against ground truth [rad]."""
    _check_aligned(estimates, truth)
    err = estimates.pitch - truth.pitch
    return float(np.sqrt(np.mean(err * err)))


def final_drift(estimates: EstimateSeries, truth: TruthSeries) -> float:
    """Absolute pitch error at the last timestamp [rad]."""
    _check_aligned(estimates, truth)
    return float(abs(estimates.pitch[-1] - truth.pitch[-1]))


def max_abs_error(estimates: EstimateSeries, truth: TruthSeries) -> float:
    """Largest absolute pitch error over the run [rad]."""
    _check_aligned(estimates, truth)
    return float(np.max(np.abs(estimates.pitch - truth.pitch)))


def score(estimates: EstimateSeries, truth: TruthSeries) -> EstimateSeries:
    """Return a copy of the estimates with the metric fields filled in."""
    return replace(
        estimates,
        rmse=rmse(estimates, truth),
        final_error=final_drift(estimates, truth),
    )
