"""Trajectory generation, ideal IMU synthesis, and the sensor noise model.

The simulated body oscillates in pitch only (a sinusoid with zero body-frame
linear acceleration), so the accelerometer sees a pure gravity projection and
the gyroscope y-axis sees the analytic pitch rate.  Noise is added as
independent white Gaussian noise per axis plus a single random-walk bias
shared by the gyroscope axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import GRAVITY, ImuSample, Vec3

_SPACING_TOL = 1e-9


@dataclass(frozen=True)
class TrajectoryConfig:
    """Sinusoidal pitch trajectory: ``pitch(t) = amplitude * sin(2*pi*frequency*t)``.

    Attributes:
        amplitude: Peak pitch [rad], in ``[0, pi/2)``.
        frequency: Oscillation frequency [Hz], non-negative.
        duration: Total simulated time [s], at least one timestep.
        dt: Sample spacing [s], strictly positive.
    """

    amplitude: float = 0.5
    frequency: float = 0.1
    duration: float = 5.0
    dt: float = 0.01

    def __post_init__(self):
        if not (self.dt > 0.0):
            raise ValueError(f"trajectory dt must be > 0, got {self.dt}")
        if not (self.duration >= self.dt):
            raise ValueError(
                f"trajectory duration must be >= dt, got {self.duration} < {self.dt}"
            )
        if not (0.0 <= self.amplitude < math.pi / 2.0):
            raise ValueError(
                f"trajectory amplitude must be in [0, pi/2), got {self.amplitude}"
            )
        if not (self.frequency >= 0.0):
            raise ValueError(f"trajectory frequency must be >= 0, got {self.frequency}")


@dataclass(frozen=True)
class NoiseConfig:
    """Sensor noise magnitudes and the RNG seed that fixes the realization.

    ``sigma_rw`` is the intensity of the gyroscope bias random walk in
    rad/s/sqrt(s); the default is calibrated so the gyro-only estimator
    drifts by roughly 0.3 rad over 5 s at the default trajectory.
    """

    sigma_accel: float = 0.5
    sigma_gyro: float = 0.02
    sigma_rw: float = 0.065
    seed: int = 42

    def __post_init__(self):
        for name in ("sigma_accel", "sigma_gyro", "sigma_rw"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ValueError(f"noise {name} must be finite and >= 0, got {value}")
        if not (isinstance(self.seed, (int, np.integer)) and self.seed >= 0):
            raise ValueError(f"noise seed must be a non-negative integer, got {self.seed}")


@dataclass(frozen=True)
class GroundTruthSample:
    """True pitch, pitch rate, and body-frame linear acceleration at time t."""

    t: float
    pitch: float
    pitch_rate: float
    linear_accel: Vec3


def _check_time_grid(t: np.ndarray, what: str) -> None:
    if t.ndim != 1 or len(t) == 0:
        raise ValueError(f"empty {what}")
    if not np.all(np.isfinite(t)):
        raise ValueError(f"non-finite timestamps in {what}")
    if len(t) > 1:
        steps = np.diff(t)
        if np.any(steps <= 0.0):
            raise ValueError(f"timestamps not strictly increasing in {what}")
        if np.max(np.abs(steps - steps[0])) > _SPACING_TOL:
            raise ValueError(f"non-uniform sample spacing in {what}")


@dataclass(frozen=True)
class TruthSeries:
    """Array-backed sequence of ground-truth samples on a uniform time grid."""

    t: np.ndarray
    pitch: np.ndarray
    pitch_rate: np.ndarray
    linear_accel: np.ndarray  # (N, 3)

    def __post_init__(self):
        _check_time_grid(self.t, "truth series")
        n = len(self.t)
        if self.pitch.shape != (n,) or self.pitch_rate.shape != (n,):
            raise ValueError("truth series field lengths disagree")
        if self.linear_accel.shape != (n, 3):
            raise ValueError("truth series linear_accel must have shape (N, 3)")
        for name in ("pitch", "pitch_rate", "linear_accel"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ValueError(f"non-finite values in truth {name}")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def dt(self) -> float:
        if len(self.t) < 2:
            return 0.0
        return float(self.t[1] - self.t[0])

    def sample(self, i: int) -> GroundTruthSample:
        return GroundTruthSample(
            t=float(self.t[i]),
            pitch=float(self.pitch[i]),
            pitch_rate=float(self.pitch_rate[i]),
            linear_accel=Vec3(*self.linear_accel[i]),
        )


@dataclass(frozen=True)
class ImuSeries:
    """Array-backed sequence of IMU samples on a uniform time grid."""

    t: np.ndarray
    accel: np.ndarray  # (N, 3)
    gyro: np.ndarray  # (N, 3)

    def __post_init__(self):
        _check_time_grid(self.t, "IMU series")
        n = len(self.t)
        if self.accel.shape != (n, 3) or self.gyro.shape != (n, 3):
            raise ValueError("IMU series accel/gyro must have shape (N, 3)")
        if not (np.all(np.isfinite(self.accel)) and np.all(np.isfinite(self.gyro))):
            raise ValueError("non-finite values in IMU series")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def dt(self) -> float:
        if len(self.t) < 2:
            return 0.0
        return float(self.t[1] - self.t[0])

    def sample(self, i: int) -> ImuSample:
        return ImuSample(
            t=float(self.t[i]),
            accel=Vec3(*self.accel[i]),
            gyro=Vec3(*self.gyro[i]),
        )

    @classmethod
    def from_samples(cls, samples) -> "ImuSeries":
        samples = list(samples)
        if not samples:
            raise ValueError("empty IMU sample sequence")
        return cls(
            t=np.array([s.t for s in samples], dtype=float),
            accel=np.array([tuple(s.accel) for s in samples], dtype=float),
            gyro=np.array([tuple(s.gyro) for s in samples], dtype=float),
        )


def generate_trajectory(cfg: TrajectoryConfig) -> TruthSeries:
    """Sample the configured sinusoid on the grid ``t = 0, dt, ..., n*dt``.

    Returns ``floor(duration/dt) + 1`` samples; the pitch rate is the analytic
    derivative and the body-frame linear acceleration is identically zero
    (pure rotation).
    """
    # tolerate fp division slop so e.g. duration=5, dt=0.01 yields 500 steps
    steps = int(math.floor(cfg.duration / cfg.dt + 1e-9))
    t = np.arange(steps + 1) * cfg.dt
    omega = 2.0 * math.pi * cfg.frequency
    pitch = cfg.amplitude * np.sin(omega * t)
    pitch_rate = cfg.amplitude * omega * np.cos(omega * t)
    return TruthSeries(
        t=t,
        pitch=pitch,
        pitch_rate=pitch_rate,
        linear_accel=np.zeros((steps + 1, 3)),
    )


def ideal_imu(truth: TruthSeries, gravity: float = GRAVITY) -> ImuSeries:
    """Synthesize noise-free IMU readings along a ground-truth trajectory.

    The accelerometer sees the gravity projection ``(g*sin(pitch), 0,
    g*cos(pitch))`` plus the body-frame linear acceleration; the gyroscope
    sees ``(0, pitch_rate, 0)``.  Exact inverse of the gravity-geometry pitch
    observer whenever the linear acceleration is zero.
    """
    if len(truth) == 0:
        raise ValueError("empty truth series")
    accel = np.empty((len(truth), 3))
    accel[:, 0] = gravity * np.sin(truth.pitch)
    accel[:, 1] = 0.0
    accel[:, 2] = gravity * np.cos(truth.pitch)
    accel += truth.linear_accel
    gyro = np.zeros((len(truth), 3))
    gyro[:, 1] = truth.pitch_rate
    return ImuSeries(t=truth.t.copy(), accel=accel, gyro=gyro)


def bias_walk_step(prev_bias: float, sigma_rw: float, dt: float, draw: float) -> float:
    """One Euler-Maruyama step of the gyro bias random walk.

    Args:
        prev_bias: Bias before the step [rad/s].
        sigma_rw: Walk intensity [rad/s/sqrt(s)], non-negative.
        dt: Timestep [s], strictly positive.
        draw: Standard-normal increment driving the step.

    Returns:
        ``prev_bias + sigma_rw * sqrt(dt) * draw``.
    """
    if dt <= 0.0:
        raise ValueError(f"non-positive timestep: {dt}")
    if sigma_rw < 0.0:
        raise ValueError(f"negative random-walk intensity: {sigma_rw}")
    return prev_bias + sigma_rw * math.sqrt(dt) * draw


def add_noise(series: ImuSeries, cfg: NoiseConfig) -> ImuSeries:
    """Corrupt ideal IMU readings with white noise and a gyro bias walk.

    Every accelerometer axis receives independent zero-mean Gaussian noise of
    std ``sigma_accel``; every gyroscope axis receives independent Gaussian
    noise of std ``sigma_gyro`` plus a shared bias ``b_k`` with ``b_0 = 0``
    and ``b_k = b_{k-1} + N(0, sigma_rw^2 * dt)``.

    The realization is a pure function of ``cfg.seed``.  Streams are drawn
    from a single PCG64 generator in a fixed order: accel-x, accel-y,
    accel-z, gyro-x, gyro-y, gyro-z, bias increments.
    """
    n = len(series)
    rng = np.random.default_rng(cfg.seed)
    accel = series.accel.copy()
    gyro = series.gyro.copy()
    for axis in range(3):
        accel[:, axis] += cfg.sigma_accel * rng.standard_normal(n)
    for axis in range(3):
        gyro[:, axis] += cfg.sigma_gyro * rng.standard_normal(n)
    if n > 1:
        increments = cfg.sigma_rw * math.sqrt(series.dt) * rng.standard_normal(n - 1)
        bias = np.concatenate([[0.0], np.cumsum(increments)])
        gyro += bias[:, None]
    return ImuSeries(t=series.t.copy(), accel=accel, gyro=gyro)


def simulate_scenario(
    trajectory: TrajectoryConfig = TrajectoryConfig(),
    noise: NoiseConfig = NoiseConfig(),
) -> tuple[TruthSeries, ImuSeries]:
    """Generate a trajectory and its noisy IMU readings in one call."""
    truth = generate_trajectory(trajectory)
    return truth, add_noise(ideal_imu(truth), noise)
