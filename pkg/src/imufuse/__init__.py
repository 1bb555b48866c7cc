"""imufuse: simulate noisy IMU data and recover pitch by sensor fusion.

The package generates a known pitch trajectory, synthesizes accelerometer
and gyroscope readings corrupted by white noise and a gyro bias random walk,
and compares four estimators: a complementary filter, accelerometer tilt,
pure gyro integration, and a linear Kalman filter.
"""

from ._backend import BACKEND
from .angles import GRAVITY, ImuSample, Vec3, integrate_gyro, pitch_from_accel, wrap_angle
from .filters import (
    ESTIMATOR_KINDS,
    EstimateSeries,
    GammaConfig,
    KalmanModel,
    KalmanTuning,
    complementary_step,
    final_drift,
    gamma,
    kalman_tuning_from_noise,
    kf_predict,
    kf_update,
    max_abs_error,
    rmse,
    run_estimator,
    score,
)
from .simulate import (
    GroundTruthSample,
    ImuSeries,
    NoiseConfig,
    TrajectoryConfig,
    TruthSeries,
    add_noise,
    bias_walk_step,
    generate_trajectory,
    ideal_imu,
    simulate_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ESTIMATOR_KINDS",
    "EstimateSeries",
    "GRAVITY",
    "GammaConfig",
    "GroundTruthSample",
    "ImuSample",
    "ImuSeries",
    "KalmanModel",
    "KalmanTuning",
    "NoiseConfig",
    "TrajectoryConfig",
    "TruthSeries",
    "Vec3",
    "add_noise",
    "bias_walk_step",
    "complementary_step",
    "final_drift",
    "gamma",
    "generate_trajectory",
    "ideal_imu",
    "integrate_gyro",
    "kalman_tuning_from_noise",
    "kf_predict",
    "kf_update",
    "max_abs_error",
    "pitch_from_accel",
    "rmse",
    "run_estimator",
    "score",
    "simulate_scenario",
    "wrap_angle",
]
