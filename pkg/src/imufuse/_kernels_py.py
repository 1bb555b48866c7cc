"""Pure-Python estimator kernels (fallback when the compiled core is absent).

These loops mirror the arithmetic of the compiled kernels operation for
operation, so both backends produce matching estimates.  Inputs are
contiguous float64 arrays of equal length with finite values; validation
happens in the dispatching layer.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "python"

_PI = math.pi
_TWO_PI = 2.0 * math.pi


def _wrap(theta: float) -> float:
    if -_PI < theta <= _PI:
        return theta
    w = theta - _TWO_PI * math.floor((theta + _PI) / _TWO_PI)
    if w <= -_PI:
        w += _TWO_PI
    elif w > _PI:
        w -= _TWO_PI
    return w


def _pitch_acc(ax: float, ay: float, az: float, index: int) -> float:
    if ax == 0.0 and ay == 0.0 and az == 0.0:
        raise ValueError(
            f"sample {index}: indeterminate orientation: zero accelerometer vector"
        )
    return math.atan2(ax, math.sqrt(ay * ay + az * az))


def run_gyro_only(pitch0, gyro_y, dt):
    n = len(gyro_y)
    est = np.empty(n)
    p = pitch0
    est[0] = p
    for k in range(1, n):
        p = _wrap(p + gyro_y[k] * dt)
        est[k] = p
    return est


def run_accel_only(ax, ay, az):
    n = len(ax)
    est = np.empty(n)
    for k in range(n):
        est[k] = _pitch_acc(ax[k], ay[k], az[k], k)
    return est


def run_complementary(pitch0, ax, ay, az, gyro_y, dt, gravity, accel_scale):
    n = len(gyro_y)
    est = np.empty(n)
    p = pitch0
    est[0] = p
    for k in range(1, n):
        pacc = _pitch_acc(ax[k], ay[k], az[k], k)
        pgyro = _wrap(p + gyro_y[k] * dt)
        gm = min(max(abs(gravity - az[k]) / accel_scale, 0.0), 1.0)
        p = pacc * (1.0 - gm) + pgyro * gm
        est[k] = p
    return est


def run_kalman(pitch0, bias0, p00, p01, p10, p11, q00, q11, r, ax, ay, az, gyro_y, dt):
    n = len(gyro_y)
    est = np.empty(n)
    bias = np.empty(n)
    x0 = pitch0
    x1 = bias0
    est[0] = x0
    bias[0] = x1
    for k in range(1, n):
        # predict: x <- F x + B u, P <- F P F^T + Q, F = [[1, -dt], [0, 1]]
        x0 = x0 + (gyro_y[k] - x1) * dt
        c00 = p00 - dt * p10
        c01 = p01 - dt * p11
        n00 = (c00 - dt * c01) + q00
        n01 = c01
        n10 = p10 - dt * p11
        n11 = p11 + q11
        off = 0.5 * (n01 + n10)
        p00, p01, p10, p11 = n00, off, off, n11

        # update with the gravity-geometry pitch measurement, H = [1, 0]
        z = _pitch_acc(ax[k], ay[k], az[k], k)
        s = p00 + r
        k0 = p00 / s
        k1 = p10 / s
        innov = z - x0
        x0 = x0 + k0 * innov
        x1 = x1 + k1 * innov
        n00 = (1.0 - k0) * p00
        n01 = (1.0 - k0) * p01
        n10 = p10 - k1 * p00
        n11 = p11 - k1 * p01
        off = 0.5 * (n01 + n10)
        p00, p01, p10, p11 = n00, off, off, n11

        est[k] = x0
        bias[k] = x1
    return est, bias
