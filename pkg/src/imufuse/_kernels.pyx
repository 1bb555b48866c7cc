# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled estimator kernels: the per-sample filter recurrences.

Arithmetic mirrors ``_kernels_py`` operation for operation (built with fp
contraction disabled), so both backends produce matching estimates.
"""

from libc.math cimport atan2, fabs, floor, sqrt

import numpy as np

BACKEND = "cython"

cdef double _PI = 3.141592653589793
cdef double _TWO_PI = 6.283185307179586


cdef inline double _wrap(double theta) noexcept:
    cdef double w
    if -_PI < theta <= _PI:
        return theta
    w = theta - _TWO_PI * floor((theta + _PI) / _TWO_PI)
    if w <= -_PI:
        w += _TWO_PI
    elif w > _PI:
        w -= _TWO_PI
    return w


cdef inline double _pitch_acc(double ax, double ay, double az, Py_ssize_t index) except? -1e308:
    if ax == 0.0 and ay == 0.0 and az == 0.0:
        raise ValueError(
            f"sample {index}: indeterminate orientation: zero accelerometer vector"
        )
    return atan2(ax, sqrt(ay * ay + az * az))


def run_gyro_only(double pitch0, double[::1] gyro_y, double dt):
    cdef Py_ssize_t n = gyro_y.shape[0]
    out = np.empty(n)
    cdef double[::1] est = out
    cdef double p = pitch0
    cdef Py_ssize_t k
    est[0] = p
    for k in range(1, n):
        p = _wrap(p + gyro_y[k] * dt)
        est[k] = p
    return out


def run_accel_only(double[::1] ax, double[::1] ay, double[::1] az):
    cdef Py_ssize_t n = ax.shape[0]
    out = np.empty(n)
    cdef double[::1] est = out
    cdef Py_ssize_t k
    for k in range(n):
        est[k] = _pitch_acc(ax[k], ay[k], az[k], k)
    return out


def run_complementary(double pitch0, double[::1] ax, double[::1] ay,
                      double[::1] az, double[::1] gyro_y, double dt,
                      double gravity, double accel_scale):
    cdef Py_ssize_t n = gyro_y.shape[0]
    out = np.empty(n)
    cdef double[::1] est = out
    cdef double p = pitch0
    cdef double pacc, pgyro, gm
    cdef Py_ssize_t k
    est[0] = p
    for k in range(1, n):
        pacc = _pitch_acc(ax[k], ay[k], az[k], k)
        pgyro = _wrap(p + gyro_y[k] * dt)
        gm = fabs(gravity - az[k]) / accel_scale
        if gm > 1.0:
            gm = 1.0
        elif gm < 0.0:
            gm = 0.0
        p = pacc * (1.0 - gm) + pgyro * gm
        est[k] = p
    return out


def run_kalman(double pitch0, double bias0, double p00, double p01,
               double p10, double p11, double q00, double q11, double r,
               double[::1] ax, double[::1] ay, double[::1] az,
               double[::1] gyro_y, double dt):
    cdef Py_ssize_t n = gyro_y.shape[0]
    est_out = np.empty(n)
    bias_out = np.empty(n)
    cdef double[::1] est = est_out
    cdef double[::1] bias = bias_out
    cdef double x0 = pitch0
    cdef double x1 = bias0
    cdef double c00, c01, n00, n01, n10, n11, off
    cdef double z, s, k0, k1, innov
    cdef Py_ssize_t k
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
        p00 = n00
        p01 = off
        p10 = off
        p11 = n11

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
        p00 = n00
        p01 = off
        p10 = off
        p11 = n11

        est[k] = x0
        bias[k] = x1
    return est_out, bias_out
