"""Angle arithmetic and the two primitive pitch observers.

Conventions used throughout the package:

* Pitch is the rotation about the body y-axis, positive nose-up, expressed
  in radians.  Angles are kept in the half-open interval ``(-pi, pi]``;
  pitch recovered from gravity geometry additionally lies in
  ``[-pi/2, pi/2]``.
* Accelerometers report specific force in the body frame in m/s^2.  A level
  body at rest reads ``(0, 0, +g)``; at pitch ``theta`` the ideal reading is
  ``(g*sin(theta), 0, g*cos(theta))``.
* Gyroscopes report angular rate in the body frame in rad/s; the y
  component is the pitch rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

GRAVITY = 9.81
"""Gravitational acceleration in m/s^2 (single point of configuration)."""

_TWO_PI = 2.0 * math.pi


class Vec3(NamedTuple):
    """A 3-vector in the body frame (m/s^2 as specific force, rad/s as rate)."""

    x: float
    y: float
    z: float


@dataclass(frozen=True)
class ImuSample:
    """One timestamped accelerometer + gyroscope reading in the body frame.

    Attributes:
        t: Sample time [s], non-negative.
        accel: Specific force [m/s^2].
        gyro: Angular rate [rad/s].
    """

    t: float
    accel: Vec3
    gyro: Vec3


def wrap_angle(theta: float) -> float:
    """Wrap an angle to its representative in ``(-pi, pi]``.

    Idempotent: values already in range are returned unchanged (bit-exact).

    Raises:
        ValueError: If ``theta`` is NaN or infinite.
    """
    if not math.isfinite(theta):
        raise ValueError(f"non-finite angle: {theta}")
    if -math.pi < theta <= math.pi:
        return theta
    w = theta - _TWO_PI * math.floor((theta + math.pi) / _TWO_PI)
    # guard the interval ends against rounding of the reduction above
    if w <= -math.pi:
        w += _TWO_PI
    elif w > math.pi:
        w -= _TWO_PI
    return w


def pitch_from_accel(accel) -> float:
    """Pitch observed from the gravity direction of a specific-force reading.

    Uses the two-argument arctangent of ``(a_x, sqrt(a_y^2 + a_z^2))`` so the
    result lies in ``[-pi/2, pi/2]`` and the ``a_y = a_z = 0`` case resolves
    to ``+/-pi/2`` instead of dividing by zero.  Scale invariant: valid for
    any nonzero multiple of the gravity vector.

    Args:
        accel: Specific force ``(a_x, a_y, a_z)`` [m/s^2].

    Raises:
        ValueError: If the reading is non-finite or the zero vector (no
            gravity reference, orientation indeterminate).
    """
    ax, ay, az = float(accel[0]), float(accel[1]), float(accel[2])
    if not (math.isfinite(ax) and math.isfinite(ay) and math.isfinite(az)):
        raise ValueError(f"non-finite accelerometer reading: ({ax}, {ay}, {az})")
    if ax == 0.0 and ay == 0.0 and az == 0.0:
        raise ValueError("indeterminate orientation: zero accelerometer vector")
    return math.atan2(ax, math.sqrt(ay * ay + az * az))


def integrate_gyro(prev_pitch: float, omega_y: float, dt: float) -> float:
    """Advance pitch by one explicit Euler step of the measured pitch rate.

    Args:
        prev_pitch: Pitch estimate at the previous sample [rad].
        omega_y: Angular rate about the body y-axis [rad/s].
        dt: Timestep [s], strictly positive.

    Returns:
        ``prev_pitch + omega_y * dt`` wrapped to ``(-pi, pi]``.

    Raises:
        ValueError: If ``dt <= 0`` or any input is non-finite.
    """
    if not (math.isfinite(prev_pitch) and math.isfinite(omega_y) and math.isfinite(dt)):
        raise ValueError("non-finite input to gyro integration")
    if dt <= 0.0:
        raise ValueError(f"non-positive timestep: {dt}")
    return wrap_angle(prev_pitch + omega_y * dt)
