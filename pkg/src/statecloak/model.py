"""Scalar plant model and the sensor-side Kalman filter.

The plant is a stable scalar linear system driven by white Gaussian noise,

    x[k+1] = a * x[k] + w[k],      w ~ N(0, q)
    y[k]   = x[k] + v[k],          v ~ N(0, r)

with |a| < 1, q >= 0, r > 0. The sensor runs a steady-state Kalman filter
on its own measurements and transmits state estimates, not raw
measurements. Because the filter is in steady state from the first packet,
the sensor-side error variance is the constant p_bar, which is what keeps
the receiver-side recursions finite-dimensional.

Two analytic baselines anchor everything downstream: p_bar (the filter's
fixed-point error variance) and the open-loop variance q / (1 - a^2), the
error of estimating from no data at all.

All parameters here are public; secrecy comes only from the encoding layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ParameterError

__all__ = [
    "SystemParams",
    "PlantState",
    "SensorEstimate",
    "riccati_fixed_point",
    "open_loop_variance",
    "sensor_gain",
    "step_plant",
    "measure",
    "init_sensor_estimate",
    "sensor_filter_update",
]


def _open_loop(a: float, q: float) -> float:
    return q / (1.0 - a * a)


def _riccati(a: float, q: float, r: float) -> float:
    if a == 0.0:
        p = q * r / (q + r) if q > 0.0 else 0.0
    else:
        b = q + r - r * a * a
        # numerically stable quadratic root: 2qr / (b + sqrt(b^2 + 4 a^2 q r))
        p = 2.0 * q * r / (b + math.sqrt(b * b + 4.0 * a * a * q * r))
    for _ in range(200):
        m = a * a * p + q
        nxt = m * r / (m + r)
        if abs(nxt - p) < 1e-13:
            p = nxt
            break
        p = nxt
    m = a * a * p + q
    assert abs(p - m * r / (m + r)) < 1e-12
    return p


@dataclass(frozen=True)
class SystemParams:
    """Public parameters of the plant, its noises, and the initial state.

    sigma0 is the variance of the initial state x[0] ~ N(0, sigma0). It
    defaults to the stationary variance q / (1 - a^2) so the process starts
    in steady state and time averages converge without a transient.
    """

    a: float
    q: float
    r: float
    sigma0: float | None = field(default=None)

    def __post_init__(self) -> None:
        if not abs(self.a) < 1.0:
            raise ParameterError(f"plant must be stable, got a={self.a!r}")
        if not self.q >= 0.0:
            raise ParameterError(f"process noise variance must be nonnegative, got q={self.q!r}")
        if not self.r > 0.0:
            raise ParameterError(f"measurement noise variance must be positive, got r={self.r!r}")
        if self.sigma0 is None:
            object.__setattr__(self, "sigma0", _open_loop(self.a, self.q))
        elif not self.sigma0 >= 0.0:
            raise ParameterError(f"initial variance must be nonnegative, got sigma0={self.sigma0!r}")

    @property
    def p_bar(self) -> float:
        """Sensor filter steady-state error variance."""
        return riccati_fixed_point(self)

    @property
    def p_op(self) -> float:
        """Open-loop error variance, the no-data baseline."""
        return open_loop_variance(self)

    @property
    def kalman_gain(self) -> float:
        return sensor_gain(self)


@dataclass(frozen=True)
class PlantState:
    """True plant state at one time step."""

    x: float
    k: int


@dataclass(frozen=True)
class SensorEstimate:
    """Sensor filter output: the estimate and its constant error variance."""

    x_hat_s: float
    p_bar: float


def riccati_fixed_point(params: SystemParams) -> float:
    """Steady-state error variance of the sensor filter.

    Solves p = f(p) with f(p) = m r / (m + r), m = a^2 p + q, which is a
    scalar quadratic a^2 p^2 + (q + r - r a^2) p - q r = 0 with exactly one
    nonnegative root. The closed-form root is polished by fixed-point
    iteration so the returned value satisfies |p - f(p)| < 1e-12 regardless
    of cancellation in the quadratic formula.
    """
    return _riccati(params.a, params.q, params.r)


def open_loop_variance(params: SystemParams) -> float:
    """Stationary state variance q / (1 - a^2), the no-information error floor."""
    return _open_loop(params.a, params.q)


def sensor_gain(params: SystemParams) -> float:
    """Steady-state Kalman gain (a^2 p_bar + q) / (a^2 p_bar + q + r)."""
    m = params.a * params.a * _riccati(params.a, params.q, params.r) + params.q
    return m / (m + params.r)


def step_plant(state: PlantState, params: SystemParams, noise_draw: float) -> PlantState:
    """Advance the plant one step; noise_draw is a realized w[k] ~ N(0, q)."""
    return PlantState(x=params.a * state.x + noise_draw, k=state.k + 1)


def measure(state: PlantState, noise_draw: float) -> float:
    """Noisy measurement y[k] = x[k] + v[k]; noise_draw is a realized v[k]."""
    return state.x + noise_draw


def init_sensor_estimate(params: SystemParams, y0: float) -> SensorEstimate:
    """First filter output: steady-state gain times the first measurement.

    With a zero-mean prior the predicted estimate at k=0 is zero, so the
    steady-state update reduces to gain * y[0]. Starting at the fixed point
    (rather than running a transient filter) is what keeps p_bar constant
    from the very first packet.
    """
    return SensorEstimate(x_hat_s=sensor_gain(params) * y0, p_bar=riccati_fixed_point(params))


def sensor_filter_update(prev: SensorEstimate, y: float, params: SystemParams) -> SensorEstimate:
    """One steady-state Kalman update: predict with a, correct toward y."""
    pred = params.a * prev.x_hat_s
    gain = sensor_gain(params)
    return SensorEstimate(x_hat_s=pred + gain * (y - pred), p_bar=prev.p_bar)
