"""Univariate Theta-method benchmark.

Two auxiliary lines are fitted by regressing ``(1 - theta) * y_t`` on a
constant and ``t - 1`` for ``theta = 0`` (the plain linear time trend) and
``theta = 2``.  The theta-2 series ``a2 + b2 * (t-1) + 2 * y_t`` doubles the
fluctuations around the trend and is smoothed by simple exponential
smoothing with a fixed parameter; the h-step forecast is the average of the
extrapolated trend and the final smoothed state, which is the same for
every horizon.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_GAMMA = 0.3


@dataclass(frozen=True)
class ThetaFit:
    """Fitted trend-line parameters, theta-2 series and smoothing state."""

    a0: float
    b0: float
    a2: float
    b2: float
    theta2_series: np.ndarray
    ses_state: float
    gamma: float
    n_obs: int


def _line_fit(y: np.ndarray, tt: np.ndarray) -> tuple[float, float]:
    t_mean = tt.mean()
    y_mean = y.mean()
    var_t = float(np.dot(tt - t_mean, tt - t_mean))
    slope = float(np.dot(tt - t_mean, y - y_mean)) / var_t
    return y_mean - slope * t_mean, slope


def theta_fit(series, gamma: float = DEFAULT_GAMMA) -> ThetaFit:
    """Fit the two theta lines and run the exponential smoother.

    Parameters
    ----------
    series : array_like
        One-dimensional series, length >= 3.
    gamma : float
        Smoothing parameter in (0, 1]; the smoother starts at the first
        theta-2 value.
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 1:
        raise ValueError(f"series must be one-dimensional, got shape {y.shape}")
    n = y.size
    if n < 3:
        raise ValueError(f"need at least 3 observations, got {n}")
    if not np.all(np.isfinite(y)):
        raise ValueError("series contains non-finite values")
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must be in (0, 1], got {gamma}")

    tt = np.arange(n, dtype=float)  # the regressor is t - 1 for t = 1..n
    a0, b0 = _line_fit(y, tt)
    a2, b2 = _line_fit(-y, tt)
    theta2 = a2 + b2 * tt + 2.0 * y

    state = float(theta2[0])
    for value in theta2[1:]:
        state = gamma * float(value) + (1.0 - gamma) * state

    return ThetaFit(
        a0=a0, b0=b0, a2=a2, b2=b2,
        theta2_series=theta2, ses_state=state, gamma=gamma, n_obs=n,
    )


def theta_forecast(fit: ThetaFit, h: int) -> float:
    """Average of the extrapolated trend line and the smoothed state.

    Only one- and two-step horizons are supported; the smoothing component
    does not depend on `h`, so the two horizons differ by ``b0 / 2``.
    """
    if h not in (1, 2):
        raise ValueError(f"horizon must be 1 or 2, got {h}")
    line = fit.a0 + fit.b0 * (fit.n_obs + h - 1)
    return 0.5 * (line + fit.ses_state)
