"""Completion of the jagged monthly edge inside a snapshot.

Every monthly regressor series must reach the last month of the nowcast
quarter before it can be averaged into quarterly terms.  Three rules close
the gap:

* ``trend_step`` -- smooth series: extend the last observation by the final
  penalized-trend growth, one step per missing month.
* ``moving_average`` -- noisy series: anchor on the mean of the last three
  observations (centered one month behind the edge) and extend it with the
  mean of the last three trend growths.
* ``proxy_regression`` -- exports/imports of goods and services: when the
  goods-only series leads, the next month is predicted from a regression of
  year-over-year growth on the proxy's year-over-year growth; the remainder
  of the gap falls back to the moving-average rule on the augmented series.

Card transactions are deflated with the consumer price index before any
completion, so gap filling always operates on the real series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import DataError, EstimationError
from .hpfilter import DEFAULT_LAMBDA, hp_trend, trend_growth
from .periods import MonthIndex, QuarterIndex
from .series import NOISY, SMOOTH, MonthlySeries
from . import ols

TREND_STEP = "trend_step"
MOVING_AVERAGE = "moving_average"
PROXY_REGRESSION = "proxy_regression"

# Which completed series is predicted from which faster-releasing proxy, and
# which nominal series is deflated by which price index before completion.
TRADE_PROXIES = {"EXGS": "EXG", "IMGS": "IMG"}
DEFLATORS = {"ATM": "CPI"}

MIN_PROXY_OVERLAP = 20


@dataclass(frozen=True)
class CompletedMonthlySeries:
    """Observed series plus the forecasts that close its jagged edge."""

    observed: MonthlySeries
    forecasts: dict[MonthIndex, float]
    method_tags: dict[MonthIndex, str]

    def __post_init__(self) -> None:
        last = self.observed.last_period if len(self.observed) else None
        for month in self.forecasts:
            if last is not None and month <= last:
                raise DataError(
                    f"series {self.observed.id}: forecast at {month} would "
                    f"overwrite an observation"
                )
            if month not in self.method_tags:
                raise DataError(f"series {self.observed.id}: untagged forecast at {month}")

    @property
    def id(self) -> str:
        return self.observed.id

    @property
    def last_month(self) -> MonthIndex:
        if self.forecasts:
            return max(self.forecasts)
        return self.observed.last_period

    def has(self, month: MonthIndex) -> bool:
        return self.observed.has(month) or month in self.forecasts

    def value_at(self, month: MonthIndex) -> float:
        if self.observed.has(month):
            return self.observed.value_at(month)
        if month in self.forecasts:
            return self.forecasts[month]
        raise DataError(f"series {self.id} has no value at {month}")

    def quarter_values(self, quarter: QuarterIndex) -> np.ndarray:
        return np.array([self.value_at(m) for m in quarter.months()])


def _gap_months(series: MonthlySeries, target: MonthIndex) -> list[MonthIndex]:
    if not len(series):
        raise DataError(f"series {series.id} is empty, cannot complete")
    last = series.last_period
    return [last + h for h in range(1, max(target - last, 0) + 1)]


def complete_smooth(
    series: MonthlySeries,
    target: MonthIndex,
    lam: float = DEFAULT_LAMBDA,
) -> CompletedMonthlySeries:
    """Trend-step completion: forecast h steps ahead is last value + h * g.

    ``g`` is the final first difference of the penalized trend fitted to the
    visible history.  Affine histories are therefore extrapolated exactly.
    The release calendar never leaves a smooth series more than three months
    short of the target, so larger gaps are rejected.
    """
    if series.noise_class != SMOOTH:
        raise DataError(f"series {series.id} is not smooth")
    gap = _gap_months(series, target)
    if len(gap) > 3:
        raise DataError(
            f"series {series.id}: gap of {len(gap)} months to {target} exceeds "
            f"the 3-month limit for trend-step completion"
        )
    if not gap:
        return CompletedMonthlySeries(series, {}, {})
    if len(series) < 4:
        raise DataError(f"series {series.id}: need at least 4 observations")
    dec = hp_trend(series.values, lam)
    g_last = float(dec.trend[-1] - dec.trend[-2])
    y_last = float(series.values[-1])
    forecasts = {m: y_last + (h + 1) * g_last for h, m in enumerate(gap)}
    tags = {m: TREND_STEP for m in gap}
    return CompletedMonthlySeries(series, forecasts, tags)


def moving_average_step(obs_tail, growth_tail, steps: int) -> list[float]:
    """Centered moving-average extrapolation rule.

    The base is the mean of the last three observations, whose center sits
    one month behind the series edge; the drift is the mean of the last
    three trend growths.  The forecast ``h`` months past the edge is
    ``base + (h + 1) * drift``, i.e. offsets 2, 3, 4, ... for successive
    missing months.
    """
    obs_tail = np.asarray(obs_tail, float)
    growth_tail = np.asarray(growth_tail, float)
    if obs_tail.size < 3:
        raise DataError(f"need 3 trailing observations, got {obs_tail.size}")
    if growth_tail.size < 3:
        raise DataError(f"need 3 trailing trend growths, got {growth_tail.size}")
    base = float(obs_tail[-3:].mean())
    drift = float(growth_tail[-3:].mean())
    return [base + (h + 1) * drift for h in range(1, steps + 1)]


def complete_noisy(
    series: MonthlySeries,
    target: MonthIndex,
    lam: float = DEFAULT_LAMBDA,
) -> CompletedMonthlySeries:
    """Moving-average completion for noisy series (see module docstring)."""
    if series.noise_class != NOISY:
        raise DataError(f"series {series.id} is not noisy")
    gap = _gap_months(series, target)
    if not gap:
        return CompletedMonthlySeries(series, {}, {})
    if len(series) < 6:
        raise DataError(f"series {series.id}: need at least 6 observations")
    growths = trend_growth(hp_trend(series.values, lam))
    values = moving_average_step(series.values, growths, len(gap))
    forecasts = dict(zip(gap, values))
    tags = {m: MOVING_AVERAGE for m in gap}
    return CompletedMonthlySeries(series, forecasts, tags)


def complete_series(
    series: MonthlySeries,
    target: MonthIndex,
    lam: float = DEFAULT_LAMBDA,
) -> CompletedMonthlySeries:
    """Dispatch to the completion rule matching the series' noise class."""
    if series.noise_class == NOISY:
        return complete_noisy(series, target, lam)
    return complete_smooth(series, target, lam)


def _yoy_pairs(series: MonthlySeries) -> dict[MonthIndex, float]:
    """Year-over-year percent growth for every month with a valid base."""
    growths: dict[MonthIndex, float] = {}
    for month, value in series.items():
        base_month = month - 12
        if series.has(base_month):
            base = series.value_at(base_month)
            if base != 0.0:
                growths[month] = (value / base - 1.0) * 100.0
    return growths


def proxy_month_forecast(
    target_series: MonthlySeries,
    proxy_series: MonthlySeries,
    month: MonthIndex,
) -> float:
    """Predict one month of `target_series` from a faster-releasing proxy.

    Year-over-year growth of the target is regressed on year-over-year
    growth of the proxy over all overlapping history; the predicted growth
    is applied to the target's value twelve months earlier.
    """
    if not proxy_series.has(month):
        raise DataError(f"proxy {proxy_series.id} has no observation at {month}")
    base_month = month - 12
    if not target_series.has(base_month):
        raise DataError(
            f"series {target_series.id} has no base observation at {base_month}"
        )
    base = target_series.value_at(base_month)
    if base == 0.0:
        raise DataError(
            f"series {target_series.id}: zero value at {base_month}, growth undefined"
        )
    target_growth = _yoy_pairs(target_series)
    proxy_growth = _yoy_pairs(proxy_series)
    overlap = sorted(set(target_growth) & set(proxy_growth))
    if len(overlap) < MIN_PROXY_OVERLAP:
        raise EstimationError(
            f"only {len(overlap)} overlapping growth months between "
            f"{target_series.id} and {proxy_series.id}; need {MIN_PROXY_OVERLAP}"
        )
    proxy_at_month = proxy_growth.get(month)
    if proxy_at_month is None:
        raise DataError(
            f"proxy {proxy_series.id}: year-over-year growth undefined at {month}"
        )
    design = ols.DesignMatrix(
        names=("proxy",),
        data=np.array([[proxy_growth[m]] for m in overlap]),
    )
    fitted = ols.fit(design, np.array([target_growth[m] for m in overlap]))
    predicted_growth = ols.predict(fitted, {"proxy": proxy_at_month})
    return base * (1.0 + predicted_growth / 100.0)


def complete_trade(
    series: MonthlySeries,
    proxy: MonthlySeries,
    target: MonthIndex,
    lam: float = DEFAULT_LAMBDA,
) -> CompletedMonthlySeries:
    """Complete a trade series, exploiting the goods-only proxy lead.

    Months where the proxy is already observed are filled by
    :func:`proxy_month_forecast`; the augmented series is then re-filtered
    and the rest of the gap closed with the moving-average rule.  When the
    proxy has no lead (all days except the post-quarter stage) this reduces
    to plain moving-average completion.
    """
    gap = _gap_months(series, target)
    if not gap:
        return CompletedMonthlySeries(series, {}, {})

    forecasts: dict[MonthIndex, float] = {}
    tags: dict[MonthIndex, str] = {}
    augmented = series
    for month in gap:
        if not proxy.has(month):
            break
        value = proxy_month_forecast(series, proxy, month)
        forecasts[month] = value
        tags[month] = PROXY_REGRESSION
        augmented = MonthlySeries(
            augmented.id,
            augmented.start,
            np.append(augmented.values, value),
            unit=augmented.unit,
            noise_class=augmented.noise_class,
        )

    remaining = [m for m in gap if m not in forecasts]
    if remaining:
        tail = complete_noisy(augmented, target, lam)
        for month in remaining:
            forecasts[month] = tail.forecasts[month]
            tags[month] = MOVING_AVERAGE
    return CompletedMonthlySeries(series, forecasts, tags)


def deflate(nominal: MonthlySeries, deflator: MonthlySeries) -> MonthlySeries:
    """Real series over the months both inputs cover: nominal / index * 100."""
    if not len(nominal) or not len(deflator):
        raise DataError(
            f"cannot deflate {nominal.id} by {deflator.id}: empty series"
        )
    start = max(nominal.start, deflator.start)
    last = min(nominal.last_period, deflator.last_period)
    if last < start:
        raise DataError(
            f"series {nominal.id} and {deflator.id} share no observation months"
        )
    months = [start + k for k in range(last - start + 1)]
    values = np.array(
        [nominal.value_at(m) / deflator.value_at(m) * 100.0 for m in months]
    )
    return MonthlySeries(
        nominal.id, start, values, unit=nominal.unit, noise_class=nominal.noise_class
    )


def complete_all(
    snapshot,
    t: QuarterIndex,
    lam: float = DEFAULT_LAMBDA,
    trade_proxies: Mapping[str, str] = TRADE_PROXIES,
    deflators: Mapping[str, str] = DEFLATORS,
) -> dict[str, CompletedMonthlySeries]:
    """Complete every regressor series in a snapshot through month t:3.

    Proxy sources and price indexes are consumed, not completed; nominal
    series with a configured deflator are converted to real terms first.
    """
    target = t.month(3)
    skip = set(trade_proxies.values()) | set(deflators.values())
    completed: dict[str, CompletedMonthlySeries] = {}
    for sid in sorted(snapshot.monthly):
        if sid in skip:
            continue
        series = snapshot.monthly[sid]
        if sid in deflators:
            deflator = snapshot.monthly.get(deflators[sid])
            if deflator is None:
                raise DataError(f"series {sid} needs deflator {deflators[sid]}")
            series = deflate(series, deflator)
        if sid in trade_proxies and trade_proxies[sid] in snapshot.monthly:
            completed[sid] = complete_trade(
                series, snapshot.monthly[trade_proxies[sid]], target, lam
            )
        else:
            completed[sid] = complete_series(series, target, lam)
    return completed
