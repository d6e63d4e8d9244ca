"""Point-in-time views of the dataset under a release calendar.

A snapshot is the whole dataset truncated to what is visible at day ``d`` of
quarter ``t``.  It is a deterministic function of (dataset, calendar, t, d)
and the only object the forecasting pipeline is allowed to read from, which
is what keeps the backtest free of look-ahead leakage.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .calendar import VALID_DAYS, ReleaseCalendar
from .errors import CalendarError
from .periods import QuarterIndex
from .series import Dataset, MonthlySeries, QuarterlySeries


@dataclass(frozen=True, eq=False)
class Snapshot:
    """Dataset truncated to availability at (`quarter`, `day`)."""

    quarter: QuarterIndex
    day: int
    monthly: Mapping[str, MonthlySeries]
    quarterly: Mapping[str, QuarterlySeries]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Snapshot)
            and self.quarter == other.quarter
            and self.day == other.day
            and set(self.monthly) == set(other.monthly)
            and set(self.quarterly) == set(other.quarterly)
            and all(self.monthly[k] == other.monthly[k] for k in self.monthly)
            and all(self.quarterly[k] == other.quarterly[k] for k in self.quarterly)
        )

    def __hash__(self):
        return hash((self.quarter, self.day))


def take_snapshot(
    dataset: Dataset,
    calendar: ReleaseCalendar,
    quarter: QuarterIndex,
    day: int,
) -> Snapshot:
    """Truncate every series to its calendar rule at (`quarter`, `day`).

    The calendar must have a rule for every series in the dataset; series
    whose data end before the rule allows are simply passed through.
    """
    if day not in VALID_DAYS:
        raise CalendarError(f"day must be one of {VALID_DAYS}, got {day}")
    monthly = {}
    for sid, series in dataset.monthly.items():
        cutoff = calendar.last_visible_month(sid, quarter, day)
        monthly[sid] = series.through(cutoff)
    quarterly = {}
    for sid, series in dataset.quarterly.items():
        cutoff = calendar.last_visible_quarter(sid, quarter, day)
        quarterly[sid] = series.through(cutoff)
    return Snapshot(quarter=quarter, day=day, monthly=monthly, quarterly=quarterly)
