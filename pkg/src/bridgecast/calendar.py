"""Release calendar: which observations are visible at each day of a quarter.

The calendar maps (series, day-of-quarter) to the last available period.
Days run over the checkpoints {0, 30, 60, 90, 100}; "100" labels day 10 of
the following quarter, treated as a fifth stage of the current one.

Monthly rules are ``(quarter_offset, month_position)`` pairs: at day ``d`` of
quarter ``t`` the last visible observation of the series is month
``position`` of quarter ``t + offset``.  Quarterly rules are single offsets:
national-accounts aggregates for ``t-1`` only become visible at day 60 of
``t``.

The default rule table ships with the package; any other publication
schedule can be supplied as a YAML file with the same structure, e.g.::

    monthly:
      ESI: {0: [-1, 3], 30: [0, 1], 60: [0, 2], 90: [0, 3], 100: [0, 3]}
    quarterly:
      GDP_QOQ: {0: -2, 30: -2, 60: -1, 90: -1, 100: -1}
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import yaml

from .errors import CalendarError
from .periods import MonthIndex, QuarterIndex

VALID_DAYS = (0, 30, 60, 90, 100)

MonthRule = dict[int, tuple[int, int]]
QuarterRule = dict[int, int]

_DEFAULT_MONTHLY: dict[str, MonthRule] = {
    "ESI":  {0: (-1, 3), 30: (0, 1), 60: (0, 2), 90: (0, 3), 100: (0, 3)},
    "ICE":  {0: (-1, 3), 30: (0, 1), 60: (0, 2), 90: (0, 3), 100: (0, 3)},
    "IPI":  {0: (-1, 2), 30: (-1, 3), 60: (0, 1), 90: (0, 2), 100: (0, 2)},
    "CEM":  {0: (-1, 2), 30: (-1, 3), 60: (0, 1), 90: (0, 2), 100: (0, 3)},
    "CAR":  {0: (-1, 2), 30: (-1, 3), 60: (0, 1), 90: (0, 2), 100: (0, 3)},
    "ATM":  {0: (-1, 2), 30: (-1, 3), 60: (0, 1), 90: (0, 2), 100: (0, 2)},
    "EXGS": {0: (-1, 1), 30: (-1, 2), 60: (-1, 3), 90: (0, 1), 100: (0, 1)},
    "IMGS": {0: (-1, 1), 30: (-1, 2), 60: (-1, 3), 90: (0, 1), 100: (0, 1)},
    "EXG":  {0: (-1, 1), 30: (-1, 2), 60: (-1, 3), 90: (0, 1), 100: (0, 2)},
    "IMG":  {0: (-1, 1), 30: (-1, 2), 60: (-1, 3), 90: (0, 1), 100: (0, 2)},
    "CPI":  {0: (-1, 2), 30: (-1, 3), 60: (0, 1), 90: (0, 2), 100: (0, 3)},
    "OIL":  {0: (-1, 3), 30: (0, 1), 60: (0, 2), 90: (0, 3), 100: (0, 3)},
    "CEPR": {0: (-1, 3), 30: (0, 1), 60: (0, 2), 90: (0, 3), 100: (0, 3)},
}

# National quarterly accounts for t-1 are published 60 days into quarter t.
_NQA_RULE: QuarterRule = {0: -2, 30: -2, 60: -1, 90: -1, 100: -1}

_DEFAULT_QUARTERLY: dict[str, QuarterRule] = {
    sid: dict(_NQA_RULE)
    for sid in ("GDP", "GDP_QOQ", "EXP", "IMP", "DEF_EXP", "DEF_IMP")
}


def _month_ordinal_shift(offset: int, position: int) -> int:
    """Months between t:3-anchored zero and month `position` of quarter t+offset."""
    return 3 * offset + position


@dataclass(frozen=True)
class ReleaseCalendar:
    """Availability rules per series id.

    ``monthly_rules[sid][day] = (quarter_offset, month_position)``
    ``quarterly_rules[sid][day] = quarter_offset``
    """

    monthly_rules: dict[str, MonthRule] = field(default_factory=dict)
    quarterly_rules: dict[str, QuarterRule] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._validate()

    @classmethod
    def default(cls) -> "ReleaseCalendar":
        return cls(
            monthly_rules={sid: dict(rule) for sid, rule in _DEFAULT_MONTHLY.items()},
            quarterly_rules={sid: dict(rule) for sid, rule in _DEFAULT_QUARTERLY.items()},
        )

    def _validate(self) -> None:
        for sid, rule in self.monthly_rules.items():
            if set(rule) != set(VALID_DAYS):
                raise CalendarError(
                    f"calendar rule for {sid} must cover days {VALID_DAYS}, "
                    f"got {sorted(rule)}"
                )
            prev = None
            for day in VALID_DAYS:
                offset, position = rule[day]
                if position not in (1, 2, 3):
                    raise CalendarError(
                        f"calendar rule for {sid} at day {day}: month position "
                        f"must be 1..3, got {position}"
                    )
                shift = _month_ordinal_shift(offset, position)
                if prev is not None and shift < prev:
                    raise CalendarError(
                        f"calendar rule for {sid} is not monotone: availability "
                        f"regresses at day {day}"
                    )
                prev = shift
        for sid, rule in self.quarterly_rules.items():
            if set(rule) != set(VALID_DAYS):
                raise CalendarError(
                    f"calendar rule for {sid} must cover days {VALID_DAYS}, "
                    f"got {sorted(rule)}"
                )
            offsets = [rule[day] for day in VALID_DAYS]
            if any(b < a for a, b in zip(offsets, offsets[1:])):
                raise CalendarError(f"calendar rule for {sid} is not monotone in day")

    def covers(self, series_id: str) -> bool:
        return series_id in self.monthly_rules or series_id in self.quarterly_rules

    def last_visible_month(self, series_id: str, t: QuarterIndex, day: int) -> MonthIndex:
        """Last monthly observation of `series_id` visible at day `day` of `t`."""
        if day not in VALID_DAYS:
            raise CalendarError(f"day must be one of {VALID_DAYS}, got {day}")
        rule = self.monthly_rules.get(series_id)
        if rule is None:
            raise CalendarError(f"no calendar rule for monthly series {series_id}")
        offset, position = rule[day]
        return (t + offset).month(position)

    def last_visible_quarter(self, series_id: str, t: QuarterIndex, day: int) -> QuarterIndex:
        """Last quarterly observation of `series_id` visible at day `day` of `t`."""
        if day not in VALID_DAYS:
            raise CalendarError(f"day must be one of {VALID_DAYS}, got {day}")
        rule = self.quarterly_rules.get(series_id)
        if rule is None:
            raise CalendarError(f"no calendar rule for quarterly series {series_id}")
        return t + rule[day]

    def to_mapping(self) -> dict:
        return {
            "monthly": {
                sid: {day: list(rule[day]) for day in VALID_DAYS}
                for sid, rule in sorted(self.monthly_rules.items())
            },
            "quarterly": {
                sid: {day: rule[day] for day in VALID_DAYS}
                for sid, rule in sorted(self.quarterly_rules.items())
            },
        }

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "ReleaseCalendar":
        try:
            monthly = {
                str(sid): {int(day): (int(pair[0]), int(pair[1]))
                           for day, pair in rule.items()}
                for sid, rule in (mapping.get("monthly") or {}).items()
            }
            quarterly = {
                str(sid): {int(day): int(offset) for day, offset in rule.items()}
                for sid, rule in (mapping.get("quarterly") or {}).items()
            }
        except (TypeError, ValueError, IndexError) as exc:
            raise CalendarError(f"malformed calendar mapping: {exc}") from None
        return cls(monthly_rules=monthly, quarterly_rules=quarterly)

    @classmethod
    def from_yaml(cls, path) -> "ReleaseCalendar":
        path = Path(path)
        with path.open() as handle:
            mapping = yaml.safe_load(handle)
        if not isinstance(mapping, Mapping):
            raise CalendarError(f"{path}: calendar file must be a mapping")
        return cls.from_mapping(mapping)

    def to_yaml(self, path) -> None:
        path = Path(path)
        with path.open("w") as handle:
            yaml.safe_dump(self.to_mapping(), handle, sort_keys=True,
                           default_flow_style=None, width=100)
