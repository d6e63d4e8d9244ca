"""Month and quarter indices with closed successor/predecessor arithmetic.

Periods are plain value types: a month is identified by ``(year, month)``,
a quarter by ``(year, quarter)``.  Both are totally ordered and support
``period + n`` / ``period - n`` shifts as well as ``a - b`` distances, so
release-lag arithmetic never touches real calendar dates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterator, Union

_MONTH_RE = re.compile(r"^(\d{4})-(\d{1,2})$")
_QUARTER_RE = re.compile(r"^(\d{4})-?Q([1-4])$", re.IGNORECASE)


@total_ordering
@dataclass(frozen=True)
class MonthIndex:
    """A calendar month, e.g. ``MonthIndex(1996, 1)`` for 1996-01."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> "MonthIndex":
        m = _MONTH_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a monthly period (expected YYYY-MM): {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "MonthIndex":
        year, rem = divmod(ordinal, 12)
        return cls(year, rem + 1)

    @property
    def ordinal(self) -> int:
        return self.year * 12 + self.month - 1

    @property
    def quarter(self) -> "QuarterIndex":
        return QuarterIndex(self.year, (self.month - 1) // 3 + 1)

    @property
    def position_in_quarter(self) -> int:
        """1, 2 or 3: position of this month within its quarter."""
        return (self.month - 1) % 3 + 1

    def __add__(self, months: int) -> "MonthIndex":
        return MonthIndex.from_ordinal(self.ordinal + int(months))

    def __sub__(self, other: Union[int, "MonthIndex"]) -> Union["MonthIndex", int]:
        if isinstance(other, MonthIndex):
            return self.ordinal - other.ordinal
        return MonthIndex.from_ordinal(self.ordinal - int(other))

    def __lt__(self, other: "MonthIndex") -> bool:
        return self.ordinal < other.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


@total_ordering
@dataclass(frozen=True)
class QuarterIndex:
    """A calendar quarter, e.g. ``QuarterIndex(1996, 1)`` for 1996Q1."""

    year: int
    quarter: int

    def __post_init__(self) -> None:
        if not 1 <= self.quarter <= 4:
            raise ValueError(f"quarter must be in 1..4, got {self.quarter}")

    @classmethod
    def parse(cls, text: str) -> "QuarterIndex":
        m = _QUARTER_RE.match(text.strip())
        if not m:
            raise ValueError(f"not a quarterly period (expected YYYY-Qn): {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "QuarterIndex":
        year, rem = divmod(ordinal, 4)
        return cls(year, rem + 1)

    @property
    def ordinal(self) -> int:
        return self.year * 4 + self.quarter - 1

    def month(self, position: int) -> MonthIndex:
        """Month at `position` (1, 2 or 3) within this quarter."""
        if position not in (1, 2, 3):
            raise ValueError(f"month position must be 1, 2 or 3, got {position}")
        return MonthIndex(self.year, 3 * (self.quarter - 1) + position)

    def months(self) -> tuple[MonthIndex, MonthIndex, MonthIndex]:
        return (self.month(1), self.month(2), self.month(3))

    @property
    def first_month(self) -> MonthIndex:
        return self.month(1)

    @property
    def last_month(self) -> MonthIndex:
        return self.month(3)

    def __add__(self, quarters: int) -> "QuarterIndex":
        return QuarterIndex.from_ordinal(self.ordinal + int(quarters))

    def __sub__(self, other: Union[int, "QuarterIndex"]) -> Union["QuarterIndex", int]:
        if isinstance(other, QuarterIndex):
            return self.ordinal - other.ordinal
        return QuarterIndex.from_ordinal(self.ordinal - int(other))

    def __lt__(self, other: "QuarterIndex") -> bool:
        return self.ordinal < other.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}Q{self.quarter}"


def parse_period(text: str) -> Union[MonthIndex, QuarterIndex]:
    """Parse ``YYYY-MM`` into a MonthIndex or ``YYYY-Qn`` into a QuarterIndex."""
    stripped = text.strip()
    if _QUARTER_RE.match(stripped):
        return QuarterIndex.parse(stripped)
    if _MONTH_RE.match(stripped):
        return MonthIndex.parse(stripped)
    raise ValueError(f"unrecognised period {text!r} (expected YYYY-MM or YYYY-Qn)")


def quarter_range(start: QuarterIndex, end: QuarterIndex) -> Iterator[QuarterIndex]:
    """Quarters from `start` through `end`, inclusive."""
    for ordinal in range(start.ordinal, end.ordinal + 1):
        yield QuarterIndex.from_ordinal(ordinal)
