from pathlib import Path

import pytest

from bridgecast.calendar import VALID_DAYS, ReleaseCalendar
from bridgecast.errors import CalendarError
from bridgecast.periods import QuarterIndex

CONFIGS = Path(__file__).parent.parent / "configs"

# Independent transcription of the default publication schedule, used as the
# audit oracle for every (series, day) cell.  Cells name the last visible
# month as (quarter offset, month position) relative to the current quarter.
EXPECTED_MONTHLY = {
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

QUARTERLY_IDS = ("GDP", "GDP_QOQ", "EXP", "IMP", "DEF_EXP", "DEF_IMP")


def test_default_monthly_rules_match_schedule(default_calendar):
    t = QuarterIndex(2010, 3)
    for sid, rule in EXPECTED_MONTHLY.items():
        for day, (offset, position) in rule.items():
            expected = (t + offset).month(position)
            got = default_calendar.last_visible_month(sid, t, day)
            assert got == expected, f"{sid} at day {day}: {got} != {expected}"


def test_default_quarterly_rules_release_at_day_60(default_calendar):
    t = QuarterIndex(2010, 3)
    for sid in QUARTERLY_IDS:
        for day in (0, 30):
            assert default_calendar.last_visible_quarter(sid, t, day) == t - 2
        for day in (60, 90, 100):
            assert default_calendar.last_visible_quarter(sid, t, day) == t - 1


def test_availability_is_monotone_within_quarter(default_calendar):
    t = QuarterIndex(2005, 2)
    for sid in EXPECTED_MONTHLY:
        months = [default_calendar.last_visible_month(sid, t, d) for d in VALID_DAYS]
        assert all(a <= b for a, b in zip(months, months[1:])), sid


def test_availability_is_monotone_across_quarters(default_calendar):
    # Same day stage, later quarter: visibility never regresses.
    for sid in EXPECTED_MONTHLY:
        for day in VALID_DAYS:
            t = QuarterIndex(2005, 4)
            assert (default_calendar.last_visible_month(sid, t, day)
                    < default_calendar.last_visible_month(sid, t + 1, day))


def test_unknown_series_raises(default_calendar):
    with pytest.raises(CalendarError, match="NOPE"):
        default_calendar.last_visible_month("NOPE", QuarterIndex(2010, 1), 0)
    with pytest.raises(CalendarError, match="NOPE"):
        default_calendar.last_visible_quarter("NOPE", QuarterIndex(2010, 1), 0)


def test_invalid_day_rejected(default_calendar):
    with pytest.raises(CalendarError, match="45"):
        default_calendar.last_visible_month("ESI", QuarterIndex(2010, 1), 45)


def test_rules_must_cover_all_days():
    with pytest.raises(CalendarError, match="cover days"):
        ReleaseCalendar(monthly_rules={"X": {0: (0, 1)}})


def test_non_monotone_rule_rejected():
    rule = {0: (0, 2), 30: (0, 1), 60: (0, 2), 90: (0, 3), 100: (0, 3)}
    with pytest.raises(CalendarError, match="monotone"):
        ReleaseCalendar(monthly_rules={"X": rule})


def test_yaml_roundtrip(tmp_path, default_calendar):
    path = tmp_path / "calendar.yaml"
    default_calendar.to_yaml(path)
    again = ReleaseCalendar.from_yaml(path)
    assert again.monthly_rules == default_calendar.monthly_rules
    assert again.quarterly_rules == default_calendar.quarterly_rules


def test_shipped_calendar_file_equals_default(default_calendar):
    shipped = ReleaseCalendar.from_yaml(CONFIGS / "calendar_default.yaml")
    assert shipped.monthly_rules == default_calendar.monthly_rules
    assert shipped.quarterly_rules == default_calendar.quarterly_rules
