import pytest
from hypothesis import given
from hypothesis import strategies as st

from bridgecast.periods import MonthIndex, QuarterIndex, parse_period, quarter_range


def test_month_parse_and_str_roundtrip():
    m = MonthIndex.parse("1996-01")
    assert m == MonthIndex(1996, 1)
    assert str(m) == "1996-01"


def test_quarter_parse_accepts_both_forms():
    assert QuarterIndex.parse("1996Q1") == QuarterIndex(1996, 1)
    assert QuarterIndex.parse("1996-Q3") == QuarterIndex(1996, 3)
    assert str(QuarterIndex(2002, 4)) == "2002Q4"


def test_parse_period_dispatches_on_format():
    assert parse_period("2001-12") == MonthIndex(2001, 12)
    assert parse_period("2001-Q4") == QuarterIndex(2001, 4)
    with pytest.raises(ValueError):
        parse_period("2001/12")


def test_month_arithmetic_is_closed():
    m = MonthIndex(1999, 11)
    assert m + 1 == MonthIndex(1999, 12)
    assert m + 2 == MonthIndex(2000, 1)
    assert m - 11 == MonthIndex(1998, 12)
    assert (m + 14) - m == 14


def test_quarter_arithmetic_and_year_lag():
    q = QuarterIndex(2002, 1)
    assert q - 4 == QuarterIndex(2001, 1)  # same quarter, previous year
    assert q + 3 == QuarterIndex(2002, 4)
    assert q + 4 == QuarterIndex(2003, 1)
    assert (q + 9) - q == 9


def test_month_quarter_mapping():
    assert MonthIndex(2002, 5).quarter == QuarterIndex(2002, 2)
    assert MonthIndex(2002, 5).position_in_quarter == 2
    assert QuarterIndex(2002, 2).months() == (
        MonthIndex(2002, 4), MonthIndex(2002, 5), MonthIndex(2002, 6)
    )
    assert QuarterIndex(2002, 2).month(3) == MonthIndex(2002, 6)


def test_ordering_is_total():
    assert MonthIndex(2001, 12) < MonthIndex(2002, 1)
    assert QuarterIndex(2001, 4) < QuarterIndex(2002, 1)
    assert QuarterIndex(2002, 1) <= QuarterIndex(2002, 1)


def test_invalid_components_rejected():
    with pytest.raises(ValueError):
        MonthIndex(2000, 13)
    with pytest.raises(ValueError):
        QuarterIndex(2000, 0)
    with pytest.raises(ValueError):
        QuarterIndex(2000, 1).month(4)


def test_quarter_range_inclusive():
    quarters = list(quarter_range(QuarterIndex(2001, 3), QuarterIndex(2002, 2)))
    assert quarters == [
        QuarterIndex(2001, 3), QuarterIndex(2001, 4),
        QuarterIndex(2002, 1), QuarterIndex(2002, 2),
    ]


@given(st.integers(min_value=0, max_value=10_000 * 12))
def test_month_ordinal_roundtrip(ordinal):
    assert MonthIndex.from_ordinal(ordinal).ordinal == ordinal


@given(st.integers(min_value=1900, max_value=2100), st.integers(1, 12),
       st.integers(min_value=-600, max_value=600))
def test_month_shift_inverts(year, month, shift):
    m = MonthIndex(year, month)
    assert (m + shift) - shift == m
    assert (m + shift) - m == shift
