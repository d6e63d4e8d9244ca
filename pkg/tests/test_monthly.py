import numpy as np
import pytest

from bridgecast.errors import DataError, EstimationError
from bridgecast.monthly import (
    MOVING_AVERAGE,
    PROXY_REGRESSION,
    TREND_STEP,
    complete_all,
    complete_noisy,
    complete_series,
    complete_smooth,
    complete_trade,
    deflate,
    moving_average_step,
    proxy_month_forecast,
)
from bridgecast.periods import MonthIndex, QuarterIndex
from bridgecast.snapshot import take_snapshot

from conftest import make_monthly

START = MonthIndex(2000, 1)


def dense_trend(y, lam=14400.0):
    y = np.asarray(y, float)
    n = y.size
    D = np.zeros((n - 2, n))
    for i in range(n - 2):
        D[i, i:i + 3] = (1.0, -2.0, 1.0)
    return np.linalg.solve(np.eye(n) + lam * (D.T @ D), y)


def test_smooth_one_step_adds_final_trend_growth():
    # Affine tail: the trend ends (..., 101.5, 102.5)-ish with unit growth.
    series = make_monthly(95.0 + np.arange(8.0) + 0.0, noise_class="smooth")
    target = series.last_period + 1
    completed = complete_smooth(series, target)
    assert completed.forecasts[target] == pytest.approx(
        series.values[-1] + 1.0, abs=1e-8
    )
    assert completed.method_tags[target] == TREND_STEP


def test_smooth_affine_extrapolates_the_line_exactly():
    series = make_monthly(2.0 + 3.0 * np.arange(12.0))
    last = series.values[-1]
    completed = complete_smooth(series, series.last_period + 2)
    months = sorted(completed.forecasts)
    assert completed.forecasts[months[0]] == pytest.approx(last + 3.0, abs=1e-9)
    assert completed.forecasts[months[1]] == pytest.approx(last + 6.0, abs=1e-9)


def test_smooth_multi_step_uses_final_growth_from_trend():
    rng = np.random.default_rng(5)
    values = 50.0 + np.cumsum(rng.standard_normal(30))
    series = make_monthly(values)
    completed = complete_smooth(series, series.last_period + 2)
    trend = dense_trend(values)
    g = trend[-1] - trend[-2]
    months = sorted(completed.forecasts)
    assert completed.forecasts[months[0]] == pytest.approx(values[-1] + g, rel=1e-9)
    assert completed.forecasts[months[1]] == pytest.approx(values[-1] + 2 * g, rel=1e-9)


def test_smooth_gap_longer_than_three_months_rejected():
    series = make_monthly(np.arange(10.0))
    with pytest.raises(DataError, match="exceeds"):
        complete_smooth(series, series.last_period + 4)


def test_smooth_no_gap_returns_no_forecasts():
    series = make_monthly(np.arange(10.0))
    completed = complete_smooth(series, series.last_period)
    assert completed.forecasts == {}


def test_noisy_one_step_matches_centered_rule():
    # Unit-slope affine: last three observations (100, 101, 102), unit trend
    # growths; base 101 centered one month back, so one step ahead is 103.
    series = make_monthly(95.0 + np.arange(8.0), noise_class="noisy")
    target = series.last_period + 1
    completed = complete_noisy(series, target)
    assert completed.forecasts[target] == pytest.approx(103.0, abs=1e-8)
    assert completed.method_tags[target] == MOVING_AVERAGE


def test_noisy_constant_series_stays_constant():
    series = make_monthly(np.full(12, 7.25), noise_class="noisy")
    completed = complete_noisy(series, series.last_period + 3)
    for value in completed.forecasts.values():
        assert value == pytest.approx(7.25, abs=1e-10)


def test_moving_average_rule_hand_case():
    # base (10+14+9)/3 = 11, drift (0.5+0.4+0.6)/3 = 0.5, offsets 2 then 3.
    values = moving_average_step([10.0, 14.0, 9.0], [0.5, 0.4, 0.6], steps=2)
    assert values == pytest.approx([12.0, 12.5])


def test_moving_average_rule_requires_three_of_each():
    with pytest.raises(DataError, match="observations"):
        moving_average_step([1.0, 2.0], [0.1, 0.1, 0.1], 1)
    with pytest.raises(DataError, match="growths"):
        moving_average_step([1.0, 2.0, 3.0], [0.1, 0.1], 1)


def test_noisy_requires_six_observations():
    series = make_monthly([1, 2, 3, 4, 5], noise_class="noisy")
    with pytest.raises(DataError, match="at least 6"):
        complete_noisy(series, series.last_period + 1)


def test_dispatch_respects_noise_class():
    smooth = make_monthly(np.arange(10.0), noise_class="smooth")
    noisy = make_monthly(np.arange(10.0), noise_class="noisy")
    assert complete_series(smooth, smooth.last_period + 1).method_tags[
        smooth.last_period + 1] == TREND_STEP
    assert complete_series(noisy, noisy.last_period + 1).method_tags[
        noisy.last_period + 1] == MOVING_AVERAGE
    with pytest.raises(DataError, match="not smooth"):
        complete_smooth(noisy, noisy.last_period + 1)
    with pytest.raises(DataError, match="not noisy"):
        complete_noisy(smooth, smooth.last_period + 1)


def _proxy_pair(n=40, alpha=1.0, beta=0.5):
    """Proxy with known affine relation between year-over-year growths."""
    k = np.arange(n, dtype=float)
    proxy = 100.0 * np.exp(0.01 * k) * (1 + 0.03 * np.sin(2 * np.pi * k / 7))
    proxy_growth = np.full(n, np.nan)
    proxy_growth[12:] = (proxy[12:] / proxy[:-12] - 1.0) * 100.0
    target = np.empty(n)
    target[:12] = 200.0 + 2.0 * k[:12]
    for m in range(12, n):
        growth = alpha + beta * proxy_growth[m]
        target[m] = target[m - 12] * (1.0 + growth / 100.0)
    return target, proxy


def test_proxy_regression_recovers_affine_relation_exactly():
    target, proxy = _proxy_pair(alpha=1.0, beta=0.5)
    target_series = make_monthly(target[:-1], series_id="T")
    proxy_series = make_monthly(proxy, series_id="P")
    month = START + (len(target) - 1)
    predicted = proxy_month_forecast(target_series, proxy_series, month)
    assert predicted == pytest.approx(target[-1], rel=1e-10)


def test_proxy_identical_growth_histories_give_identity():
    k = np.arange(40, dtype=float)
    base = 50.0 * np.exp(0.005 * k) * (1 + 0.02 * np.sin(2 * np.pi * k / 9))
    target_series = make_monthly(base[:-1], series_id="T")
    proxy_series = make_monthly(0.8 * base, series_id="P")  # same growths
    month = START + 39
    predicted = proxy_month_forecast(target_series, proxy_series, month)
    expected_growth = (base[39] / base[27] - 1.0) * 100.0
    expected = base[27] * (1.0 + expected_growth / 100.0)
    assert predicted == pytest.approx(expected, rel=1e-9)


def test_proxy_insufficient_overlap_rejected():
    target, proxy = _proxy_pair(n=25)
    target_series = make_monthly(target[:-1], series_id="T")
    proxy_series = make_monthly(proxy, series_id="P")
    with pytest.raises(EstimationError, match="overlap"):
        proxy_month_forecast(target_series, proxy_series, START + 24)


def test_proxy_zero_base_rejected():
    target, proxy = _proxy_pair()
    target = target.copy()
    target[-13] = 0.0  # the base month a year before the forecast
    with pytest.raises(DataError, match="zero"):
        proxy_month_forecast(
            make_monthly(target[:-1], series_id="T"),
            make_monthly(proxy, series_id="P"),
            START + (len(target) - 1),
        )


def test_trade_completion_with_proxy_lead():
    target, proxy = _proxy_pair(n=42)
    target_series = make_monthly(target[:40], series_id="EXGS",
                                 noise_class="noisy")
    proxy_series = make_monthly(proxy[:41], series_id="EXG")
    completed = complete_trade(target_series, proxy_series, START + 41)
    tags = completed.method_tags
    assert tags[START + 40] == PROXY_REGRESSION
    assert tags[START + 41] == MOVING_AVERAGE
    assert completed.observed.last_period == START + 39


def test_trade_completion_without_lead_falls_back_to_moving_average():
    target, proxy = _proxy_pair(n=40)
    target_series = make_monthly(target[:36], series_id="EXGS",
                                 noise_class="noisy")
    proxy_series = make_monthly(proxy[:36], series_id="EXG")  # no lead
    completed = complete_trade(target_series, proxy_series, START + 38)
    assert set(completed.method_tags.values()) == {MOVING_AVERAGE}
    assert len(completed.forecasts) == 3


def test_trade_perfect_proxy_reproduces_true_value():
    k = np.arange(44, dtype=float)
    base = 50.0 * np.exp(0.004 * k) * (1 + 0.02 * np.sin(2 * np.pi * k / 11))
    target_series = make_monthly(base[:42], series_id="EXGS",
                                 noise_class="noisy")
    proxy_series = make_monthly(base.copy(), series_id="EXG")  # proxy == target
    completed = complete_trade(target_series, proxy_series, START + 43)
    assert completed.forecasts[START + 42] == pytest.approx(base[42], rel=1e-9)
    assert completed.method_tags[START + 43] == MOVING_AVERAGE


def test_forecasts_never_overwrite_observations():
    series = make_monthly(np.arange(10.0))
    completed = complete_smooth(series, series.last_period + 1)
    for month in completed.forecasts:
        assert not series.has(month)
    assert completed.value_at(series.last_period) == series.values[-1]


def test_deflation_cancels_equal_growth():
    # Nominal and price index move together: real growth is zero.
    k = np.arange(24, dtype=float)
    nominal = make_monthly(100.0 * 1.01**k, series_id="ATM", noise_class="noisy")
    price = make_monthly(100.0 * 1.01**k, series_id="CPI")
    real = deflate(nominal, price)
    assert np.allclose(real.values, 100.0)
    assert real.noise_class == "noisy"


def test_deflation_requires_overlap():
    nominal = make_monthly([1, 2, 3, 4], series_id="ATM",
                           start=MonthIndex(2000, 1))
    price = make_monthly([1, 2, 3, 4], series_id="CPI",
                         start=MonthIndex(2010, 1))
    with pytest.raises(DataError, match="no observation months"):
        deflate(nominal, price)


def test_complete_all_day60_method_mixture(fixture_dataset, default_calendar):
    t = QuarterIndex(2010, 3)
    snap = take_snapshot(fixture_dataset, default_calendar, t, 60)
    completed = complete_all(snap, t)

    assert set(completed) == {"ESI", "ICE", "IPI", "CEM", "CAR", "ATM",
                              "EXGS", "IMGS", "OIL", "CEPR"}
    months = t.months()

    def tags(sid):
        return {str(m): tag for m, tag in completed[sid].method_tags.items()}

    for sid in ("ESI", "ICE", "OIL", "CEPR"):
        assert tags(sid) == {str(months[2]): TREND_STEP}, sid
    for sid in ("IPI", "CEM", "CAR", "ATM"):
        assert tags(sid) == {str(months[1]): MOVING_AVERAGE,
                             str(months[2]): MOVING_AVERAGE}, sid
    for sid in ("EXGS", "IMGS"):
        assert tags(sid) == {str(m): MOVING_AVERAGE for m in months}, sid
    # every completed series reaches the last month of the quarter
    for sid, series in completed.items():
        assert series.has(months[2]), sid


def test_complete_all_day100_uses_proxy_for_trade(fixture_dataset,
                                                  default_calendar):
    t = QuarterIndex(2010, 3)
    snap = take_snapshot(fixture_dataset, default_calendar, t, 100)
    completed = complete_all(snap, t)
    months = t.months()
    for sid in ("EXGS", "IMGS"):
        assert completed[sid].method_tags[months[1]] == PROXY_REGRESSION, sid
        assert completed[sid].method_tags[months[2]] == MOVING_AVERAGE, sid
    # smooth and noisy tags never cross over
    for sid, series in completed.items():
        noise = snap.monthly[sid].noise_class
        for tag in series.method_tags.values():
            if noise == "smooth":
                assert tag == TREND_STEP
            else:
                assert tag in (MOVING_AVERAGE, PROXY_REGRESSION)
