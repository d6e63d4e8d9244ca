from pathlib import Path

import numpy as np
import pytest

from bridgecast.backtest import BacktestConfig, run_backtest
from bridgecast.calendar import ReleaseCalendar
from bridgecast.periods import MonthIndex, QuarterIndex
from bridgecast.series import MonthlySeries, QuarterlySeries, load_dataset
from bridgecast.synthetic import build_fixture, build_selfconsistent_fixture

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "golden"


def make_monthly(values, series_id="X", start=MonthIndex(2000, 1),
                 noise_class="smooth", unit="index"):
    return MonthlySeries(series_id, start, np.asarray(values, float),
                         unit=unit, noise_class=noise_class)


def make_quarterly(values, series_id="Q", start=QuarterIndex(2000, 1),
                   unit="index"):
    return QuarterlySeries(series_id, start, np.asarray(values, float), unit=unit)


@pytest.fixture(scope="session")
def default_calendar():
    return ReleaseCalendar.default()


@pytest.fixture(scope="session")
def fixture_dataset():
    """The shipped noisy synthetic dataset, loaded through the CSV path."""
    return load_dataset([DATA_DIR / "monthly.csv", DATA_DIR / "quarterly.csv"])


@pytest.fixture(scope="session")
def exact_dataset():
    """Zero-noise dataset with exact post-quarter forecasts."""
    return build_selfconsistent_fixture()


@pytest.fixture(scope="session")
def fixture_backtest(fixture_dataset):
    """One full default backtest on the shipped fixture, shared by tests."""
    config = BacktestConfig()
    ledger, report = run_backtest(config, fixture_dataset)
    return config, ledger, report


@pytest.fixture(scope="session")
def generated_matches_shipped(fixture_dataset):
    """Guard: the committed CSVs are exactly what the generator produces."""
    regenerated = build_fixture()
    for sid, series in regenerated.monthly.items():
        assert fixture_dataset.monthly[sid] == series
    for sid, series in regenerated.quarterly.items():
        assert fixture_dataset.quarterly[sid] == series
    return True
