"""Quarterly GDP nowcasting from monthly indicators.

The engine completes jagged monthly data with penalized-trend forecasts,
aggregates them to quarterly regressors under a simulated release calendar,
estimates six OLS bridge models, combines the forecasts through error
correction and medians, benchmarks against the Theta method, and evaluates
everything in a rolling pseudo-real-time backtest.
"""

__version__ = "0.1.0"

from .backtest import (
    AccuracyReport,
    BacktestConfig,
    accuracy,
    build_report,
    cumulative_abs_error,
    run_backtest,
    theta_benchmark_records,
)
from .calendar import VALID_DAYS, ReleaseCalendar
from .errors import (
    BacktestError,
    BridgecastError,
    CalendarError,
    DataError,
    EstimationError,
)
from .hpfilter import DEFAULT_LAMBDA, TrendDecomposition, hp_trend, trend_growth
from .models import (
    MODEL_REGRESSORS,
    CellNowcast,
    ForecastLedger,
    ModelSpec,
    NowcastRecord,
    consensus_nowcasts,
    error_correct,
    estimate_and_forecast,
    median_consensus,
)
from .monthly import (
    CompletedMonthlySeries,
    complete_noisy,
    complete_series,
    complete_smooth,
    complete_trade,
    proxy_month_forecast,
)
from .ols import DesignMatrix, RegressionFit, fit, predict, summary_table
from .periods import MonthIndex, QuarterIndex, parse_period, quarter_range
from .quarterly import (
    RegressorSet,
    build_regressors,
    quarterly_mean,
    sum_regressor,
    trade_volume_nowcast,
    yoy_growth,
)
from .series import (
    DEFAULT_SCHEMA,
    GDP_GROWTH_ID,
    Dataset,
    MonthlySeries,
    QuarterlySeries,
    SeriesMeta,
    export_csv,
    ingest_csv,
    load_dataset,
)
from .snapshot import Snapshot, take_snapshot
from .theta import ThetaFit, theta_fit, theta_forecast

__all__ = [name for name in dir() if not name.startswith("_")]
