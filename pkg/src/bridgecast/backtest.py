"""Rolling out-of-sample evaluation.

For every quarter in the evaluation range and every configured day stage,
the engine builds the point-in-time snapshot, completes the monthly series,
estimates the six bridge models, applies error correction and the median
consensus, and fits the Theta benchmark at the horizon implied by the data
actually released at that day (two steps before the previous quarter's
accounts arrive, one step after).  Accuracy is measured against the
final-vintage growth rates with mean squared, root mean squared and mean
absolute errors plus cumulative absolute error paths.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .calendar import VALID_DAYS, ReleaseCalendar
from .errors import BacktestError, DataError
from .hpfilter import DEFAULT_LAMBDA
from .models import (
    MEDIAN_MODEL,
    SIMPLE,
    ForecastLedger,
    NowcastRecord,
    consensus_nowcasts,
    error_correct,
)
from .periods import QuarterIndex, quarter_range
from .series import GDP_GROWTH_ID, Dataset
from .snapshot import take_snapshot
from .theta import DEFAULT_GAMMA, theta_fit, theta_forecast

log = logging.getLogger(__name__)

THETA_GROWTH = "growth"
THETA_LEVEL = "level"


@dataclass(frozen=True)
class BacktestConfig:
    """Evaluation window, day stages and estimation options."""

    eval_start: QuarterIndex = QuarterIndex(2002, 1)
    eval_end: QuarterIndex = QuarterIndex(2019, 4)
    sample_start: QuarterIndex = QuarterIndex(1996, 1)
    days: tuple[int, ...] = VALID_DAYS
    subsample_end: QuarterIndex | None = QuarterIndex(2015, 4)
    estimation_window: int | None = None  # None = expanding sample
    hp_lambda: float = DEFAULT_LAMBDA
    theta_gamma: float = DEFAULT_GAMMA
    theta_input: str = THETA_GROWTH
    theta_error_correction: bool = False
    audit: bool = False

    def __post_init__(self) -> None:
        if not self.days:
            raise ValueError("at least one day stage required")
        bad = [d for d in self.days if d not in VALID_DAYS]
        if bad:
            raise ValueError(f"invalid days {bad}; allowed: {list(VALID_DAYS)}")
        object.__setattr__(self, "days", tuple(sorted(set(self.days))))
        if not self.sample_start < self.eval_start:
            raise ValueError("sample_start must precede eval_start")
        if not self.eval_start <= self.eval_end:
            raise ValueError("eval_start must not exceed eval_end")
        if self.theta_input not in (THETA_GROWTH, THETA_LEVEL):
            raise ValueError(
                f"theta_input must be '{THETA_GROWTH}' or '{THETA_LEVEL}'"
            )
        if self.estimation_window is not None and self.estimation_window < 8:
            raise ValueError("estimation_window must be at least 8 quarters")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "BacktestConfig":
        kwargs = {}
        for key in ("eval_start", "eval_end", "sample_start", "subsample_end"):
            if mapping.get(key) is not None:
                kwargs[key] = QuarterIndex.parse(str(mapping[key]))
            elif key in mapping:  # explicit null
                kwargs[key] = None
        if "days" in mapping and mapping["days"] is not None:
            kwargs["days"] = tuple(int(d) for d in mapping["days"])
        for key in ("estimation_window",):
            if key in mapping and mapping[key] is not None:
                kwargs[key] = int(mapping[key])
        for key in ("hp_lambda", "theta_gamma"):
            if key in mapping and mapping[key] is not None:
                kwargs[key] = float(mapping[key])
        if mapping.get("theta_input") is not None:
            kwargs["theta_input"] = str(mapping["theta_input"])
        for key in ("theta_error_correction", "audit"):
            if key in mapping and mapping[key] is not None:
                kwargs[key] = bool(mapping[key])
        return cls(**kwargs)

    def to_mapping(self) -> dict:
        return {
            "eval_start": str(self.eval_start),
            "eval_end": str(self.eval_end),
            "sample_start": str(self.sample_start),
            "days": list(self.days),
            "subsample_end": (
                str(self.subsample_end) if self.subsample_end else None
            ),
            "estimation_window": self.estimation_window,
            "hp_lambda": self.hp_lambda,
            "theta_gamma": self.theta_gamma,
            "theta_input": self.theta_input,
            "theta_error_correction": self.theta_error_correction,
            "audit": self.audit,
        }


def accuracy(errors) -> tuple[float, float, float]:
    """(MSE, RMSE, MAE) of a vector of forecast errors."""
    errors = np.asarray(errors, dtype=float)
    if errors.size == 0:
        raise ValueError("cannot compute accuracy of an empty error vector")
    mse = float(np.mean(errors**2))
    return mse, float(np.sqrt(mse)), float(np.mean(np.abs(errors)))


def cumulative_abs_error(errors) -> np.ndarray:
    """Running sum of absolute errors, in the given (chronological) order."""
    return np.cumsum(np.abs(np.asarray(errors, dtype=float)))


@dataclass(frozen=True)
class MetricCell:
    n: int
    mse: float
    rmse: float
    mae: float


def estimator_key(record: NowcastRecord) -> str:
    """Report label for a ledger record, e.g. model3_corrected, median_simple."""
    if record.model.startswith("theta"):
        return record.model if record.variant == SIMPLE else (
            f"{record.model}_{record.variant}"
        )
    if record.model == MEDIAN_MODEL:
        return f"median_{record.variant}"
    return f"model{record.model}_{record.variant}"


@dataclass
class AccuracyReport:
    """Per-(day, estimator) accuracy over an evaluation range.

    Carries the underlying per-quarter errors, so any sub-range can be
    re-aggregated without re-running the backtest.
    """

    eval_start: QuarterIndex
    eval_end: QuarterIndex
    errors: dict[tuple[int, str], tuple[tuple[QuarterIndex, float], ...]] = field(
        default_factory=dict
    )

    @property
    def cells(self) -> dict[tuple[int, str], MetricCell]:
        out = {}
        for key, pairs in self.errors.items():
            mse, rmse, mae = accuracy([e for _, e in pairs])
            out[key] = MetricCell(n=len(pairs), mse=mse, rmse=rmse, mae=mae)
        return out

    @property
    def cumulative(self) -> dict[tuple[int, str], tuple[tuple[QuarterIndex, float], ...]]:
        out = {}
        for key, pairs in self.errors.items():
            running = cumulative_abs_error([e for _, e in pairs])
            out[key] = tuple((q, float(c)) for (q, _), c in zip(pairs, running))
        return out

    def subrange(self, start: QuarterIndex, end: QuarterIndex) -> "AccuracyReport":
        filtered = {
            key: tuple((q, e) for q, e in pairs if start <= q <= end)
            for key, pairs in self.errors.items()
        }
        return AccuracyReport(
            eval_start=start, eval_end=end,
            errors={k: v for k, v in filtered.items() if v},
        )


def build_report(
    ledger: ForecastLedger,
    truth: Mapping[QuarterIndex, float],
    eval_start: QuarterIndex,
    eval_end: QuarterIndex,
) -> AccuracyReport:
    """Aggregate ledger records against realized growth (error = actual - forecast)."""
    grouped: dict[tuple[int, str], list[tuple[QuarterIndex, float]]] = {}
    for record in ledger.records():
        if record.quarter < eval_start or record.quarter > eval_end:
            continue
        actual = truth.get(record.quarter)
        if actual is None:
            raise DataError(f"no realized growth for {record.quarter}")
        key = (record.day, estimator_key(record))
        grouped.setdefault(key, []).append((record.quarter, actual - record.value))
    return AccuracyReport(
        eval_start=eval_start, eval_end=eval_end,
        errors={k: tuple(v) for k, v in grouped.items()},
    )


def _audit_snapshot(dataset, calendar, snapshot) -> None:
    rebuilt = take_snapshot(dataset, calendar, snapshot.quarter, snapshot.day)
    if rebuilt != snapshot:
        raise BacktestError(
            f"snapshot audit failed at {snapshot.quarter} day {snapshot.day}"
        )
    for sid, series in snapshot.monthly.items():
        if len(series):
            cutoff = calendar.last_visible_month(sid, snapshot.quarter, snapshot.day)
            if series.last_period > cutoff:
                raise BacktestError(
                    f"snapshot leaks {sid} past {cutoff} at "
                    f"{snapshot.quarter} day {snapshot.day}"
                )
    for sid, series in snapshot.quarterly.items():
        if len(series):
            cutoff = calendar.last_visible_quarter(sid, snapshot.quarter, snapshot.day)
            if series.last_period > cutoff:
                raise BacktestError(
                    f"snapshot leaks {sid} past {cutoff} at "
                    f"{snapshot.quarter} day {snapshot.day}"
                )


def theta_benchmark_records(
    snapshot,
    t: QuarterIndex,
    ledger: ForecastLedger,
    sample_start: QuarterIndex | None = None,
    gamma: float = DEFAULT_GAMMA,
    input_mode: str = THETA_GROWTH,
    error_correction: bool = False,
) -> list[NowcastRecord]:
    """Theta forecast for quarter `t` at the horizon the snapshot implies.

    With the previous quarter's accounts released the target is one step
    ahead; before that release it is two.  By default the method runs on
    the growth series itself; `input_mode='level'` fits GDP levels instead
    and converts the forecast back to a growth rate.
    """
    gdp = snapshot.quarterly.get(GDP_GROWTH_ID)
    if gdp is None or not len(gdp):
        raise DataError(f"no released {GDP_GROWTH_ID} data for the Theta benchmark")
    horizon = t - gdp.last_period
    if horizon not in (1, 2):
        raise DataError(
            f"Theta horizon {horizon} unsupported (sample ends {gdp.last_period})"
        )

    if input_mode == THETA_LEVEL:
        levels = snapshot.quarterly.get("GDP")
        if levels is None or not len(levels):
            raise DataError("theta input mode 'level' requires a GDP level series")
        lstart = levels.first_period if sample_start is None else max(
            sample_start, levels.first_period
        )
        lvalues = [levels.value_at(q)
                   for q in quarter_range(lstart, levels.last_period)]
        fit = theta_fit(lvalues, gamma)
        ahead = theta_forecast(fit, horizon)
        prev = lvalues[-1] if horizon == 1 else theta_forecast(fit, horizon - 1)
        value = (ahead / prev - 1.0) * 100.0
    elif input_mode == THETA_GROWTH:
        start = gdp.first_period if sample_start is None else max(
            sample_start, gdp.first_period
        )
        visible = [gdp.value_at(q) for q in quarter_range(start, gdp.last_period)]
        fit = theta_fit(visible, gamma)
        value = theta_forecast(fit, horizon)
    else:
        raise ValueError(f"unknown theta input mode {input_mode!r}")

    model = f"theta_{horizon}p"
    records = [NowcastRecord(t, snapshot.day, model, SIMPLE, value)]
    if error_correction:
        correction = error_correct(ledger, records[0])
        if correction is not None:
            records.append(correction)
    return records


def run_backtest(
    config: BacktestConfig,
    dataset: Dataset,
    calendar: ReleaseCalendar | None = None,
    ledger: ForecastLedger | None = None,
) -> tuple[ForecastLedger, AccuracyReport]:
    """Run the rolling exercise and score it against final-vintage growth.

    Quarters are processed chronologically because the error-correction
    step feeds on earlier cells; within a quarter all configured day stages
    are evaluated.  Re-running over an existing ledger appends nothing new.
    """
    if calendar is None:
        calendar = ReleaseCalendar.default()
    if ledger is None:
        ledger = ForecastLedger()
    truth_series = dataset.quarterly.get(GDP_GROWTH_ID)
    if truth_series is None:
        raise DataError(f"dataset has no {GDP_GROWTH_ID} series")
    truth = dict(truth_series.items())

    for t in quarter_range(config.eval_start, config.eval_end):
        for day in config.days:
            try:
                snapshot = take_snapshot(dataset, calendar, t, day)
                if config.audit:
                    _audit_snapshot(dataset, calendar, snapshot)
                ledger.update_realized(snapshot.quarterly[GDP_GROWTH_ID])
                cell = consensus_nowcasts(
                    snapshot, t, day, ledger,
                    lam=config.hp_lambda,
                    sample_start=config.sample_start,
                    window=config.estimation_window,
                )
                records = cell.records()
                records.extend(theta_benchmark_records(
                    snapshot, t, ledger,
                    sample_start=config.sample_start,
                    gamma=config.theta_gamma,
                    input_mode=config.theta_input,
                    error_correction=config.theta_error_correction,
                ))
            except Exception as exc:
                raise BacktestError(f"backtest cell ({t}, day {day}): {exc}") from exc
            for record in records:
                ledger.add(record)
        log.debug("backtest quarter %s done", t)

    report = build_report(ledger, truth, config.eval_start, config.eval_end)
    return ledger, report
