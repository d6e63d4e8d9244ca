"""Quarterly regressor construction from completed monthly series.

Monthly values (observed plus completions) are averaged per quarter, turned
into year-over-year percent growth where the bridge models call for it, and
combined with the released national-accounts aggregates.  Real export and
import volumes for the nowcast quarter come from a dedicated regression of
volume growth on nominal trade growth, the lagged price deflator and oil
prices, since the monthly trade series are nominal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np

from .errors import DataError, EstimationError
from .hpfilter import DEFAULT_LAMBDA
from .monthly import CompletedMonthlySeries, complete_all
from .periods import QuarterIndex, quarter_range
from .series import GDP_GROWTH_ID, MonthlySeries, QuarterlySeries
from . import ols

# Day stages at which the previous quarter's national accounts are in.
NQA_RELEASED_FROM_DAY = 60

MIN_TRADE_SAMPLE = 16

TRADE_INPUTS = {
    "exports": {"volume": "EXP", "deflator": "DEF_EXP", "nominal": "EXGS"},
    "imports": {"volume": "IMP", "deflator": "DEF_IMP", "nominal": "IMGS"},
}


def quarterly_mean(
    series: Union[CompletedMonthlySeries, MonthlySeries],
    quarter: QuarterIndex,
) -> float:
    """Mean of the three monthly values of `quarter` (observed or forecast)."""
    m1, m2, m3 = quarter.months()
    try:
        total = series.value_at(m1) + series.value_at(m2) + series.value_at(m3)
    except DataError as exc:
        raise DataError(f"cannot average quarter {quarter}: {exc}") from None
    return total / 3.0


def yoy_growth(values: Union[QuarterlySeries, Mapping[QuarterIndex, float]],
               quarter: QuarterIndex) -> float:
    """Percent growth over the same quarter of the previous year."""
    if isinstance(values, QuarterlySeries):
        def get(q):
            return values.value_at(q) if values.has(q) else None
    else:
        def get(q):
            return values.get(q)
    current, base = get(quarter), get(quarter - 4)
    if current is None or base is None:
        raise DataError(f"year-over-year growth needs values at {quarter} "
                        f"and {quarter - 4}")
    if base == 0.0:
        raise DataError(f"zero base at {quarter - 4}, growth undefined")
    return (current / base - 1.0) * 100.0


def sum_lags(day: int) -> tuple[int, ...]:
    """GDP growth lags entering the autoregressive `sum` term at `day`.

    The latest growth rate is published mid-quarter, so at days 0 and 30
    only the lags released two and three quarters back can be summed; from
    day 60 the usual three lags are available.
    """
    return (1, 2, 3) if day >= NQA_RELEASED_FROM_DAY else (2, 3)


def sum_regressor(gdp: QuarterlySeries, t: QuarterIndex, day: int) -> float:
    """Sum of the released quarter-over-quarter GDP growths before `t`."""
    total = 0.0
    for lag in sum_lags(day):
        q = t - lag
        if not gdp.has(q):
            raise DataError(f"GDP growth for {q} is not available")
        total += gdp.value_at(q)
    return total


@dataclass(frozen=True)
class TradeNowcast:
    growth: float  # year-over-year percent growth of the real volume
    level: float   # implied level via the year-earlier anchor
    fit: ols.RegressionFit


def _series_means(
    completed: CompletedMonthlySeries,
    quarters,
) -> dict[QuarterIndex, float]:
    means = {}
    for q in quarters:
        try:
            means[q] = quarterly_mean(completed, q)
        except DataError:
            continue
    return means


def trade_volume_nowcast(
    kind: str,
    snapshot,
    completed: Mapping[str, CompletedMonthlySeries],
    t: QuarterIndex,
    day: int,
    sample_start: QuarterIndex | None = None,
) -> TradeNowcast:
    """Nowcast the real export/import volume growth for quarter `t`.

    Volume year-over-year growth is regressed on nominal trade growth, the
    lagged deflator growth and oil price growth over every historical
    quarter visible in the snapshot, then applied to the completed nominal
    aggregate for `t`.  The deflator enters with lag 1 from day 60 onward
    and lag 2 before (matching what is actually released at those days).
    """
    if kind not in TRADE_INPUTS:
        raise ValueError(f"kind must be one of {sorted(TRADE_INPUTS)}, got {kind!r}")
    ids = TRADE_INPUTS[kind]
    volume = snapshot.quarterly.get(ids["volume"])
    deflator = snapshot.quarterly.get(ids["deflator"])
    nominal = completed.get(ids["nominal"])
    oil = completed.get("OIL")
    missing = [label for label, obj in
               ((ids["volume"], volume), (ids["deflator"], deflator),
                (ids["nominal"], nominal), ("OIL", oil)) if obj is None]
    if missing:
        raise DataError(f"{kind} nowcast needs series {', '.join(missing)}")

    def_lag = 1 if day >= NQA_RELEASED_FROM_DAY else 2

    first = sample_start if sample_start is not None else volume.first_period
    quarters = list(quarter_range(first, t))
    nominal_means = _series_means(nominal, quarters)
    oil_means = _series_means(oil, quarters)

    def regressor_row(q: QuarterIndex) -> dict[str, float] | None:
        try:
            return {
                "nominal": yoy_growth(nominal_means, q),
                "deflator": yoy_growth(deflator, q - def_lag),
                "oil": yoy_growth(oil_means, q),
            }
        except DataError:
            return None

    rows, y = [], []
    for q in quarters:
        if q == t or not volume.has(q):
            continue
        try:
            growth = yoy_growth(volume, q)
        except DataError:
            continue
        row = regressor_row(q)
        if row is None:
            continue
        rows.append(row)
        y.append(growth)
    if len(rows) < MIN_TRADE_SAMPLE:
        raise EstimationError(
            f"{kind} nowcast: only {len(rows)} estimation quarters, "
            f"need {MIN_TRADE_SAMPLE}"
        )

    target_row = regressor_row(t)
    if target_row is None:
        raise DataError(f"{kind} nowcast: regressors for {t} are incomplete")

    design = ols.DesignMatrix.from_rows(rows, ("nominal", "deflator", "oil"))
    fitted = ols.fit(design, np.array(y))
    growth = ols.predict(fitted, target_row)

    anchor_q = t - 4
    if not volume.has(anchor_q):
        raise DataError(f"{kind} nowcast: volume level at {anchor_q} unavailable")
    anchor = volume.value_at(anchor_q)
    return TradeNowcast(growth=growth, level=anchor * (1.0 + growth / 100.0), fit=fitted)


@dataclass
class RegressorSet:
    """Per-quarter bridge regressors plus released GDP growth.

    ``rows[q]`` holds whatever regressors are computable for quarter ``q``;
    model estimation later selects the quarters where its own regressor
    list is complete.  Historical rows are built only for quarters whose
    data are fully observed, the target row from the completed series.
    """

    target: QuarterIndex
    day: int
    rows: dict[QuarterIndex, dict[str, float]] = field(default_factory=dict)
    gdp: dict[QuarterIndex, float] = field(default_factory=dict)

    def estimation_quarters(self, names) -> list[QuarterIndex]:
        """Quarters usable to estimate a model with regressors `names`."""
        usable = []
        for q in sorted(self.rows, key=lambda q: q.ordinal):
            if q == self.target or q not in self.gdp:
                continue
            if all(name in self.rows[q] for name in names):
                usable.append(q)
        return usable


def build_regressors(
    snapshot,
    t: QuarterIndex,
    day: int,
    lam: float = DEFAULT_LAMBDA,
    sample_start: QuarterIndex | None = None,
) -> RegressorSet:
    """Assemble the regressor table for nowcasting quarter `t` at `day`.

    Produces, for every quarter from the sample start through the latest
    released GDP quarter plus the target itself: the autoregressive ``sum``
    term, the regularized sentiment average ``ESI_c`` (mean minus 100),
    plain averages of ICE and CEPR, year-over-year growth of industrial
    production, cement, cars and real card transactions, and real trade
    volume growth (released history; model-based nowcast at the target).
    """
    completed = complete_all(snapshot, t, lam)
    gdp_series = snapshot.quarterly.get(GDP_GROWTH_ID)
    if gdp_series is None or not len(gdp_series):
        raise DataError(f"snapshot has no released {GDP_GROWTH_ID} data")
    gdp = {q: gdp_series.value_at(q) for q in gdp_series.periods()}
    last_released = gdp_series.last_period

    first = sample_start if sample_start is not None else gdp_series.first_period
    quarters = [q for q in quarter_range(first, last_released)]
    if t > last_released:
        quarters.append(t)

    mean_cache = {
        sid: _series_means(completed[sid], quarter_range(first, t))
        for sid in completed
    }

    def mean_entry(sid: str, q: QuarterIndex) -> float | None:
        return mean_cache.get(sid, {}).get(q)

    def yoy_entry(sid: str, q: QuarterIndex) -> float | None:
        means = mean_cache.get(sid)
        if not means:
            return None
        try:
            return yoy_growth(means, q)
        except DataError:
            return None

    trade_nowcasts: dict[str, TradeNowcast] = {}
    if t > last_released:
        for kind, ids in TRADE_INPUTS.items():
            if ids["volume"] in snapshot.quarterly and ids["nominal"] in completed:
                try:
                    trade_nowcasts[kind] = trade_volume_nowcast(
                        kind, snapshot, completed, t, day, sample_start
                    )
                except (DataError, EstimationError):
                    continue

    regressors = RegressorSet(target=t, day=day, gdp=gdp)
    for q in quarters:
        row: dict[str, float] = {}
        try:
            row["sum"] = sum_regressor(gdp_series, q, day)
        except DataError:
            pass
        esi = mean_entry("ESI", q)
        if esi is not None:
            row["ESI_c"] = esi - 100.0
        ice = mean_entry("ICE", q)
        if ice is not None:
            row["ICE"] = ice
        cepr = mean_entry("CEPR", q)
        if cepr is not None:
            row["CEPR"] = cepr
        for name, sid in (("ipi", "IPI"), ("cem", "CEM"), ("car", "CAR"),
                          ("atm", "ATM")):
            value = yoy_entry(sid, q)
            if value is not None:
                row[name] = value
        for name, kind in (("exp", "exports"), ("imp", "imports")):
            volume = snapshot.quarterly.get(TRADE_INPUTS[kind]["volume"])
            if volume is not None and volume.has(q) and volume.has(q - 4):
                try:
                    row[name] = yoy_growth(volume, q)
                except DataError:
                    pass
            elif q == t and kind in trade_nowcasts:
                row[name] = trade_nowcasts[kind].growth
        if row:
            regressors.rows[q] = row
    return regressors
