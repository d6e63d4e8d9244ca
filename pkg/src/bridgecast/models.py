"""The six bridge models, error correction and median consensus.

Each model regresses released quarter-over-quarter GDP growth on a fixed
subset of the quarterly regressors (always including an intercept) over an
expanding estimation sample, then predicts the target quarter.  A corrected
variant adds the model's most recent verifiable out-of-sample error; the
consensus is the median across models, pooled with the corrected variants
where they exist.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError, EstimationError
from .hpfilter import DEFAULT_LAMBDA
from .periods import QuarterIndex
from .quarterly import RegressorSet, build_regressors
from .series import QuarterlySeries
from . import ols

MODEL_REGRESSORS: dict[int, tuple[str, ...]] = {
    1: ("sum", "ESI_c", "ICE", "ipi", "cem"),
    2: ("sum", "ESI_c", "ICE", "ipi", "cem", "exp", "imp"),
    3: ("sum", "ESI_c", "car", "ipi", "cem"),
    4: ("sum", "ESI_c", "atm", "ipi", "cem"),
    5: ("sum", "ESI_c", "atm", "ipi", "cem", "exp", "imp"),
    6: ("sum", "ESI_c", "ICE", "ipi", "cem", "CEPR"),
}

SIMPLE = "simple"
CORRECTED = "corrected"
MIDPOINT = "midpoint"

MEDIAN_MODEL = "median"

# How many quarters back to look for a verifiable prior forecast.
MAX_CORRECTION_LOOKBACK = 8


@dataclass(frozen=True)
class ModelSpec:
    """A bridge model: its id and ordered regressor names."""

    id: int
    regressors: tuple[str, ...]

    @classmethod
    def standard(cls, model_id: int) -> "ModelSpec":
        if model_id not in MODEL_REGRESSORS:
            raise ValueError(f"unknown model id {model_id}")
        return cls(model_id, MODEL_REGRESSORS[model_id])


@dataclass(frozen=True)
class NowcastRecord:
    """One forecast: (quarter, day, model, variant) -> value."""

    quarter: QuarterIndex
    day: int
    model: str
    variant: str
    value: float

    @property
    def key(self) -> tuple:
        return (self.quarter, self.day, self.model, self.variant)


class ForecastLedger:
    """Append-only store of nowcast records and released growth rates.

    Records never mutate: re-adding an identical record is a no-op, adding
    a conflicting one raises.  The realized map is filled from snapshots as
    quarters are released, so corrections can only ever see growth rates
    that were visible at the time.
    """

    def __init__(self) -> None:
        self._records: dict[tuple, NowcastRecord] = {}
        self.realized: dict[QuarterIndex, float] = {}

    def __len__(self) -> int:
        return len(self._records)

    def add(self, record: NowcastRecord) -> None:
        existing = self._records.get(record.key)
        if existing is None:
            self._records[record.key] = record
        elif existing.value != record.value:
            raise DataError(
                f"conflicting ledger entry for {record.key}: "
                f"{existing.value!r} vs {record.value!r}"
            )

    def get(self, quarter: QuarterIndex, day: int, model: str,
            variant: str = SIMPLE) -> NowcastRecord | None:
        return self._records.get((quarter, day, model, variant))

    def records(self) -> list[NowcastRecord]:
        return sorted(
            self._records.values(),
            key=lambda r: (r.quarter.ordinal, r.day, r.model, r.variant),
        )

    def update_realized(self, gdp: QuarterlySeries) -> None:
        for quarter, value in gdp.items():
            known = self.realized.get(quarter)
            if known is None:
                self.realized[quarter] = value
            elif known != value:
                raise DataError(
                    f"released growth for {quarter} changed: {known!r} vs {value!r}"
                )

    def to_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["quarter", "day", "model", "variant", "value"])
            for record in self.records():
                writer.writerow([
                    str(record.quarter), record.day, record.model,
                    record.variant, repr(record.value),
                ])

    @classmethod
    def from_csv(cls, path) -> "ForecastLedger":
        path = Path(path)
        ledger = cls()
        with path.open(newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or [c.strip() for c in header] != [
                "quarter", "day", "model", "variant", "value"
            ]:
                raise DataError(f"{path}: not a ledger file (bad header {header!r})")
            for row_no, row in enumerate(reader, start=2):
                if not row:
                    continue
                try:
                    record = NowcastRecord(
                        quarter=QuarterIndex.parse(row[0]),
                        day=int(row[1]),
                        model=row[2],
                        variant=row[3],
                        value=float(row[4]),
                    )
                except (ValueError, IndexError) as exc:
                    raise DataError(f"{path}: row {row_no}: {exc}") from None
                ledger.add(record)
        return ledger


def estimate_and_forecast(
    spec: ModelSpec,
    regressors: RegressorSet,
    window: int | None = None,
) -> tuple[NowcastRecord, ols.RegressionFit]:
    """Fit one bridge model and predict the regressor set's target quarter.

    The estimation sample is every quarter with released GDP growth and a
    complete regressor row, expanding from the sample start; `window` keeps
    only the most recent quarters instead.
    """
    quarters = regressors.estimation_quarters(spec.regressors)
    if window is not None:
        quarters = quarters[-window:]
    if not quarters:
        raise EstimationError(f"model {spec.id}: no usable estimation quarters")
    rows = [regressors.rows[q] for q in quarters]
    y = np.array([regressors.gdp[q] for q in quarters])
    design = ols.DesignMatrix.from_rows(rows, spec.regressors)
    try:
        fitted = ols.fit(design, y)
    except ValueError as exc:
        raise EstimationError(f"model {spec.id}: {exc}") from None

    target_row = regressors.rows.get(regressors.target)
    if target_row is None:
        raise EstimationError(
            f"model {spec.id}: no regressors for target {regressors.target}"
        )
    try:
        value = ols.predict(fitted, target_row)
    except ValueError as exc:
        raise EstimationError(f"model {spec.id}: {exc}") from None
    record = NowcastRecord(
        quarter=regressors.target, day=regressors.day,
        model=str(spec.id), variant=SIMPLE, value=value,
    )
    return record, fitted


def error_correct(
    ledger: ForecastLedger,
    simple: NowcastRecord,
    max_lookback: int = MAX_CORRECTION_LOOKBACK,
) -> NowcastRecord | None:
    """Add the most recent verifiable error of the same model and day stage.

    Scans back from the preceding quarter for the newest quarter that has
    both a prior simple forecast at the same day stage and a realized
    growth rate in the ledger; returns None when no such quarter exists
    (corrections are never fabricated).
    """
    for lag in range(1, max_lookback + 1):
        reference = simple.quarter - lag
        realized = ledger.realized.get(reference)
        prior = ledger.get(reference, simple.day, simple.model, SIMPLE)
        if realized is not None and prior is not None:
            return NowcastRecord(
                quarter=simple.quarter, day=simple.day, model=simple.model,
                variant=CORRECTED,
                value=simple.value + (realized - prior.value),
            )
    return None


def median_consensus(values: Sequence[float]) -> float:
    """Median with the even-count convention (mean of the two middle values)."""
    if not len(values):
        raise ValueError("cannot take the median of an empty list")
    ordered = sorted(float(v) for v in values)
    n = len(ordered)
    mid = n // 2
    if n % 2:
        return ordered[mid]
    return 0.5 * (ordered[mid - 1] + ordered[mid])


@dataclass
class CellNowcast:
    """All forecasts produced for one (quarter, day) cell."""

    quarter: QuarterIndex
    day: int
    simple: dict[int, float]
    corrected: dict[int, float]
    midpoint: dict[int, float]
    median_simple: float
    median_corrected: float
    fits: dict[int, ols.RegressionFit] = field(default_factory=dict)

    def records(self) -> list[NowcastRecord]:
        out = []
        for model_id, value in sorted(self.simple.items()):
            out.append(NowcastRecord(self.quarter, self.day, str(model_id),
                                     SIMPLE, value))
        for model_id, value in sorted(self.corrected.items()):
            out.append(NowcastRecord(self.quarter, self.day, str(model_id),
                                     CORRECTED, value))
        for model_id, value in sorted(self.midpoint.items()):
            out.append(NowcastRecord(self.quarter, self.day, str(model_id),
                                     MIDPOINT, value))
        out.append(NowcastRecord(self.quarter, self.day, MEDIAN_MODEL,
                                 SIMPLE, self.median_simple))
        out.append(NowcastRecord(self.quarter, self.day, MEDIAN_MODEL,
                                 CORRECTED, self.median_corrected))
        return out


def consensus_nowcasts(
    snapshot,
    t: QuarterIndex,
    day: int,
    ledger: ForecastLedger,
    model_ids: Iterable[int] = tuple(MODEL_REGRESSORS),
    lam: float = DEFAULT_LAMBDA,
    sample_start: QuarterIndex | None = None,
    window: int | None = None,
    regressors: RegressorSet | None = None,
) -> CellNowcast:
    """Run every bridge model for one cell and combine the forecasts.

    The simple consensus is the median of the per-model forecasts; the
    corrected consensus pools simple and corrected forecasts.  Per-model
    midpoints (mean of the simple and corrected values) are also emitted.
    A failing model aborts the cell with its id in the message; models are
    never silently dropped.
    """
    if regressors is None:
        regressors = build_regressors(snapshot, t, day, lam, sample_start)
    simple: dict[int, float] = {}
    corrected: dict[int, float] = {}
    midpoint: dict[int, float] = {}
    fits: dict[int, ols.RegressionFit] = {}
    for model_id in model_ids:
        spec = ModelSpec.standard(model_id)
        try:
            record, fitted = estimate_and_forecast(spec, regressors, window)
        except (DataError, EstimationError) as exc:
            raise EstimationError(
                f"model {model_id} failed at {t} day {day}: {exc}"
            ) from None
        simple[model_id] = record.value
        fits[model_id] = fitted
        correction = error_correct(ledger, record)
        if correction is not None:
            corrected[model_id] = correction.value
            midpoint[model_id] = 0.5 * (record.value + correction.value)

    pooled = list(simple.values()) + list(corrected.values())
    return CellNowcast(
        quarter=t, day=day,
        simple=simple, corrected=corrected, midpoint=midpoint,
        median_simple=median_consensus(list(simple.values())),
        median_corrected=median_consensus(pooled),
        fits=fits,
    )
