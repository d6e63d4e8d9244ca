"""Time-series containers and CSV ingestion.

Monthly and quarterly series are stored as a start period plus a contiguous
float array, which makes the no-interior-gaps invariant structural.  The CSV
exchange format is long form with a header::

    period,series_id,value
    1996-01,ESI,98.2
    1996-Q1,GDP_QOQ,1.0

Monthly periods are ``YYYY-MM``, quarterly ``YYYY-Qn``; a file may mix both.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import DataError
from .periods import MonthIndex, QuarterIndex, parse_period

UNITS = ("index", "currency", "percent")
NOISE_CLASSES = ("smooth", "noisy")

SMOOTH = "smooth"
NOISY = "noisy"


@dataclass(frozen=True)
class SeriesMeta:
    """Static description of a series: frequency, unit and noise class."""

    freq: str  # "M" or "Q"
    unit: str = "index"
    noise_class: str = SMOOTH

    def __post_init__(self) -> None:
        if self.freq not in ("M", "Q"):
            raise ValueError(f"freq must be 'M' or 'Q', got {self.freq!r}")
        if self.unit not in UNITS:
            raise ValueError(f"unit must be one of {UNITS}, got {self.unit!r}")
        if self.noise_class not in NOISE_CLASSES:
            raise ValueError(f"noise_class must be one of {NOISE_CLASSES}")


# Default registry for the standard indicator set.  IPI, CEM and ATM carry
# the `noisy` class (moving-average completion); exports/imports of goods and
# services are completed with the same rule, so they are registered noisy
# too.  CAR is noisy as well: its release lag leaves a four-month gap at
# day 0, beyond what trend-step completion accepts.
DEFAULT_SCHEMA: dict[str, SeriesMeta] = {
    "ESI": SeriesMeta("M", "index", SMOOTH),
    "ICE": SeriesMeta("M", "index", SMOOTH),
    "IPI": SeriesMeta("M", "index", NOISY),
    "CEM": SeriesMeta("M", "currency", NOISY),
    "CAR": SeriesMeta("M", "currency", NOISY),
    "ATM": SeriesMeta("M", "currency", NOISY),
    "EXGS": SeriesMeta("M", "currency", NOISY),
    "IMGS": SeriesMeta("M", "currency", NOISY),
    "EXG": SeriesMeta("M", "currency", SMOOTH),
    "IMG": SeriesMeta("M", "currency", SMOOTH),
    "CPI": SeriesMeta("M", "index", SMOOTH),
    "OIL": SeriesMeta("M", "currency", SMOOTH),
    "CEPR": SeriesMeta("M", "percent", SMOOTH),
    "GDP": SeriesMeta("Q", "index", SMOOTH),
    "GDP_QOQ": SeriesMeta("Q", "percent", SMOOTH),
    "EXP": SeriesMeta("Q", "currency", SMOOTH),
    "IMP": SeriesMeta("Q", "currency", SMOOTH),
    "DEF_EXP": SeriesMeta("Q", "index", SMOOTH),
    "DEF_IMP": SeriesMeta("Q", "index", SMOOTH),
}

# Quarterly growth of GDP is the variable every bridge model targets.
GDP_GROWTH_ID = "GDP_QOQ"


def _as_values(values: Sequence[float], series_id: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise DataError(f"series {series_id}: values must be one-dimensional")
    if arr.size and not np.all(np.isfinite(arr)):
        raise DataError(f"series {series_id}: non-finite value present")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


class _SeriesBase:
    """Shared behaviour for monthly/quarterly series (start + dense values).

    Lookups run on period ordinals (cached at construction); these sit on
    the innermost loops of the backtest.
    """

    id: str
    values: np.ndarray

    def __len__(self) -> int:
        return int(self.values.size)

    @property
    def first_period(self):
        if not len(self):
            raise DataError(f"series {self.id} is empty")
        return self.start

    @property
    def last_period(self):
        if not len(self):
            raise DataError(f"series {self.id} is empty")
        return self.start + (len(self) - 1)

    def has(self, period) -> bool:
        return 0 <= period.ordinal - self._start_ordinal < self.values.size

    def value_at(self, period) -> float:
        offset = period.ordinal - self._start_ordinal
        if not 0 <= offset < self.values.size:
            raise DataError(f"series {self.id} has no observation at {period}")
        return float(self.values[offset])

    def periods(self) -> Iterator:
        for k in range(len(self)):
            yield self.start + k

    def items(self) -> Iterator[tuple]:
        for k in range(len(self)):
            yield self.start + k, float(self.values[k])

    def through(self, period):
        """Copy truncated to observations at or before `period` (may be empty)."""
        keep = period.ordinal - self._start_ordinal + 1
        if keep < 0:
            keep = 0
        keep = min(keep, len(self))
        return replace(self, values=self.values[:keep])

    def _same_data(self, other) -> bool:
        return (
            type(other) is type(self)
            and self.id == other.id
            and (len(self) == 0 and len(other) == 0 or self.start == other.start)
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True, eq=False)
class MonthlySeries(_SeriesBase):
    """Contiguous monthly observations starting at `start`."""

    id: str
    start: MonthIndex
    values: np.ndarray
    unit: str = "index"
    noise_class: str = SMOOTH

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise DataError(f"series {self.id}: unknown unit {self.unit!r}")
        if self.noise_class not in NOISE_CLASSES:
            raise DataError(f"series {self.id}: unknown noise class {self.noise_class!r}")
        object.__setattr__(self, "values", _as_values(self.values, self.id))
        object.__setattr__(self, "_start_ordinal", self.start.ordinal)

    def __eq__(self, other) -> bool:
        return self._same_data(other)

    def __hash__(self):
        return hash((self.id, self.start, len(self)))


@dataclass(frozen=True, eq=False)
class QuarterlySeries(_SeriesBase):
    """Contiguous quarterly observations starting at `start`."""

    id: str
    start: QuarterIndex
    values: np.ndarray
    unit: str = "index"

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise DataError(f"series {self.id}: unknown unit {self.unit!r}")
        object.__setattr__(self, "values", _as_values(self.values, self.id))
        object.__setattr__(self, "_start_ordinal", self.start.ordinal)

    def __eq__(self, other) -> bool:
        return self._same_data(other)

    def __hash__(self):
        return hash((self.id, self.start, len(self)))


def series_from_items(
    series_id: str,
    items: Mapping,
    meta: SeriesMeta,
) -> Union[MonthlySeries, QuarterlySeries]:
    """Build a series from a period->value mapping, validating contiguity."""
    if not items:
        raise DataError(f"series {series_id} has no observations")
    periods = sorted(items)
    start, last = periods[0], periods[-1]
    expected = last - start + 1
    if len(periods) != expected:
        have = set(p.ordinal for p in periods)
        for k in range(expected):
            p = start + k
            if p.ordinal not in have:
                raise DataError(f"series {series_id} has a gap at {p}")
    values = [items[p] for p in periods]
    if meta.freq == "M":
        return MonthlySeries(series_id, start, np.asarray(values, float),
                             unit=meta.unit, noise_class=meta.noise_class)
    return QuarterlySeries(series_id, start, np.asarray(values, float), unit=meta.unit)


@dataclass
class Dataset:
    """All ingested series, keyed by id and split by frequency."""

    monthly: dict[str, MonthlySeries] = field(default_factory=dict)
    quarterly: dict[str, QuarterlySeries] = field(default_factory=dict)

    def series_ids(self) -> list[str]:
        return sorted(self.monthly) + sorted(self.quarterly)

    def merge(self, other: "Dataset") -> "Dataset":
        for sid in other.monthly:
            if sid in self.monthly or sid in self.quarterly:
                raise DataError(f"series {sid} supplied more than once")
        for sid in other.quarterly:
            if sid in self.quarterly or sid in self.monthly:
                raise DataError(f"series {sid} supplied more than once")
        self.monthly.update(other.monthly)
        self.quarterly.update(other.quarterly)
        return self


def ingest_csv(path, schema: Mapping[str, SeriesMeta] | None = None) -> Dataset:
    """Read one long-form CSV into a Dataset.

    Parameters
    ----------
    path : str or Path
        CSV file with header ``period,series_id,value``.
    schema : mapping, optional
        Per-series metadata.  Defaults to :data:`DEFAULT_SCHEMA`; series ids
        not present there are accepted with frequency inferred from the
        period format, unit ``index`` and noise class ``smooth``.

    Raises
    ------
    DataError
        On unparseable rows (with the row number), duplicate observations,
        non-contiguous series or frequency mismatches against the schema.
    """
    schema = dict(DEFAULT_SCHEMA if schema is None else schema)
    path = Path(path)
    rows: dict[str, dict] = {}
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        if [c.strip().lower() for c in header[:3]] != ["period", "series_id", "value"]:
            raise DataError(
                f"{path}: expected header 'period,series_id,value', got {header!r}"
            )
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < 3:
                raise DataError(f"{path}: row {row_no}: expected 3 columns, got {len(row)}")
            raw_period, series_id, raw_value = (cell.strip() for cell in row[:3])
            try:
                period = parse_period(raw_period)
            except ValueError as exc:
                raise DataError(f"{path}: row {row_no}: {exc}") from None
            try:
                value = float(raw_value)
            except ValueError:
                raise DataError(
                    f"{path}: row {row_no}: unparseable value {raw_value!r}"
                ) from None
            freq = "M" if isinstance(period, MonthIndex) else "Q"
            meta = schema.get(series_id)
            if meta is None:
                meta = SeriesMeta(freq)
                schema[series_id] = meta
            elif meta.freq != freq:
                raise DataError(
                    f"{path}: row {row_no}: series {series_id} is registered as "
                    f"frequency {meta.freq!r} but period {raw_period} is {freq!r}"
                )
            bucket = rows.setdefault(series_id, {})
            if period in bucket:
                raise DataError(
                    f"{path}: duplicate observation for ({period}, {series_id})"
                )
            bucket[period] = value

    dataset = Dataset()
    for series_id in sorted(rows):
        series = series_from_items(series_id, rows[series_id], schema[series_id])
        if isinstance(series, MonthlySeries):
            dataset.monthly[series_id] = series
        else:
            dataset.quarterly[series_id] = series
    return dataset


def load_dataset(paths: Iterable, schema: Mapping[str, SeriesMeta] | None = None) -> Dataset:
    """Ingest several CSV files into one Dataset (series ids must not repeat)."""
    dataset = Dataset()
    for path in paths:
        dataset.merge(ingest_csv(path, schema))
    return dataset


def export_csv(dataset: Dataset, path) -> None:
    """Write a Dataset back to long-form CSV.

    Values are rendered with ``repr`` so a round trip reproduces every float
    bit-exactly.
    """
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["period", "series_id", "value"])
        for sid in sorted(dataset.monthly):
            for period, value in dataset.monthly[sid].items():
                writer.writerow([str(period), sid, repr(value)])
        for sid in sorted(dataset.quarterly):
            for period, value in dataset.quarterly[sid].items():
                writer.writerow([str(period), sid, repr(value)])
