"""Synthetic datasets for demos, tests and golden fixtures.

Two generators are provided.  ``build_fixture`` produces a realistic-looking
multi-indicator dataset whose GDP growth follows bridge model 1's equation
with configurable residual noise: sentiment is solved from the equation so
that the published reference coefficients hold by construction and the
regression residual is exactly the injected noise.  ``build_selfconsistent_fixture``
is the zero-noise variant used for exactness checks: indicator series are
affine (so jagged-edge completion is error free at the post-quarter stage)
and the car/card/climate columns are numerically identical, which puts the
generated growth in the span of every one of the six models.

Usage as a script::

    python -m bridgecast.synthetic OUTDIR [--sigma 0.3] [--seed 20240817]
"""

from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from .periods import MonthIndex, QuarterIndex
from .series import (
    DEFAULT_SCHEMA,
    Dataset,
    MonthlySeries,
    QuarterlySeries,
)

DEFAULT_SEED = 20240817
DEFAULT_SIGMA = 0.3

N_QUARTERS = 96  # 1996Q1 .. 2019Q4
N_MONTHS = 3 * N_QUARTERS
START_MONTH = MonthIndex(1996, 1)
START_QUARTER = QuarterIndex(1996, 1)

# Bridge model 1's reference coefficients: constant, GDP sum, sentiment,
# climate, industrial production, cement.
MODEL1_COEFFS = {
    "const": 0.736,
    "sum": 0.497,
    "ESI_c": 0.055,
    "ICE": 0.310,
    "ipi": 0.068,
    "cem": 0.018,
}


def _quarter_means(monthly: np.ndarray) -> np.ndarray:
    return monthly.reshape(N_QUARTERS, 3).mean(axis=1)


def _yoy(means: np.ndarray) -> np.ndarray:
    out = np.full(N_QUARTERS, np.nan)
    out[4:] = (means[4:] / means[:-4] - 1.0) * 100.0
    return out


def _growth_path() -> np.ndarray:
    q = np.arange(N_QUARTERS, dtype=float)
    return (
        0.42
        + 0.30 * np.sin(2 * np.pi * q / 7 + 0.5)
        + 0.20 * np.sin(2 * np.pi * q / 13)
    )


def _solve_sentiment(
    released: np.ndarray,
    noise: np.ndarray,
    ice_column: np.ndarray,
    ipi_yoy: np.ndarray,
    cem_yoy: np.ndarray,
) -> np.ndarray:
    """Sentiment averages making model 1's equation hold with residual `noise`."""
    b = MODEL1_COEFFS
    esi_c = np.zeros(N_QUARTERS)
    for q in range(4, N_QUARTERS):
        lag_sum = released[q - 1] + released[q - 2] + released[q - 3]
        esi_c[q] = (
            released[q] - noise[q]
            - b["const"]
            - b["sum"] * lag_sum
            - b["ICE"] * ice_column[q]
            - b["ipi"] * ipi_yoy[q]
            - b["cem"] * cem_yoy[q]
        ) / b["ESI_c"]
    return esi_c


def _monthly_from_quarter_blocks(block_values: np.ndarray) -> np.ndarray:
    return np.repeat(block_values, 3)


def _assemble(monthly: dict[str, np.ndarray],
              quarterly: dict[str, np.ndarray]) -> Dataset:
    dataset = Dataset()
    for sid, values in monthly.items():
        meta = DEFAULT_SCHEMA[sid]
        dataset.monthly[sid] = MonthlySeries(
            sid, START_MONTH, values, unit=meta.unit, noise_class=meta.noise_class
        )
    for sid, values in quarterly.items():
        meta = DEFAULT_SCHEMA[sid]
        dataset.quarterly[sid] = QuarterlySeries(
            sid, START_QUARTER, values, unit=meta.unit
        )
    return dataset


def _trade_block(k: np.ndarray, rng: np.random.Generator | None,
                 wobble: float) -> dict[str, np.ndarray]:
    def shake(size):
        if rng is None or wobble == 0.0:
            return np.zeros(size)
        return wobble * rng.standard_normal(size)

    # Cycle lengths deliberately avoid 12 months: an annual seasonal would
    # cancel in year-over-year growth and flatten the regressor.
    exgs = 4000.0 * np.exp(0.002 * k) * (
        1 + 0.05 * np.sin(2 * np.pi * k / 31 + 0.3)
        + 0.02 * np.sin(2 * np.pi * k / 7)
    )
    exgs *= 1 + shake(k.size)
    exg = 0.78 * exgs * (1 + 0.02 * np.sin(2 * np.pi * k / 18))
    imgs = 4300.0 * np.exp(0.0018 * k) * (
        1 + 0.04 * np.sin(2 * np.pi * k / 29 + 1.1)
        + 0.02 * np.sin(2 * np.pi * k / 8)
    )
    imgs *= 1 + shake(k.size)
    img = 0.80 * imgs * (1 + 0.02 * np.sin(2 * np.pi * k / 17 + 0.5))
    return {"EXGS": exgs, "EXG": exg, "IMGS": imgs, "IMG": img}


def build_selfconsistent_fixture() -> Dataset:
    """Zero-noise dataset on which every bridge model nowcasts exactly.

    All completion-dependent series are affine in the month index, the
    climate and car columns replicate the card-transaction growth column,
    and sentiment is solved from model 1's equation, so at the post-quarter
    day stage every model's forecast reproduces the generated growth to
    numerical precision.
    """
    k = np.arange(N_MONTHS, dtype=float)
    q = np.arange(N_QUARTERS, dtype=float)

    ipi = 80.0 + 0.30 * k
    cem = 200.0 - 0.25 * k
    atm = 900.0 - 2.0 * k
    cpi = np.full(N_MONTHS, 100.0)
    oil = 45.0 + 0.04 * k + 8.0 * np.sin(2 * np.pi * k / 29)
    cepr = 0.4 + 0.3 * np.sin(2 * np.pi * k / 37) + 0.002 * k

    # Deflated the same way the pipeline does it, to share the rounding.
    atm_real = atm / cpi * 100.0
    h = _yoy(_quarter_means(atm_real))
    ipi_yoy = _yoy(_quarter_means(ipi))
    cem_yoy = _yoy(_quarter_means(cem))

    ice_block = np.where(np.isnan(h), 0.0, h)
    car_levels = np.empty(N_QUARTERS)
    car_levels[:4] = 100.0
    for i in range(4, N_QUARTERS):
        car_levels[i] = car_levels[i - 4] * (1.0 + h[i] / 100.0)

    path = _growth_path()
    released = path.copy()
    ice_column = _quarter_means(_monthly_from_quarter_blocks(ice_block))
    esi_c = _solve_sentiment(released, np.zeros(N_QUARTERS), ice_column,
                             ipi_yoy, cem_yoy)
    esi_block = np.where(np.arange(N_QUARTERS) < 4, 100.0, 100.0 + esi_c)

    monthly = {
        "ESI": _monthly_from_quarter_blocks(esi_block),
        "ICE": _monthly_from_quarter_blocks(ice_block),
        "IPI": ipi,
        "CEM": cem,
        "CAR": _monthly_from_quarter_blocks(car_levels),
        "ATM": atm,
        "CPI": cpi,
        "OIL": oil,
        "CEPR": cepr,
    }
    monthly.update(_trade_block(k, None, 0.0))

    gdp_level = 100.0 * np.cumprod(1.0 + released / 100.0)
    quarterly = {
        "GDP_QOQ": released,
        "GDP": gdp_level,
        "EXP": 3000.0 * 1.004**q * (1 + 0.02 * np.sin(2 * np.pi * q / 10)),
        "IMP": 3200.0 * 1.0035**q * (1 + 0.02 * np.sin(2 * np.pi * q / 11 + 0.4)),
        "DEF_EXP": 95.0 * 1.003**q * (1 + 0.004 * np.sin(2 * np.pi * q / 9)),
        "DEF_IMP": 98.0 * 1.0025**q * (1 + 0.005 * np.cos(2 * np.pi * q / 11)),
    }
    return _assemble(monthly, quarterly)


def build_fixture(
    noise_sigma: float = DEFAULT_SIGMA,
    seed: int = DEFAULT_SEED,
) -> Dataset:
    """Behavioural dataset: model 1's equation plus residual noise.

    Indicators are distinct noisy series; GDP growth equals the model-1
    linear combination of the (lagged released) sum, solved sentiment,
    climate, industrial production and cement terms plus N(0, sigma^2)
    residuals drawn from `seed`.  Export and import volumes react to
    nominal trade, deflators and oil so the trade nowcast regression has
    signal to find.
    """
    rng = np.random.default_rng(seed)
    k = np.arange(N_MONTHS, dtype=float)
    q = np.arange(N_QUARTERS, dtype=float)

    ipi = 80.0 + 0.30 * k + 0.8 * rng.standard_normal(N_MONTHS)
    cem = 200.0 - 0.25 * k + 1.5 * rng.standard_normal(N_MONTHS)
    atm = 900.0 - 2.0 * k + 2.0 * rng.standard_normal(N_MONTHS)
    cpi = 100.0 * 1.002**k
    car = 150.0 + 0.40 * k + 0.6 * rng.standard_normal(N_MONTHS)
    ice = (
        1.0 + 0.8 * np.sin(2 * np.pi * k / 35 + 0.4) + 0.003 * k
        + 0.05 * rng.standard_normal(N_MONTHS)
    )
    oil = (
        45.0 + 0.04 * k + 8.0 * np.sin(2 * np.pi * k / 29)
        + 0.5 * rng.standard_normal(N_MONTHS)
    )
    cepr = (
        0.4 + 0.3 * np.sin(2 * np.pi * k / 37) + 0.002 * k
        + 0.03 * rng.standard_normal(N_MONTHS)
    )
    trade = _trade_block(k, rng, 0.01)

    atm_real = atm / cpi * 100.0
    atm_yoy = _yoy(_quarter_means(atm_real))
    ipi_yoy = _yoy(_quarter_means(ipi))
    cem_yoy = _yoy(_quarter_means(cem))
    ice_column = _quarter_means(ice)
    del atm_yoy  # card growth enters only models 4 and 5, not the generator

    path = _growth_path()
    noise = noise_sigma * rng.standard_normal(N_QUARTERS)
    released = path + noise
    esi_c = _solve_sentiment(released, noise, ice_column, ipi_yoy, cem_yoy)
    esi_block = np.where(np.arange(N_QUARTERS) < 4, 100.0, 100.0 + esi_c)

    deflator_exp = 95.0 * 1.003**q * (1 + 0.004 * np.sin(2 * np.pi * q / 9))
    deflator_imp = 98.0 * 1.0025**q * (1 + 0.005 * np.cos(2 * np.pi * q / 11))
    def_exp_yoy = _yoy(deflator_exp)
    def_imp_yoy = _yoy(deflator_imp)
    exgs_yoy = _yoy(_quarter_means(trade["EXGS"]))
    imgs_yoy = _yoy(_quarter_means(trade["IMGS"]))
    oil_yoy = _yoy(_quarter_means(oil))

    exp_levels = np.empty(N_QUARTERS)
    imp_levels = np.empty(N_QUARTERS)
    exp_levels[:4] = 3000.0 * 1.01 ** np.arange(4)
    imp_levels[:4] = 3200.0 * 1.008 ** np.arange(4)
    exp_noise = 0.3 * rng.standard_normal(N_QUARTERS)
    imp_noise = 0.3 * rng.standard_normal(N_QUARTERS)
    for i in range(4, N_QUARTERS):
        lag_def_exp = def_exp_yoy[i - 1] if i >= 5 else 1.2
        lag_def_imp = def_imp_yoy[i - 1] if i >= 5 else 1.0
        exp_growth = (
            1.5 + 0.6 * exgs_yoy[i] - 0.2 * lag_def_exp + 0.05 * oil_yoy[i]
            + exp_noise[i]
        )
        imp_growth = (
            1.2 + 0.55 * imgs_yoy[i] - 0.15 * lag_def_imp + 0.04 * oil_yoy[i]
            + imp_noise[i]
        )
        exp_levels[i] = exp_levels[i - 4] * (1.0 + exp_growth / 100.0)
        imp_levels[i] = imp_levels[i - 4] * (1.0 + imp_growth / 100.0)

    monthly = {
        "ESI": _monthly_from_quarter_blocks(esi_block),
        "ICE": ice,
        "IPI": ipi,
        "CEM": cem,
        "CAR": car,
        "ATM": atm,
        "CPI": cpi,
        "OIL": oil,
        "CEPR": cepr,
    }
    monthly.update(trade)

    quarterly = {
        "GDP_QOQ": released,
        "GDP": 100.0 * np.cumprod(1.0 + released / 100.0),
        "EXP": exp_levels,
        "IMP": imp_levels,
        "DEF_EXP": deflator_exp,
        "DEF_IMP": deflator_imp,
    }
    return _assemble(monthly, quarterly)


def write_fixture(
    outdir,
    noise_sigma: float = DEFAULT_SIGMA,
    seed: int = DEFAULT_SEED,
    self_consistent: bool = False,
) -> tuple[Path, Path]:
    """Write the fixture as monthly.csv and quarterly.csv under `outdir`."""
    from .series import export_csv

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    dataset = (
        build_selfconsistent_fixture() if self_consistent
        else build_fixture(noise_sigma, seed)
    )
    monthly_path = outdir / "monthly.csv"
    quarterly_path = outdir / "quarterly.csv"
    export_csv(Dataset(monthly=dataset.monthly), monthly_path)
    export_csv(Dataset(quarterly=dataset.quarterly), quarterly_path)
    return monthly_path, quarterly_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Generate a synthetic nowcasting dataset."
    )
    parser.add_argument("outdir", help="output directory for the CSV files")
    parser.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                        help="growth residual standard deviation")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--self-consistent", action="store_true",
                        help="zero-noise dataset with exact model forecasts")
    args = parser.parse_args(argv)
    monthly_path, quarterly_path = write_fixture(
        args.outdir, args.sigma, args.seed, args.self_consistent
    )
    print(f"wrote {monthly_path} and {quarterly_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
