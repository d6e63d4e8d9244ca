"""Command-line front end: ingest data, nowcast, backtest, render tables.

Every command writes a manifest next to its outputs with the resolved
options, so any run can be reproduced exactly.  Exit codes are stable:
0 on success, 1 when a computation fails, 2 for usage or validation
problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from . import __version__
from .backtest import (
    AccuracyReport,
    BacktestConfig,
    accuracy,
    run_backtest,
    theta_benchmark_records,
)
from .calendar import VALID_DAYS, ReleaseCalendar
from .errors import BridgecastError
from .models import ForecastLedger, consensus_nowcasts
from .periods import QuarterIndex
from .series import GDP_GROWTH_ID, load_dataset
from .snapshot import take_snapshot

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# External reference line shown in the sub-sample table; reported, never
# computed (the factor-model benchmark is out of scope for this engine).
TDI_REFERENCE_ROW = ("Benchmark: TDI model", 0.30, 0.55, 0.41)


class _UsageError(Exception):
    pass


def _check_paths(paths) -> list[Path]:
    out = []
    for p in paths:
        path = Path(p)
        if not path.exists():
            raise _UsageError(f"file not found: {path}")
        out.append(path)
    return out


def _load_calendar(path) -> ReleaseCalendar:
    if path is None:
        return ReleaseCalendar.default()
    calendar_path = Path(path)
    if not calendar_path.exists():
        raise _UsageError(f"calendar file not found: {calendar_path}")
    return ReleaseCalendar.from_yaml(calendar_path)


def _write_manifest(outdir: Path, command: str, options: dict) -> None:
    manifest = {
        "command": command,
        "engine_version": __version__,
        "options": options,
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )


def _report_payload(report: AccuracyReport, config: BacktestConfig) -> dict:
    cells = []
    for (day, estimator), cell in sorted(report.cells.items()):
        cells.append({
            "day": day, "estimator": estimator, "n": cell.n,
            "mse": cell.mse, "rmse": cell.rmse, "mae": cell.mae,
        })
    errors = []
    for (day, estimator), pairs in sorted(report.errors.items()):
        for quarter, err in pairs:
            errors.append({
                "day": day, "estimator": estimator,
                "quarter": str(quarter), "error": err,
            })
    return {
        "config": config.to_mapping(),
        "eval_start": str(report.eval_start),
        "eval_end": str(report.eval_end),
        "cells": cells,
        "errors": errors,
    }


def _write_report_files(report: AccuracyReport, config: BacktestConfig,
                        outdir: Path) -> None:
    payload = _report_payload(report, config)
    (outdir / "report.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    lines = ["day,estimator,n,mse,rmse,mae"]
    for cell in payload["cells"]:
        lines.append(
            f"{cell['day']},{cell['estimator']},{cell['n']},"
            f"{cell['mse']!r},{cell['rmse']!r},{cell['mae']!r}"
        )
    (outdir / "metrics.csv").write_text("\n".join(lines) + "\n")

    lines = ["day,estimator,quarter,abs_error,cumulative_abs_error"]
    for (day, estimator), pairs in sorted(report.cumulative.items()):
        errors = dict(report.errors[(day, estimator)])
        for quarter, running in pairs:
            lines.append(
                f"{day},{estimator},{quarter},"
                f"{abs(errors[quarter])!r},{running!r}"
            )
    (outdir / "cumulative.csv").write_text("\n".join(lines) + "\n")


def cmd_nowcast(args) -> int:
    data_paths = _check_paths(args.data)
    calendar = _load_calendar(args.calendar)
    dataset = load_dataset(data_paths)
    quarter = QuarterIndex.parse(args.quarter)
    sample_start = (
        QuarterIndex.parse(args.sample_start) if args.sample_start else None
    )
    ledger = (
        ForecastLedger.from_csv(_check_paths([args.ledger])[0])
        if args.ledger else ForecastLedger()
    )

    snapshot = take_snapshot(dataset, calendar, quarter, args.day)
    ledger.update_realized(snapshot.quarterly[GDP_GROWTH_ID])
    cell = consensus_nowcasts(snapshot, quarter, args.day, ledger,
                              sample_start=sample_start)
    theta = theta_benchmark_records(
        snapshot, quarter, ledger, sample_start=sample_start
    )[0]

    print(f"Nowcast for {quarter} with data available at day {args.day}")
    print(f"{'model':<12}{'simple':>10}{'corrected':>12}{'midpoint':>12}")
    for model_id in sorted(cell.simple):
        simple = f"{cell.simple[model_id]:.3f}"
        corrected = (
            f"{cell.corrected[model_id]:.3f}" if model_id in cell.corrected else "-"
        )
        midpoint = (
            f"{cell.midpoint[model_id]:.3f}" if model_id in cell.midpoint else "-"
        )
        print(f"{model_id:<12}{simple:>10}{corrected:>12}{midpoint:>12}")
    print(f"{'median':<12}{cell.median_simple:>10.3f}"
          f"{cell.median_corrected:>12.3f}")
    print(f"{theta.model:<12}{theta.value:>10.3f}")

    outdir = Path(args.output)
    outdir.mkdir(parents=True, exist_ok=True)
    payload = {
        "quarter": str(quarter),
        "day": args.day,
        "models": {
            str(mid): {
                "simple": cell.simple[mid],
                "corrected": cell.corrected.get(mid),
                "midpoint": cell.midpoint.get(mid),
            }
            for mid in sorted(cell.simple)
        },
        "median_simple": cell.median_simple,
        "median_corrected": cell.median_corrected,
        "theta": {"model": theta.model, "value": theta.value},
    }
    (outdir / "nowcast.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n"
    )
    _write_manifest(outdir, "nowcast", {
        "data": [str(p) for p in data_paths],
        "calendar": args.calendar,
        "quarter": str(quarter),
        "day": args.day,
        "sample_start": args.sample_start,
        "ledger": args.ledger,
        "output": str(outdir),
    })
    return EXIT_OK


def cmd_backtest(args) -> int:
    config_path = Path(args.config)
    if not config_path.exists():
        raise _UsageError(f"config file not found: {config_path}")
    with config_path.open() as handle:
        raw = yaml.safe_load(handle) or {}
    if not isinstance(raw, dict):
        raise _UsageError(f"{config_path}: config must be a mapping")

    data = raw.get("data")
    if not data:
        raise _UsageError(f"{config_path}: 'data' must list at least one CSV path")
    base = config_path.parent
    data_paths = _check_paths(
        [p if Path(p).is_absolute() else base / p for p in data]
    )
    calendar_entry = raw.get("calendar")
    calendar_path = (
        None if calendar_entry in (None, "") else
        (calendar_entry if Path(calendar_entry).is_absolute()
         else str(base / calendar_entry))
    )
    calendar = _load_calendar(calendar_path)
    try:
        config = BacktestConfig.from_mapping(raw)
    except (ValueError, TypeError) as exc:
        raise _UsageError(f"{config_path}: {exc}") from None

    outdir = Path(args.output or raw.get("output_dir") or "backtest_out")
    outdir.mkdir(parents=True, exist_ok=True)

    dataset = load_dataset(data_paths)
    ledger, report = run_backtest(config, dataset, calendar)

    ledger.to_csv(outdir / "ledger.csv")
    _write_report_files(report, config, outdir)
    _write_manifest(outdir, "backtest", {
        "config_path": str(config_path),
        "data": [str(p) for p in data_paths],
        "calendar": calendar_path,
        "output": str(outdir),
        "resolved": config.to_mapping(),
    })
    print(f"backtest {config.eval_start}..{config.eval_end} days "
          f"{list(config.days)}: {len(ledger)} ledger records -> {outdir}")
    return EXIT_OK


def _layout_rows(payload: dict, layout: str) -> list[tuple[str, float, float, float]]:
    estimator = "median_simple" if layout == "table4" else "median_corrected"
    theta_suffix = "" if layout == "table4" else "_corrected"

    if layout == "table6":
        end = payload["config"].get("subsample_end")
        if not end:
            raise _UsageError("report config has no subsample_end for table6")
        cells = _reaggregate(payload, QuarterIndex.parse(end))
    else:
        cells = {
            (cell["day"], cell["estimator"]): (cell["mse"], cell["rmse"], cell["mae"])
            for cell in payload["cells"]
        }

    def theta_cell(name: str):
        for day in VALID_DAYS:
            for suffix in (theta_suffix, ""):
                hit = cells.get((day, f"{name}{suffix}"))
                if hit is not None:
                    return hit
        return None

    rows: list[tuple[str, float, float, float]] = []
    days_present = sorted({day for day, est in cells if est == estimator})
    if not days_present:
        raise _UsageError(f"report has no {estimator} cells to tabulate")
    for day in (d for d in days_present if d <= 30):
        rows.append((f"Day {day}", *cells[(day, estimator)]))
    two_step = theta_cell("theta_2p")
    if two_step is not None:
        rows.append(("Benchmark: Theta model 2p", *two_step))
    for day in (d for d in days_present if d >= 60):
        rows.append((f"Day {day}", *cells[(day, estimator)]))
    one_step = theta_cell("theta_1p")
    if one_step is not None:
        rows.append(("Benchmark: Theta model 1p", *one_step))
    if layout == "table6":
        rows.append(TDI_REFERENCE_ROW)
    return rows


def _reaggregate(payload: dict, end: QuarterIndex) -> dict:
    grouped: dict[tuple[int, str], list[float]] = {}
    for item in payload["errors"]:
        quarter = QuarterIndex.parse(item["quarter"])
        if quarter > end:
            continue
        grouped.setdefault((item["day"], item["estimator"]), []).append(item["error"])
    return {key: accuracy(errs) for key, errs in grouped.items()}


def cmd_table(args) -> int:
    report_path = Path(args.report)
    if not report_path.exists():
        raise _UsageError(f"report file not found: {report_path}")
    payload = json.loads(report_path.read_text())
    rows = _layout_rows(payload, args.layout)

    headers = ("Data available at:", "MSE", "RMSE", "MAE")
    label_width = max(len(headers[0]), max(len(r[0]) for r in rows)) + 2
    print(f"{headers[0]:<{label_width}}{headers[1]:>8}{headers[2]:>8}{headers[3]:>8}")
    for label, mse, rmse, mae in rows:
        print(f"{label:<{label_width}}{mse:>8.2f}{rmse:>8.2f}{mae:>8.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bridgecast",
        description="Quarterly GDP nowcasting from monthly indicators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    nowcast = sub.add_parser("nowcast", help="nowcast one quarter at one day stage")
    nowcast.add_argument("--data", action="append", required=True,
                         help="CSV data file (repeatable)")
    nowcast.add_argument("--calendar", help="release calendar YAML "
                                            "(default: built-in schedule)")
    nowcast.add_argument("--quarter", required=True, help="e.g. 2019Q4")
    nowcast.add_argument("--day", type=int, required=True, choices=VALID_DAYS,
                         help="day of the quarter the data are available at")
    nowcast.add_argument("--sample-start", help="first estimation quarter")
    nowcast.add_argument("--ledger", help="prior forecast ledger CSV, enables "
                                          "error-corrected variants")
    nowcast.add_argument("--output", default="nowcast_out",
                         help="directory for nowcast.json and manifest.json")
    nowcast.set_defaults(func=cmd_nowcast)

    backtest = sub.add_parser("backtest", help="run the rolling evaluation")
    backtest.add_argument("--config", required=True, help="backtest YAML config")
    backtest.add_argument("--output", help="output directory "
                                           "(default: config output_dir)")
    backtest.set_defaults(func=cmd_backtest)

    table = sub.add_parser("table", help="render a report as a text table")
    table.add_argument("--report", required=True, help="report.json from a backtest")
    table.add_argument("--layout", required=True,
                       choices=("table4", "table5", "table6"),
                       help="table4: simple medians; table5: corrected; "
                            "table6: corrected over the sub-sample")
    table.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BridgecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
