"""Command-line front end for the whole pipeline.

Commands: summary, fit, curves, revise, report, simulate, generate,
validate. Data goes to stdout (or --out); warnings and diagnostics go to
stderr. Exit codes: 0 success, 2 input or configuration error, 3 model or
regime error, 4 validation failure.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .config import (
    AppConfig,
    LOW_TARGET_WARNING_THRESHOLD,
    load_config_file,
    parse_family,
    parse_target_grid,
    parse_venue_list,
)
from .distributions import Family, FittedDist, fit, fitted_to_json, pmf, survival
from .errors import (
    FairchaseError,
    InconsistentSpec,
    InsufficientSample,
    InvalidParams,
    TargetUnattainable,
    UnderdispersedSample,
    ZeroVariance,
)
from .matches import (
    OVERALL_VENUE,
    CaseLabel,
    CategorizedScores,
    MatchRecord,
    categorize,
    parse_matches,
    resolve_venue,
    serialize_matches,
    summarize,
    summary_to_csv,
    summary_to_json,
    venue_names,
)
from .revision import (
    build_model,
    report_to_csv,
    report_to_json,
    revise_target,
    revision_report,
)
from .simulate import SimConfig, check_equalization, default_synthetic_spec, generate_synthetic_dataset

_FIT_ERRORS = (InsufficientSample, UnderdispersedSample, ZeroVariance)
_MODEL_ERRORS = _FIT_ERRORS + (TargetUnattainable, InconsistentSpec, InvalidParams)

_CASE_COLUMNS = {
    CaseLabel.BAT_FIRST_WIN: "bat_first_win",
    CaseLabel.BAT_FIRST_LOSE: "bat_first_lose",
    CaseLabel.BAT_SECOND_WIN: "bat_second_win",
    CaseLabel.BAT_SECOND_LOSE: "bat_second_lose",
}

_EXIT_CODE_HELP = (
    "exit codes: 0 success, 2 input or configuration error, "
    "3 model or regime error, 4 validation failure"
)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", metavar="PATH", help="match CSV file to load")
    common.add_argument("--config", metavar="PATH", help="flat key=value config file")
    common.add_argument("--venues", metavar="A,B,C", help="restrict to these venues (comma-separated)")
    common.add_argument(
        "--family",
        choices=("nb", "normal", "logistic"),
        help="distribution family to fit (default nb)",
    )
    common.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, metavar="N", help="root RNG seed (default 0)")
    common.add_argument(
        "--target-grid", metavar="T1,T2,...", help="targets for report tables (default 300,315,330,340,350)"
    )
    common.add_argument(
        "--min-sample-size", type=int, metavar="N", help="smallest fittable case sample (default 10)"
    )
    common.add_argument(
        "--quantile-cap", type=int, metavar="N", help="hard ceiling for discrete quantiles (default 2000)"
    )
    common.add_argument(
        "--curve-max-score", type=int, metavar="N", help="last score in survival curves (default 600)"
    )

    parser = argparse.ArgumentParser(
        prog="fairchase",
        description="Venue-specific run distributions and bias-corrected chase targets for ODI cricket.",
        epilog=_EXIT_CODE_HELP,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser(
        "summary", parents=[common], help="per-venue match counts, win rates, and scoring averages"
    )
    sub.add_parser("fit", parents=[common], help="fit the four case distributions per venue (JSON)")
    sub.add_parser("curves", parents=[common], help="write per-venue survival-curve CSVs to --out")

    revise = sub.add_parser("revise", parents=[common], help="equalized chase target for one venue")
    revise.add_argument("--venue", required=True, help="venue to model")
    revise.add_argument("--target", required=True, type=int, help="actual first-innings target")

    sub.add_parser(
        "report", parents=[common], help="revised targets and bias totals across venues and families"
    )

    simulate = sub.add_parser(
        "simulate", parents=[common], help="Monte Carlo check of the equalization identity (JSON)"
    )
    simulate.add_argument("--venue", required=True, help="venue to model")
    simulate.add_argument("--target", required=True, type=int, help="actual first-innings target")
    simulate.add_argument("--trials", type=int, default=100_000, help="simulation trials (default 100000)")

    generate = sub.add_parser(
        "generate", parents=[common], help="write a synthetic match CSV with known parameters"
    )
    generate.add_argument("--num-venues", type=int, default=2, help="synthetic venues (default 2)")
    generate.add_argument(
        "--matches", type=int, default=100, help="decisive matches per venue (default 100)"
    )

    sub.add_parser("validate", parents=[common], help="run the invariant suite against the dataset")
    return parser


def _resolve_config(args: argparse.Namespace) -> AppConfig:
    config = AppConfig()
    if args.config:
        config = load_config_file(args.config, config)
    overrides = {}
    if args.data is not None:
        overrides["data_path"] = args.data
    if args.venues is not None:
        overrides["venues"] = parse_venue_list(args.venues)
    if args.family is not None:
        overrides["family"] = parse_family(args.family)
    if args.format is not None:
        overrides["output_format"] = args.format
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.target_grid is not None:
        overrides["target_grid"] = parse_target_grid(args.target_grid)
    if args.min_sample_size is not None:
        overrides["min_sample_size"] = args.min_sample_size
    if args.quantile_cap is not None:
        overrides["quantile_cap"] = args.quantile_cap
    if args.curve_max_score is not None:
        overrides["curve_max_score"] = args.curve_max_score
    return replace(config, **overrides)


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_dataset(config: AppConfig) -> tuple[list[MatchRecord], CategorizedScores]:
    if not config.data_path:
        raise FairchaseError("no input data; pass --data PATH or set data in the config file")
    records = parse_matches(config.data_path)
    return records, categorize(records)


def _selected_venues(dataset: CategorizedScores, config: AppConfig) -> list[str]:
    if config.venues is None:
        return venue_names(dataset)
    resolved = sorted(resolve_venue(dataset, v) for v in config.venues)
    if OVERALL_VENUE in resolved:
        resolved.remove(OVERALL_VENUE)
        resolved.append(OVERALL_VENUE)
    return resolved


def _slug(venue: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in venue.lower()).strip("-") or "venue"


def _cmd_summary(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    rows = summarize(dataset, config.venues)
    text = summary_to_csv(rows) if config.output_format == "csv" else summary_to_json(rows)
    _emit(text, args.out)
    return 0


def _cmd_fit(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    fit_config = config.fit_config()
    entries = []
    for name in _selected_venues(dataset, config):
        for label in CaseLabel:
            try:
                dist = fit(dataset[name][label].scores, config.family, fit_config)
            except _FIT_ERRORS as exc:
                _warn(f"skipping {name}/{_CASE_COLUMNS[label]}: {exc}")
                continue
            entries.append((name, label.value, dist))
    _emit(fitted_to_json(entries), args.out)
    return 0


def _curves_csv(fits: Mapping[CaseLabel, FittedDist], max_score: int) -> str:
    lines = ["score," + ",".join(_CASE_COLUMNS[label] for label in CaseLabel)]
    for score in range(-1, max_score + 1):
        values = ",".join(f"{survival(fits[label], score):.12g}" for label in CaseLabel)
        lines.append(f"{score},{values}")
    return "\n".join(lines) + "\n"


def _cmd_curves(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    if not args.out:
        raise FairchaseError("curves writes one CSV per venue; pass --out DIRECTORY")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    fit_config = config.fit_config()
    for name in _selected_venues(dataset, config):
        fits = {}
        try:
            for label in CaseLabel:
                fits[label] = fit(dataset[name][label].scores, config.family, fit_config)
        except _FIT_ERRORS as exc:
            _warn(f"skipping venue {name!r}: {exc}")
            continue
        path = out_dir / f"curves_{_slug(name)}.csv"
        path.write_text(_curves_csv(fits, config.curve_max_score), encoding="utf-8")
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_revise(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    if args.target < LOW_TARGET_WARNING_THRESHOLD:
        _warn(
            f"target {args.target} is below {LOW_TARGET_WARNING_THRESHOLD}; "
            "the model is meant for tough chases and may be unreliable here"
        )
    model = build_model(dataset, args.venue, config.family, config.fit_config())
    result = revise_target(model, args.target)
    if config.output_format == "csv":
        text = (
            "venue,family,actual_target,revised_target,q_internal\n"
            f"{model.venue},{model.family.value},{result.actual},{result.revised},"
            f"{result.q_internal:.6f}\n"
        )
    else:
        text = json.dumps(
            {
                "venue": model.venue,
                "family": model.family.value,
                "actual_target": result.actual,
                "revised_target": result.revised,
                "q_internal": result.q_internal,
            },
            indent=2,
        )
    _emit(text, args.out)
    return 0


def _cmd_report(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    names = _selected_venues(dataset, config)
    filtered = {name: dataset[name] for name in names}
    families = (
        (config.family,)
        if args.family is not None
        else (Family.NEGBIN, Family.NORMAL, Family.LOGISTIC)
    )
    report = revision_report(filtered, families, config.target_grid, config.fit_config())
    text = report_to_csv(report) if config.output_format == "csv" else report_to_json(report)
    _emit(text, args.out)
    return 0


def _cmd_simulate(args: argparse.Namespace, config: AppConfig) -> int:
    _, dataset = _load_dataset(config)
    model = build_model(dataset, args.venue, config.family, config.fit_config())
    result = check_equalization(
        SimConfig(model=model, actual_target=args.target, n_trials=args.trials, seed=config.seed)
    )
    if result.degenerate:
        _warn("an estimate landed on the boundary; its standard error is degenerate")
    _emit(json.dumps(result.to_dict(), indent=2), args.out)
    return 0


def _cmd_generate(args: argparse.Namespace, config: AppConfig) -> int:
    specs = default_synthetic_spec(args.num_venues, args.matches)
    records = generate_synthetic_dataset(specs, config.seed)
    _emit(serialize_matches(records), args.out)
    return 0


def _cmd_validate(args: argparse.Namespace, config: AppConfig) -> int:
    records, dataset = _load_dataset(config)
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append((name, ok, detail))

    reparsed = parse_matches(io.StringIO(serialize_matches(records)))
    check("csv round trip preserves records", reparsed == records)

    real_venues = [v for v in venue_names(dataset) if v != OVERALL_VENUE]
    pairing_ok = all(
        dataset[v][CaseLabel.BAT_FIRST_WIN].size == dataset[v][CaseLabel.BAT_SECOND_LOSE].size
        and dataset[v][CaseLabel.BAT_SECOND_WIN].size == dataset[v][CaseLabel.BAT_FIRST_LOSE].size
        for v in venue_names(dataset)
    )
    check("winner and loser sample sizes pair up", pairing_ok)

    expected: Counter = Counter()
    for rec in records:
        if rec.decisive and not rec.reduced_overs:
            expected[(rec.venue.casefold(), rec.outcome.value)] += 1
    counts_ok = all(
        dataset[v][CaseLabel.BAT_FIRST_WIN].size == expected[(v.casefold(), "BatFirstWin")]
        and dataset[v][CaseLabel.BAT_SECOND_WIN].size == expected[(v.casefold(), "BatSecondWin")]
        for v in real_venues
    )
    check("case sample sizes match decisive record counts", counts_ok)

    pct_ok = all(
        abs(row.pct_bat_first_win + row.pct_bat_second_win - 100.0) <= 1e-9
        for row in summarize(dataset)
    )
    check("win percentages sum to 100", pct_ok)

    fit_config = config.fit_config()
    selected = _selected_venues(dataset, config)
    modeled = []
    for name in selected:
        try:
            modeled.append((name, build_model(dataset, name, config.family, fit_config)))
        except _FIT_ERRORS as exc:
            _warn(f"validate: skipping venue {name!r}: {exc}")

    for name, model in modeled:
        for dist_name, dist in (
            ("bat_first_win", model.dist_bat_first_win),
            ("bat_second_win", model.dist_bat_second_win),
        ):
            total = sum(pmf(dist, x) for x in range(0, config.quantile_cap + 1))
            check(f"{name}/{dist_name}: pmf sums to 1", abs(total - 1.0) <= 1e-9, f"sum={total:.12f}")
            monotone = all(
                survival(dist, x + 1) <= survival(dist, x) + 1e-12
                for x in range(0, config.curve_max_score)
            )
            check(f"{name}/{dist_name}: survival non-increasing", monotone)

        residuals = []
        revised_seq = []
        for actual in config.target_grid:
            try:
                result = revise_target(model, actual)
            except TargetUnattainable:
                continue
            gap = abs(
                survival(model.dist_bat_second_win, result.revised)
                - model.win_ratio * survival(model.dist_bat_first_win, actual)
            )
            residuals.append(gap - pmf(model.dist_bat_second_win, result.revised))
            revised_seq.append(result.revised)
        check(
            f"{name}: equalization identity within one pmf step",
            all(r <= 1e-12 for r in residuals),
        )
        check(
            f"{name}: revised target non-decreasing in actual target",
            all(a <= b for a, b in zip(revised_seq, revised_seq[1:])),
        )

    failures = 0
    for name, ok, detail in checks:
        status = "ok" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{status}: {name}{suffix}")
        failures += 0 if ok else 1
    print(f"validate: {len(checks)} checks, {failures} failures")
    return 4 if failures else 0


_COMMANDS: dict[str, Callable[[argparse.Namespace, AppConfig], int]] = {
    "summary": _cmd_summary,
    "fit": _cmd_fit,
    "curves": _cmd_curves,
    "revise": _cmd_revise,
    "report": _cmd_report,
    "simulate": _cmd_simulate,
    "generate": _cmd_generate,
    "validate": _cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        return _COMMANDS[args.command](args, config)
    except _MODEL_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (FairchaseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    raise SystemExit(main())
