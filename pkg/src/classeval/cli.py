"""Command-line interface: evaluate, compare, simulate, sweep, baseline.

Payloads go to stdout (or --out), diagnostics and warnings to stderr.
Exit codes: 0 success (possibly with warnings), 1 evaluation error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from .core import ClassificationSet, EvaluationError, LabelSpace, build_confusion_matrix
from .ingestion import (
    PREDICTION_FORMATS,
    baseline,
    load_distribution,
    load_gold_labels,
    parse_predictions,
)
from .metrics import delta_report, metric_suite
from .render import OUTPUT_FORMATS, render_comparison, render_evaluation
from .simulation import parse_prevalence_spec, sweep

__all__ = ["main", "build_parser"]


class UsageError(Exception):
    """Bad flag values; reported through argparse with exit code 2."""


def _existing_file(path: str) -> str:
    if not os.path.isfile(path):
        raise argparse.ArgumentTypeError(f"no such file: {path}")
    return path


def _sniff_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    lowered = path.lower()
    for fmt in PREDICTION_FORMATS:
        if lowered.endswith("." + fmt):
            return fmt
    raise UsageError(f"cannot infer format of {path!r}; pass --pred-format")


def _split_labels(raw: str | None) -> list[str] | None:
    if raw is None:
        return None
    labels = [piece.strip() for piece in raw.split(",")]
    if any(not label for label in labels):
        raise UsageError("--labels entries must be non-empty")
    return labels


def _split_floats(raw: str, flag: str) -> list[float]:
    try:
        values = [float(piece) for piece in raw.split(",") if piece.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects a comma-separated list of numbers") from None
    if not values:
        raise UsageError(f"{flag} is empty")
    return values


def _check_unit(value: float, flag: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{flag} must be in [0, 1]")
    return value


def _check_positive(value: int, flag: str) -> int:
    if value < 1:
        raise UsageError(f"{flag} must be at least 1")
    return value


def _evaluate_dataset(args, path: str):
    fmt = _sniff_format(path, args.pred_format)
    labels = _split_labels(args.labels)
    if args.policy == "strict" and labels is None:
        raise UsageError("--policy strict requires --labels")
    return parse_predictions(path, fmt, policy=args.policy, labels=labels), labels


def _cmd_evaluate(args) -> tuple[str, list[str]]:
    dataset, labels = _evaluate_dataset(args, args.pred)
    priors = load_distribution(args.priors) if args.priors else None
    include_empty = labels is not None
    diagnostics = list(dataset.warnings)

    overall = metric_suite(build_confusion_matrix(dataset.overall()),
                           priors=priors, include_gold_empty=include_empty)
    diagnostics += overall.warnings

    groups = None
    if args.group:
        shared = args.shared_space or args.policy == "strict"
        groups = {}
        for key, sample in dataset.groups(shared_space=shared).items():
            if key is None:
                continue
            report = metric_suite(build_confusion_matrix(sample), priors=priors,
                                  include_gold_empty=include_empty and shared)
            groups[key] = report
            diagnostics += [f"group {key!r}: {note}" for note in report.warnings]
        if not groups:
            diagnostics.append("no group column in input; grouped output matches overall")
            groups = {}

    rendered = render_evaluation(overall, groups, fmt=args.format, percent=args.percent)
    return rendered.payload, diagnostics


def _cmd_compare(args) -> tuple[str, list[str]]:
    system_ds, labels = _evaluate_dataset(args, args.system)
    baseline_ds, _ = _evaluate_dataset(args, args.baseline)
    priors = load_distribution(args.priors) if args.priors else None
    include_empty = labels is not None

    if args.policy == "strict":
        shared = system_ds.space
    else:
        merged = dict.fromkeys(system_ds.space.labels)
        for label in baseline_ds.space.labels:
            merged.setdefault(label)
        shared = LabelSpace(merged)
    system_set = ClassificationSet(((r.gold, r.pred) for r in system_ds.records), space=shared)
    baseline_set = ClassificationSet(((r.gold, r.pred) for r in baseline_ds.records), space=shared)

    diagnostics = list(system_ds.warnings) + list(baseline_ds.warnings)
    system_report = metric_suite(build_confusion_matrix(system_set), priors=priors,
                                 include_gold_empty=include_empty)
    baseline_report = metric_suite(build_confusion_matrix(baseline_set), priors=priors,
                                   include_gold_empty=include_empty)
    diagnostics += [f"system: {note}" for note in system_report.warnings]
    diagnostics += [f"baseline: {note}" for note in baseline_report.warnings]
    delta = delta_report(system_report, baseline_report)

    rendered = render_comparison(system_report, baseline_report, delta,
                                 fmt=args.format, percent=args.percent)
    return rendered.payload, diagnostics


def _sweep_payload(prevalences, powers, args, runs: int, workers: int) -> str:
    result = sweep(prevalences, powers, n=args.n, seed=args.seed,
                   runs=runs, workers=workers)
    return result.to_csv(scale=100.0 if args.percent else 1.0)


def _cmd_simulate(args) -> tuple[str, list[str]]:
    _check_unit(args.power, "--power")
    _check_positive(args.n, "--n")
    try:
        parse_prevalence_spec(args.prevalence)
    except EvaluationError as exc:
        raise UsageError(str(exc)) from None
    return _sweep_payload([args.prevalence], [args.power], args, runs=1, workers=1), []


def _cmd_sweep(args) -> tuple[str, list[str]]:
    powers = [_check_unit(p, "--powers") for p in _split_floats(args.powers, "--powers")]
    specs = [piece.strip() for piece in args.prevalences.split(";") if piece.strip()]
    if not specs:
        raise UsageError("--prevalences is empty")
    for spec in specs:
        try:
            parse_prevalence_spec(spec)
        except EvaluationError as exc:
            raise UsageError(str(exc)) from None
    _check_positive(args.n, "--n")
    _check_positive(args.runs, "--runs")
    _check_positive(args.workers, "--workers")
    return _sweep_payload(specs, powers, args, runs=args.runs, workers=args.workers), []


def _cmd_baseline(args) -> tuple[str, list[str]]:
    if args.mode == "prevalence-sample" and args.seed is None:
        raise UsageError("--seed is required with --mode prevalence-sample")
    train = load_distribution(args.train)
    gold = load_gold_labels(args.gold)
    predictions = baseline(args.mode, train, gold, seed=args.seed)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["gold", "pred"])
    writer.writerows(predictions.pairs)
    return buffer.getvalue(), []


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--pred-format", choices=PREDICTION_FORMATS, default=None,
                        help="input format (default: inferred from the extension)")
    parser.add_argument("--labels", default=None,
                        help="comma-separated label space; order is preserved in reports")
    parser.add_argument("--policy", choices=("union", "strict"), default="union",
                        help="label policy: infer the space (union) or close it (strict)")
    parser.add_argument("--priors", type=_existing_file, default=None,
                        help="train class distribution file; affects informedness only")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default="table",
                        help="output rendering")
    parser.add_argument("--percent", action="store_true",
                        help="scale metric values by 100")
    parser.add_argument("--out", default=None, help="write payload to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="classeval",
        description="Chance-corrected classification evaluation over prediction files.")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("evaluate", help="score one prediction file")
    evaluate.add_argument("--pred", type=_existing_file, required=True,
                          help="prediction file with gold/pred (and optional group) fields")
    evaluate.add_argument("--group", action="store_true",
                          help="add one report per sub-task group")
    evaluate.add_argument("--shared-space", action="store_true",
                          help="evaluate groups in the global label space "
                               "instead of per-group spaces")
    _add_shared_flags(evaluate)
    evaluate.set_defaults(handler=_cmd_evaluate)

    compare = commands.add_parser("compare", help="system vs baseline with delta rows")
    compare.add_argument("--system", type=_existing_file, required=True)
    compare.add_argument("--baseline", type=_existing_file, required=True)
    _add_shared_flags(compare)
    compare.set_defaults(handler=_cmd_compare)

    simulate_cmd = commands.add_parser("simulate", help="one synthetic classifier point")
    simulate_cmd.add_argument("--prevalence", required=True,
                              help="prevalence spec: 'uniform-K', a skew p, or 'p1,p2,...'")
    simulate_cmd.add_argument("--power", type=float, required=True,
                              help="probability of an informed (correct) decision")
    simulate_cmd.add_argument("--n", type=int, default=100000, help="samples per run")
    simulate_cmd.add_argument("--seed", type=int, default=0)
    simulate_cmd.add_argument("--percent", action="store_true")
    simulate_cmd.add_argument("--out", default=None)
    simulate_cmd.set_defaults(handler=_cmd_simulate, format="csv")

    sweep_cmd = commands.add_parser("sweep", help="metric curves over a parameter grid")
    sweep_cmd.add_argument("--powers", required=True, help="comma-separated power grid")
    sweep_cmd.add_argument("--prevalences", required=True,
                           help="semicolon-separated prevalence specs")
    sweep_cmd.add_argument("--n", type=int, default=100000, help="samples per run")
    sweep_cmd.add_argument("--seed", type=int, default=0)
    sweep_cmd.add_argument("--runs", type=int, default=1, help="repetitions per grid point")
    sweep_cmd.add_argument("--workers", type=int, default=1,
                           help="parallel workers; output is identical for any value")
    sweep_cmd.add_argument("--percent", action="store_true")
    sweep_cmd.add_argument("--out", default=None)
    sweep_cmd.set_defaults(handler=_cmd_sweep, format="csv")

    baseline_cmd = commands.add_parser("baseline", help="write an uninformed predictor file")
    baseline_cmd.add_argument("--mode", choices=("most-common", "prevalence-sample"),
                              required=True)
    baseline_cmd.add_argument("--train", type=_existing_file, required=True,
                              help="train class distribution (CSV label,count or JSON)")
    baseline_cmd.add_argument("--gold", type=_existing_file, required=True,
                              help="gold labels (CSV/TSV gold column, JSONL, or plain lines)")
    baseline_cmd.add_argument("--seed", type=int, default=None)
    baseline_cmd.add_argument("--out", default=None)
    baseline_cmd.set_defaults(handler=_cmd_baseline)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, diagnostics = args.handler(args)
    except UsageError as exc:
        parser.error(str(exc))
        return 2  # unreachable; parser.error exits
    except EvaluationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for note in diagnostics:
        print(f"warning: {note}", file=sys.stderr)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
