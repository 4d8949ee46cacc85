"""Scalar classification metrics computed from a confusion matrix.

All scores are reported on the unit scale; percent presentation is a
rendering concern. Degenerate one-vs-rest cases resolve to 0 with a warning
so that batch evaluation never aborts; the single hard error is
informedness over a slice with fewer than two gold-populated classes.

Every function is a pure function of its immutable inputs. Warnings are
appended to the optional `warn` list when one is supplied (as
`metric_suite` does), otherwise emitted through the `warnings` module.
"""

from __future__ import annotations

import math
import warnings as _warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    ClassDistribution,
    ConfusionMatrix,
    EvaluationError,
    EvaluationWarning,
    entropy,
    prevalence,
)

__all__ = [
    "METRIC_NAMES",
    "PER_CLASS_METRIC_NAMES",
    "MetricReport",
    "FMeasures",
    "InformednessResult",
    "MccResult",
    "NitResult",
    "accuracy",
    "balanced_accuracy",
    "f_measures",
    "cohen_kappa",
    "informedness",
    "mcc",
    "nit",
    "effective_class_count",
    "metric_suite",
    "delta_report",
    "task_mean",
]

METRIC_NAMES = (
    "accuracy",
    "balanced_accuracy",
    "f1_macro",
    "f1_micro",
    "kappa",
    "informedness",
    "mcc",
    "mcc_macro",
    "nit",
    "mutual_information",
)

PER_CLASS_METRIC_NAMES = ("f1", "informedness", "mcc")


def _notify(warn: list[str] | None, message: str) -> None:
    if warn is None:
        _warnings.warn(message, EvaluationWarning, stacklevel=3)
    else:
        warn.append(message)


def _require_samples(cm: ConfusionMatrix) -> None:
    if cm.n == 0:
        raise EvaluationError("empty matrix")


def effective_class_count(cm: ConfusionMatrix) -> int:
    """Number of classes with at least one gold sample."""
    return int((cm.gold_counts() > 0).sum())


def accuracy(cm: ConfusionMatrix) -> float:
    """Proportion of correctly identified samples, trace / n."""
    _require_samples(cm)
    return cm.trace() / cm.n


def balanced_accuracy(cm: ConfusionMatrix) -> float:
    """Mean recall over the classes that have at least one gold sample."""
    _require_samples(cm)
    gold = cm.gold_counts()
    populated = gold > 0
    recalls = np.diag(cm.counts)[populated] / gold[populated]
    return float(recalls.mean())


class FMeasures(NamedTuple):
    per_class: tuple[float, ...]
    macro: float
    micro: float


def f_measures(cm: ConfusionMatrix, include_gold_empty: bool = False,
               warn: list[str] | None = None) -> FMeasures:
    """Per-class F1 with macro and micro averages.

    F1_c = TP_c / (TP_c + (FP_c + FN_c) / 2). A class nothing ever touched
    scores 0 with a warning. Classes without gold samples are dropped from
    the macro mean unless `include_gold_empty` is set, which matches an
    explicitly requested label space. Micro-F1 is computed from the summed
    TP/FP/FN and equals accuracy for single-label data.
    """
    _require_samples(cm)
    tp = np.diag(cm.counts).astype(float)
    fp = cm.pred_counts().astype(float) - tp
    fn = cm.gold_counts().astype(float) - tp
    denom = tp + 0.5 * (fp + fn)
    untouched = denom == 0.0
    per_class = np.where(untouched, 0.0, tp / np.where(untouched, 1.0, denom))
    if np.any(untouched):
        names = ", ".join(cm.space.labels[i] for i in np.flatnonzero(untouched))
        _notify(warn, f"f1 undefined (class never occurs) for: {names}; scored 0")
    gold_empty = cm.gold_counts() == 0
    if include_gold_empty or not np.any(gold_empty):
        macro = float(per_class.mean())
    else:
        macro = float(per_class[~gold_empty].mean())
        names = ", ".join(cm.space.labels[i] for i in np.flatnonzero(gold_empty))
        _notify(warn, f"f1_macro excludes classes without gold samples: {names}")
    tp_sum = float(tp.sum())
    micro = tp_sum / (tp_sum + 0.5 * (float(fp.sum()) + float(fn.sum())))
    return FMeasures(tuple(float(x) for x in per_class), macro, micro)


def cohen_kappa(cm: ConfusionMatrix, warn: list[str] | None = None) -> float:
    """Agreement above chance, (p_o - p_e) / (1 - p_e).

    Chance agreement p_e multiplies the per-class gold and predicted
    marginals. Both sides constant and equal (p_e = 1) scores 0 with a
    warning. Computed from exact integer sums.
    """
    _require_samples(cm)
    pred = [int(x) for x in cm.pred_counts()]
    gold = [int(x) for x in cm.gold_counts()]
    cross = sum(p * g for p, g in zip(pred, gold))
    nn = cm.n * cm.n
    if cross == nn:
        _notify(warn, "kappa: degenerate chance agreement; scored 0")
        return 0.0
    return (cm.n * cm.trace() - cross) / (nn - cross)


class InformednessResult(NamedTuple):
    overall: float
    per_class: tuple[float, ...]


def informedness(cm: ConfusionMatrix, priors: ClassDistribution | None = None,
                 warn: list[str] | None = None) -> InformednessResult:
    """Chance-corrected share of informed decisions (multi-class Youden's J).

    Scored as a fair bet against the class odds q: a correct call on class c
    pays (1 - q_c) / q_c, any miss pays -1, and the total is divided by
    n * (C_eff - 1), where C_eff counts gold-populated classes. q defaults
    to the gold prevalence of the evaluated set, in which case the score
    reduces to (sum of recalls - 1) / (C_eff - 1), lies in
    [-1 / (C_eff - 1), 1], and equals TPR + TNR - 1 for binary data.
    Per-class values are TPR_c - FPR_c.

    Passing explicit (train-set) priors changes only the payoff odds; they
    must be strictly positive on every gold-populated class.
    """
    _require_samples(cm)
    gold = cm.gold_counts()
    populated = gold > 0
    c_eff = int(populated.sum())
    if c_eff < 2:
        raise EvaluationError("informedness undefined for one class")
    n = cm.n
    tp = np.diag(cm.counts).astype(float)
    if priors is None:
        gains = tp[populated] / gold[populated].astype(float)
    else:
        q = np.array([priors.prob_of(label, default=0.0) for label in cm.space.labels])
        bad = populated & (q <= 0.0)
        if np.any(bad):
            name = cm.space.labels[int(np.flatnonzero(bad)[0])]
            raise EvaluationError(f"invalid prior: class {name!r} has zero probability")
        gains = tp[populated] / (q[populated] * n)
        _notify(warn, "informedness uses explicit priors; the [-1/(C_eff-1), 1] "
                      "range is not guaranteed")
    overall = (float(gains.sum()) - 1.0) / (c_eff - 1)
    fp = cm.pred_counts() - np.diag(cm.counts)
    per_class: list[float] = []
    missing: list[str] = []
    for i, label in enumerate(cm.space.labels):
        if populated[i]:
            recall = cm.counts[i, i] / gold[i]
            fallout = fp[i] / (n - gold[i])
            per_class.append(float(recall - fallout))
        else:
            missing.append(label)
            per_class.append(0.0)
    if missing:
        _notify(warn, "per-class informedness undefined (no gold samples) for: "
                      + ", ".join(missing) + "; scored 0")
    return InformednessResult(overall, tuple(per_class))


class MccResult(NamedTuple):
    multiclass: float
    macro: float
    per_class: tuple[float, ...]


def mcc(cm: ConfusionMatrix, warn: list[str] | None = None) -> MccResult:
    """Correlation between predicted and true classes.

    The multiclass value is the R_K statistic,
    (n * trace - sum_c pred_c * gold_c) /
    sqrt((n^2 - sum_c pred_c^2) * (n^2 - sum_c gold_c^2)),
    computed from exact integer sums. Per-class values are one-vs-rest
    binary correlations and the macro value is their unweighted mean over
    all classes in the space. A zero denominator (a constant side) scores 0
    with a warning.
    """
    _require_samples(cm)
    n = cm.n
    pred = [int(x) for x in cm.pred_counts()]
    gold = [int(x) for x in cm.gold_counts()]
    cross = sum(p * g for p, g in zip(pred, gold))
    d_pred = n * n - sum(p * p for p in pred)
    d_gold = n * n - sum(g * g for g in gold)
    if d_pred == 0 or d_gold == 0:
        _notify(warn, "mcc: constant predictions or gold labels; multiclass scored 0")
        multiclass = 0.0
    else:
        multiclass = (n * cm.trace() - cross) / math.sqrt(d_pred * d_gold)
    per_class: list[float] = []
    degenerate: list[str] = []
    for i, label in enumerate(cm.space.labels):
        tp = int(cm.counts[i, i])
        fp = pred[i] - tp
        fn = gold[i] - tp
        tn = n - tp - fp - fn
        denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
        if denom == 0:
            degenerate.append(label)
            per_class.append(0.0)
        else:
            per_class.append((tp * tn - fp * fn) / math.sqrt(denom))
    if degenerate:
        _notify(warn, "mcc one-vs-rest undefined for: " + ", ".join(degenerate) + "; scored 0")
    macro = sum(per_class) / len(per_class)
    return MccResult(multiclass, macro, tuple(per_class))


class NitResult(NamedTuple):
    nit: float
    mutual_information: float


def nit(cm: ConfusionMatrix) -> NitResult:
    """Normalized information transfer, 2 ** (MI - log2 C).

    MI is the plug-in mutual information in bits of the empirical joint
    (pred, gold) distribution and C is the full label-space size, so an
    uninformed classifier keeps a guessing credit of 1 / C.
    """
    _require_samples(cm)
    joint = cm.counts / cm.n
    outer = joint.sum(axis=1, keepdims=True) * joint.sum(axis=0, keepdims=True)
    mask = joint > 0.0
    mi = float((joint[mask] * np.log2(joint[mask] / outer[mask])).sum())
    return NitResult(2.0 ** (mi - math.log2(len(cm.space))), mi)


@dataclass(frozen=True)
class MetricReport:
    """Named scalar metrics with per-class breakdowns for one slice."""

    n: int
    c_eff: int
    entropy_gold: float
    labels: tuple[str, ...]
    values: dict[str, float]
    per_class: dict[str, tuple[float, ...]]
    warnings: tuple[str, ...]


def metric_suite(cm: ConfusionMatrix, priors: ClassDistribution | None = None,
                 include_gold_empty: bool = False) -> MetricReport:
    """Every metric over one matrix, in a deterministic field order.

    Degenerate-case conventions surface as report warnings; informedness on
    a slice with a single gold class remains a hard error.
    """
    _require_samples(cm)
    notes: list[str] = []
    f = f_measures(cm, include_gold_empty=include_gold_empty, warn=notes)
    informed = informedness(cm, priors=priors, warn=notes)
    correlation = mcc(cm, warn=notes)
    transfer = nit(cm)
    values = {
        "accuracy": accuracy(cm),
        "balanced_accuracy": balanced_accuracy(cm),
        "f1_macro": f.macro,
        "f1_micro": f.micro,
        "kappa": cohen_kappa(cm, warn=notes),
        "informedness": informed.overall,
        "mcc": correlation.multiclass,
        "mcc_macro": correlation.macro,
        "nit": transfer.nit,
        "mutual_information": transfer.mutual_information,
    }
    per_class = {
        "f1": f.per_class,
        "informedness": informed.per_class,
        "mcc": correlation.per_class,
    }
    return MetricReport(
        n=cm.n,
        c_eff=effective_class_count(cm),
        entropy_gold=entropy(prevalence(cm)),
        labels=cm.space.labels,
        values={k: float(v) for k, v in values.items()},
        per_class=per_class,
        warnings=tuple(notes),
    )


def delta_report(system: MetricReport, baseline: MetricReport) -> MetricReport:
    """Per-metric system minus baseline, for difference rows.

    Requires matching metric sets and label spaces. n and c_eff carry over
    from the system report; entropy_gold is differenced like the metrics.
    """
    if (tuple(system.values) != tuple(baseline.values)
            or system.labels != baseline.labels
            or tuple(system.per_class) != tuple(baseline.per_class)):
        raise EvaluationError("incomparable reports")
    values = {name: system.values[name] - baseline.values[name] for name in system.values}
    per_class = {
        name: tuple(s - b for s, b in zip(system.per_class[name], baseline.per_class[name]))
        for name in system.per_class
    }
    return MetricReport(
        n=system.n,
        c_eff=system.c_eff,
        entropy_gold=system.entropy_gold - baseline.entropy_gold,
        labels=system.labels,
        values=values,
        per_class=per_class,
        warnings=(),
    )


def task_mean(reports: Sequence[MetricReport], metric: str) -> float:
    """Uniform-weighted mean of one metric across task reports."""
    if not reports:
        raise EvaluationError("no reports to average")
    try:
        return sum(report.values[metric] for report in reports) / len(reports)
    except KeyError:
        raise EvaluationError(f"metric not present in every report: {metric!r}") from None
