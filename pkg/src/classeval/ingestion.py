"""Prediction-file loading, score discretization, and baseline predictors.

Files come in as CSV/TSV (header row with `gold`, `pred`, optional `group`
columns) or JSONL (one object per line with the same keys). Labels are
trimmed of surrounding whitespace but otherwise opaque; interior whitespace
and case are preserved.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings as _warnings
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .core import (
    ClassDistribution,
    ClassificationSet,
    EvaluationError,
    EvaluationWarning,
    LabelSpace,
)

__all__ = [
    "PREDICTION_FORMATS",
    "PredictionRecord",
    "RecordSchema",
    "GroupedDataset",
    "parse_predictions",
    "discretize_scores",
    "baseline",
    "load_distribution",
    "load_gold_labels",
]

PREDICTION_FORMATS = ("csv", "tsv", "jsonl")
LABEL_POLICIES = ("union", "strict")


@dataclass(frozen=True)
class PredictionRecord:
    """One scored sample; weight is reserved for future use and is always 1."""

    gold: str
    pred: str
    group: str | None = None
    weight: int = 1


@dataclass(frozen=True)
class RecordSchema:
    """Column (CSV/TSV) or key (JSONL) names for the three record fields."""

    gold: str = "gold"
    pred: str = "pred"
    group: str = "group"


class GroupedDataset:
    """Parsed records plus their label space and sub-task grouping.

    Records keep file order; groups keep first-appearance order. Each group
    can be evaluated in its own inferred label space (the default, matching
    per-sub-task class counts) or in the shared global space.
    """

    def __init__(self, records: Iterable[PredictionRecord], space: LabelSpace,
                 warnings: Iterable[str] = ()):
        self.records = tuple(records)
        self.space = space
        self.warnings = tuple(warnings)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def group_keys(self) -> tuple[str | None, ...]:
        return tuple(dict.fromkeys(record.group for record in self.records))

    def overall(self) -> ClassificationSet:
        """All samples as one set over the global space."""
        return ClassificationSet(((r.gold, r.pred) for r in self.records), space=self.space)

    def groups(self, shared_space: bool = False) -> dict[str | None, ClassificationSet]:
        """Per-group sets, keyed in first-appearance order.

        With `shared_space` every group uses the global space; otherwise
        each group gets its own first-seen space.
        """
        buckets: dict[str | None, list[tuple[str, str]]] = {}
        for record in self.records:
            buckets.setdefault(record.group, []).append((record.gold, record.pred))
        space = self.space if shared_space else None
        return {key: ClassificationSet(pairs, space=space) for key, pairs in buckets.items()}


def _open_text(source: str | IO) -> tuple[IO, bool]:
    if isinstance(source, (str, bytes)):
        return open(source, "r", encoding="utf-8", newline=""), True
    if isinstance(source, io.TextIOBase):
        return source, False
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def _clean(value: object) -> str:
    return str(value).strip()


def _iter_delimited(stream: IO, delimiter: str, schema: RecordSchema):
    reader = csv.DictReader(stream, delimiter=delimiter)
    if reader.fieldnames is None:
        raise EvaluationError("schema error: missing header row")
    fields = [name.strip() if name else name for name in reader.fieldnames]
    for required in (schema.gold, schema.pred):
        if required not in fields:
            raise EvaluationError(f"schema error: missing column {required!r}")
    has_group = schema.group in fields
    lookup = dict(zip(reader.fieldnames, fields))
    for row in reader:
        line = reader.line_num
        named = {lookup.get(k, k): v for k, v in row.items() if k is not None}
        gold = named.get(schema.gold)
        pred = named.get(schema.pred)
        if gold is None or pred is None:
            raise EvaluationError(f"malformed row at line {line}: missing value")
        group = named.get(schema.group) if has_group else None
        yield line, _clean(gold), _clean(pred), (_clean(group) if group is not None else "")


def _iter_jsonl(stream: IO, schema: RecordSchema):
    for line_no, raw in enumerate(stream, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError:
            raise EvaluationError(f"malformed row at line {line_no}: invalid JSON") from None
        if not isinstance(obj, dict):
            raise EvaluationError(f"malformed row at line {line_no}: expected an object")
        for required in (schema.gold, schema.pred):
            if required not in obj:
                raise EvaluationError(f"schema error at line {line_no}: missing key {required!r}")
        group = obj.get(schema.group)
        yield line_no, _clean(obj[schema.gold]), _clean(obj[schema.pred]), (
            _clean(group) if group is not None else "")


def parse_predictions(source: str | IO, format: str = "csv", policy: str = "union",
                      labels: Sequence[str] | None = None,
                      schema: RecordSchema = RecordSchema()) -> GroupedDataset:
    """Read (gold, pred, group) records from a prediction file.

    `policy` controls the label space: "union" infers it from the data in
    first-seen order (an explicit `labels` sequence, when given, wins the
    front of the ordering), while "strict" closes the space to `labels` and
    rejects anything outside it with the offending line number. Labels that
    only ever occur as predictions are reported as a dataset warning.
    """
    if format not in PREDICTION_FORMATS:
        raise EvaluationError(f"unknown prediction format: {format!r}")
    if policy not in LABEL_POLICIES:
        raise EvaluationError(f"unknown label policy: {policy!r}")
    if policy == "strict" and labels is None:
        raise EvaluationError("strict policy requires an explicit label space")

    stream, owned = _open_text(source)
    try:
        if format == "jsonl":
            rows = _iter_jsonl(stream, schema)
        else:
            rows = _iter_delimited(stream, "\t" if format == "tsv" else ",", schema)

        space = LabelSpace(labels) if labels is not None else None
        records: list[PredictionRecord] = []
        observed: dict[str, None] = dict.fromkeys(space.labels) if space else {}
        in_gold: set[str] = set()
        in_pred: set[str] = set()
        for line, gold, pred, group in rows:
            if not gold or not pred:
                raise EvaluationError(f"malformed row at line {line}: empty label")
            if policy == "strict":
                for value in (gold, pred):
                    if value not in space:  # type: ignore[operator]
                        raise EvaluationError(f"unknown label at line {line}: {value!r}")
            else:
                observed.setdefault(gold)
                observed.setdefault(pred)
            in_gold.add(gold)
            in_pred.add(pred)
            records.append(PredictionRecord(gold=gold, pred=pred, group=group or None))
    finally:
        if owned:
            stream.close()

    if policy == "union":
        space = LabelSpace(observed) if observed else None
    if space is None:
        raise EvaluationError("empty classification set")

    notes = []
    pred_only = [label for label in space.labels if label in in_pred and label not in in_gold]
    if pred_only:
        notes.append("labels only in predictions: " + ", ".join(pred_only))
    return GroupedDataset(records, space, notes)


def discretize_scores(values: Iterable[float], lo: float, hi: float) -> list[str]:
    """Map real scores onto the integer classes inside [lo, hi].

    Rounds to the nearest integer with halves away from zero, then clamps to
    the boundary classes; idempotent on already-integral values. Scores
    outside [lo - 0.5, hi + 0.5] are clamped with a warning; NaN is an error.
    """
    if not lo < hi:
        raise EvaluationError("lo must be below hi")
    low = math.ceil(lo)
    high = math.floor(hi)
    if low > high:
        raise EvaluationError("no integer classes inside [lo, hi]")
    out: list[str] = []
    for value in values:
        value = float(value)
        if math.isnan(value):
            raise EvaluationError("NaN score")
        if value < lo - 0.5 or value > hi + 0.5:
            _warnings.warn(f"score {value!r} outside [{lo - 0.5}, {hi + 0.5}]; clamped",
                           EvaluationWarning, stacklevel=2)
        rounded = math.floor(value + 0.5) if value >= 0 else math.ceil(value - 0.5)
        out.append(str(int(min(max(rounded, low), high))))
    return out


def baseline(mode: str, train: ClassDistribution, gold: Sequence[str],
             seed: int | None = None) -> ClassificationSet:
    """Synthesize uninformed predictions for a gold label sequence.

    "most-common" predicts the constant argmax of the train distribution
    (ties resolve to the earliest label); "prevalence-sample" draws i.i.d.
    from it and requires a seed for reproducibility.
    """
    if mode not in ("most-common", "prevalence-sample"):
        raise EvaluationError(f"unknown baseline mode: {mode!r}")
    gold = [str(g) for g in gold]
    if not gold:
        raise EvaluationError("empty classification set")
    for value in gold:
        if value not in train.space:
            raise EvaluationError(f"unknown label: {value!r}")
    if mode == "most-common":
        constant = train.argmax_label()
        preds = [constant] * len(gold)
    else:
        if seed is None:
            raise EvaluationError("prevalence-sample requires a seed")
        rng = np.random.default_rng(seed)
        draws = rng.choice(len(train.space), size=len(gold), p=train.probs)
        preds = [train.space.labels[i] for i in draws.tolist()]
    return ClassificationSet(zip(gold, preds), space=train.space)


def _distribution_from_mapping(entries: Sequence[tuple[str, float]]) -> ClassDistribution:
    if not entries:
        raise EvaluationError("empty distribution")
    labels = [label for label, _ in entries]
    if len(set(labels)) != len(labels):
        raise EvaluationError("duplicate label in distribution")
    values = np.asarray([value for _, value in entries], dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values < 0.0):
        raise EvaluationError("not a distribution: negative or non-finite entries")
    if np.all(values == np.floor(values)):
        total = float(values.sum())
        if total <= 0.0:
            raise EvaluationError("not a distribution: counts sum to zero")
    else:
        total = float(values.sum())
        if abs(total - 1.0) > 1e-6:
            raise EvaluationError(f"not a distribution: probabilities sum to {total:.6g}")
    return ClassDistribution(LabelSpace(labels), values / total)


def load_distribution(source: str | IO) -> ClassDistribution:
    """Read a class distribution from CSV (`label,count` header) or JSON.

    All-integral values are treated as counts and normalized; anything else
    must already be probabilities summing to 1 within 1e-6.
    """
    stream, owned = _open_text(source)
    try:
        text = stream.read()
    finally:
        if owned:
            stream.close()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            raise EvaluationError("malformed distribution: invalid JSON") from None
        if not isinstance(obj, dict):
            raise EvaluationError("malformed distribution: expected an object")
        entries = [(_clean(k), float(v)) for k, v in obj.items()]
    else:
        reader = csv.reader(io.StringIO(text))
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
        if len(rows) < 2 or len(rows[0]) < 2:
            raise EvaluationError("malformed distribution: expected a label,count header and rows")
        entries = []
        for row in rows[1:]:
            if len(row) < 2:
                raise EvaluationError("malformed distribution: short row")
            try:
                entries.append((_clean(row[0]), float(row[1])))
            except ValueError:
                raise EvaluationError(f"malformed distribution: bad number {row[1]!r}") from None
    return _distribution_from_mapping(entries)


def load_gold_labels(source: str, format: str | None = None) -> list[str]:
    """Read a gold label sequence from CSV/TSV (`gold` column), JSONL, or
    plain text with one label per line."""
    if format is None:
        lowered = source.lower()
        if lowered.endswith(".csv"):
            format = "csv"
        elif lowered.endswith(".tsv"):
            format = "tsv"
        elif lowered.endswith(".jsonl"):
            format = "jsonl"
        else:
            format = "text"
    with open(source, "r", encoding="utf-8", newline="") as stream:
        if format in ("csv", "tsv"):
            reader = csv.DictReader(stream, delimiter="\t" if format == "tsv" else ",")
            if reader.fieldnames is None or "gold" not in [f.strip() for f in reader.fieldnames]:
                raise EvaluationError("schema error: missing column 'gold'")
            key = next(f for f in reader.fieldnames if f.strip() == "gold")
            labels = [_clean(row[key]) for row in reader]
        elif format == "jsonl":
            labels = []
            for line_no, raw in enumerate(stream, start=1):
                if not raw.strip():
                    continue
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError:
                    raise EvaluationError(f"malformed row at line {line_no}: invalid JSON") from None
                if not isinstance(obj, dict) or "gold" not in obj:
                    raise EvaluationError(f"schema error at line {line_no}: missing key 'gold'")
                labels.append(_clean(obj["gold"]))
        else:
            labels = [line.strip() for line in stream if line.strip()]
    if not labels or any(not label for label in labels):
        raise EvaluationError("empty classification set" if not labels else "empty label")
    return labels
