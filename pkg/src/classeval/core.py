"""Confusion-matrix primitives shared by every metric and report path.

Rows of a matrix index the predicted class and columns the true class.
Counts stay exact integers; probabilities are derived in double precision
only at the point of use. All types here are immutable after construction
and safe to share between threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, NamedTuple

import numpy as np

__all__ = [
    "EvaluationError",
    "EvaluationWarning",
    "LabelSpace",
    "ClassDistribution",
    "ClassificationSet",
    "ConfusionMatrix",
    "ContingencyCells",
    "build_confusion_matrix",
    "per_class_contingency",
    "prevalence",
    "bias",
    "entropy",
]


class EvaluationError(ValueError):
    """Input cannot be evaluated (empty data, unknown labels, bad priors)."""


class EvaluationWarning(UserWarning):
    """A degenerate case was resolved by a documented convention."""


class LabelSpace:
    """Ordered, duplicate-free collection of class identifiers.

    Identifiers are opaque strings compared byte-exactly; no case folding or
    trimming happens at this level. Order is significant and stable: two
    spaces built from the same sequence compare equal.
    """

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        self.labels: tuple[str, ...] = tuple(labels)
        if not self.labels:
            raise EvaluationError("label space is empty")
        self._index: dict[str, int] = {}
        for position, label in enumerate(self.labels):
            if label in self._index:
                raise EvaluationError(f"duplicate label: {label!r}")
            self._index[label] = position

    @classmethod
    def from_observed(cls, identifiers: Iterable[str]) -> "LabelSpace":
        """Space containing each identifier once, in first-seen order."""
        return cls(dict.fromkeys(identifiers))

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise EvaluationError(f"unknown label: {label!r}") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LabelSpace) and self.labels == other.labels

    def __hash__(self) -> int:
        return hash(self.labels)

    def __repr__(self) -> str:
        return f"LabelSpace({list(self.labels)!r})"


class ClassDistribution:
    """Probability vector over a label space (prevalence, bias, or priors)."""

    __slots__ = ("space", "probs")

    def __init__(self, space: LabelSpace, probs: Iterable[float]):
        arr = np.asarray(probs, dtype=float)
        if arr.shape != (len(space),):
            raise EvaluationError("distribution length does not match label space")
        if np.any(arr < 0.0) or np.any(arr > 1.0 + 1e-9):
            raise EvaluationError("not a distribution: entries outside [0, 1]")
        total = float(arr.sum())
        if abs(total - 1.0) > 1e-9:
            raise EvaluationError(f"not a distribution: entries sum to {total:.12g}")
        arr = arr.copy()
        arr.setflags(write=False)
        self.space = space
        self.probs = arr

    def prob_of(self, label: str, default: float | None = None) -> float:
        """Probability of one label; `default` stands in for absent labels."""
        if label in self.space:
            return float(self.probs[self.space.index_of(label)])
        if default is None:
            raise EvaluationError(f"unknown label: {label!r}")
        return default

    def argmax_label(self) -> str:
        """Most probable label; ties resolve to the earliest in space order."""
        return self.space.labels[int(np.argmax(self.probs))]

    def __repr__(self) -> str:
        pairs = ", ".join(f"{l}: {p:.4g}" for l, p in zip(self.space.labels, self.probs))
        return f"ClassDistribution({{{pairs}}})"


class ClassificationSet:
    """Ordered (gold, pred) pairs plus the label space they live in.

    Reducing the set to a confusion matrix discards only the ordering. When
    no space is given one is inferred in first-seen order, gold before pred
    within each pair.
    """

    __slots__ = ("pairs", "space", "gold_indices", "pred_indices")

    def __init__(self, pairs: Iterable[tuple[str, str]], space: LabelSpace | None = None):
        self.pairs: tuple[tuple[str, str], ...] = tuple((gold, pred) for gold, pred in pairs)
        if space is None:
            if not self.pairs:
                raise EvaluationError("empty classification set")
            seen: dict[str, None] = {}
            for gold, pred in self.pairs:
                seen.setdefault(gold)
                seen.setdefault(pred)
            space = LabelSpace(seen)
        self.space = space
        index = space._index
        n = len(self.pairs)
        try:
            self.gold_indices = np.fromiter((index[g] for g, _ in self.pairs), dtype=np.int64, count=n)
            self.pred_indices = np.fromiter((index[p] for _, p in self.pairs), dtype=np.int64, count=n)
        except KeyError as exc:
            raise EvaluationError(f"unknown label: {exc.args[0]!r}") from None
        self.gold_indices.setflags(write=False)
        self.pred_indices.setflags(write=False)

    def __len__(self) -> int:
        return len(self.pairs)

    def __repr__(self) -> str:
        return f"ClassificationSet(n={len(self.pairs)}, classes={len(self.space)})"


class ConfusionMatrix:
    """C x C grid of non-negative counts; rows = predicted, columns = true."""

    __slots__ = ("counts", "space", "n")

    def __init__(self, counts, space: LabelSpace):
        arr = np.asarray(counts)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] != len(space):
            raise EvaluationError("counts must be a C x C grid matching the label space")
        if arr.dtype.kind == "f":
            if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
                raise EvaluationError("counts must be integers")
        arr = arr.astype(np.int64)
        if np.any(arr < 0):
            raise EvaluationError("counts must be non-negative")
        arr.setflags(write=False)
        self.counts = arr
        self.space = space
        self.n = int(arr.sum())

    def trace(self) -> int:
        return int(np.trace(self.counts))

    def pred_counts(self) -> np.ndarray:
        """Per-class predicted totals (row sums)."""
        return self.counts.sum(axis=1)

    def gold_counts(self) -> np.ndarray:
        """Per-class true totals (column sums)."""
        return self.counts.sum(axis=0)

    def __repr__(self) -> str:
        return f"ConfusionMatrix(n={self.n}, classes={len(self.space)})"


def build_confusion_matrix(classifications: ClassificationSet) -> ConfusionMatrix:
    """Tally (pred, gold) pairs into a matrix. Only the sample order is lost."""
    if len(classifications) == 0:
        raise EvaluationError("empty classification set")
    c = len(classifications.space)
    flat = classifications.pred_indices * c + classifications.gold_indices
    counts = np.bincount(flat, minlength=c * c).reshape(c, c)
    return ConfusionMatrix(counts, classifications.space)


class ContingencyCells(NamedTuple):
    """One-vs-rest counts for a single class of interest."""

    tp: int
    fp: int
    fn: int
    tn: int


def per_class_contingency(cm: ConfusionMatrix, label: str) -> ContingencyCells:
    """One-vs-rest contingency cells for `label`; cells always sum to n."""
    i = cm.space.index_of(label)
    tp = int(cm.counts[i, i])
    fp = int(cm.counts[i, :].sum()) - tp
    fn = int(cm.counts[:, i].sum()) - tp
    return ContingencyCells(tp, fp, fn, cm.n - tp - fp - fn)


def prevalence(cm: ConfusionMatrix) -> ClassDistribution:
    """Empirical distribution of the true classes, (TP_c + FN_c) / n."""
    if cm.n == 0:
        raise EvaluationError("empty matrix")
    return ClassDistribution(cm.space, cm.gold_counts() / cm.n)


def bias(cm: ConfusionMatrix) -> ClassDistribution:
    """Empirical distribution of the predicted classes, (TP_c + FP_c) / n."""
    if cm.n == 0:
        raise EvaluationError("empty matrix")
    return ClassDistribution(cm.space, cm.pred_counts() / cm.n)


def entropy(distribution: ClassDistribution) -> float:
    """Shannon entropy in bits, with 0 * log 0 taken as 0."""
    p = distribution.probs[distribution.probs > 0.0]
    return float(-(p * np.log2(p)).sum())
