"""Shared generators for randomized metric checks."""

from __future__ import annotations

import numpy as np

from classeval import ClassificationSet, LabelSpace, build_confusion_matrix


def random_case(rng: np.random.Generator, max_classes: int = 6, max_n: int = 50):
    """Random (labels, pairs) with at least two gold-populated classes.

    Mixes uniform and skewed draws, plus occasional constant predictions to
    exercise the zero-denominator conventions.
    """
    c = int(rng.integers(2, max_classes + 1))
    n = int(rng.integers(2, max_n + 1))
    labels = [f"k{i}" for i in range(c)]
    if rng.random() < 0.3:
        weights = rng.dirichlet(np.ones(c))
        gold = rng.choice(c, size=n, p=weights)
        pred = rng.choice(c, size=n, p=weights)
    else:
        gold = rng.integers(0, c, size=n)
        pred = rng.integers(0, c, size=n)
    if rng.random() < 0.05:
        pred[:] = pred[0]
    # force two distinct gold classes so informedness is defined
    gold[0] = 0
    gold[1 % n] = 1 if n > 1 else gold[0]
    if n == 1:
        gold = np.array([0, 1])
        pred = np.concatenate([pred, pred])
    pairs = [(labels[g], labels[p]) for g, p in zip(gold.tolist(), pred.tolist())]
    return labels, pairs


def matrix_from(pairs, labels):
    return build_confusion_matrix(ClassificationSet(pairs, space=LabelSpace(labels)))
