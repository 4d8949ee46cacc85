import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from classeval import (
    ClassDistribution,
    ClassificationSet,
    ConfusionMatrix,
    EvaluationError,
    LabelSpace,
    bias,
    build_confusion_matrix,
    entropy,
    per_class_contingency,
    prevalence,
)


class TestLabelSpace:
    def test_order_and_index_are_inverse(self):
        space = LabelSpace(["x", "y", "z"])
        for position, label in enumerate(space.labels):
            assert space.index_of(label) == position

    def test_same_sequence_gives_equal_spaces(self):
        assert LabelSpace(["a", "b"]) == LabelSpace(["a", "b"])
        assert LabelSpace(["a", "b"]) != LabelSpace(["b", "a"])

    def test_duplicates_rejected(self):
        with pytest.raises(EvaluationError, match="duplicate label"):
            LabelSpace(["a", "a"])

    def test_empty_rejected(self):
        with pytest.raises(EvaluationError, match="empty"):
            LabelSpace([])

    def test_byte_exact_comparison(self):
        space = LabelSpace(["Yes", "yes"])  # case is significant
        assert space.index_of("Yes") == 0
        assert space.index_of("yes") == 1

    def test_first_seen_inference(self):
        space = LabelSpace.from_observed(["b", "a", "b", "c", "a"])
        assert space.labels == ("b", "a", "c")


class TestBuildConfusionMatrix:
    def test_direct_count(self):
        cm = build_confusion_matrix(ClassificationSet([("a", "a"), ("a", "a"), ("b", "b")]))
        assert cm.counts.tolist() == [[2, 0], [0, 1]]
        assert cm.n == 3

    def test_fixture_f1_against_naive_tally(self, f1_pairs):
        cm = build_confusion_matrix(ClassificationSet(f1_pairs))
        labels = list(cm.space.labels)
        expected = [[0, 0], [0, 0]]
        for gold, pred in f1_pairs:
            expected[labels.index(pred)][labels.index(gold)] += 1
        assert cm.counts.tolist() == expected == [[60, 10], [20, 10]]
        assert cm.n == 100

    def test_empty_input(self):
        with pytest.raises(EvaluationError, match="empty classification set"):
            ClassificationSet([])
        space = LabelSpace(["a"])
        with pytest.raises(EvaluationError, match="empty classification set"):
            build_confusion_matrix(ClassificationSet([], space=space))

    def test_unknown_label(self):
        space = LabelSpace(["a", "b"])
        with pytest.raises(EvaluationError, match="unknown label"):
            ClassificationSet([("a", "z")], space=space)

    def test_marginals_reproduce_pair_counts(self, f1_pairs):
        cm = build_confusion_matrix(ClassificationSet(f1_pairs))
        gold_seen = {label: 0 for label in cm.space.labels}
        pred_seen = {label: 0 for label in cm.space.labels}
        for gold, pred in f1_pairs:
            gold_seen[gold] += 1
            pred_seen[pred] += 1
        assert cm.gold_counts().tolist() == [gold_seen[l] for l in cm.space.labels]
        assert cm.pred_counts().tolist() == [pred_seen[l] for l in cm.space.labels]


class TestContingency:
    def test_fixture_f1_class_a(self, f1_matrix):
        cells = per_class_contingency(f1_matrix, "a")
        assert cells == (60, 10, 20, 10)

    def test_perfect_diagonal(self):
        cm = ConfusionMatrix([[5, 0], [0, 5]], LabelSpace(["a", "b"]))
        assert per_class_contingency(cm, "a") == (5, 0, 0, 5)

    def test_absent_class(self):
        cm = ConfusionMatrix([[3, 0], [0, 0]], LabelSpace(["a", "b"]))
        assert per_class_contingency(cm, "b") == (0, 0, 0, 3)

    def test_cells_sum_to_n_for_every_class(self, f1_matrix):
        for label in f1_matrix.space.labels:
            assert sum(per_class_contingency(f1_matrix, label)) == f1_matrix.n

    def test_tp_sums_to_trace(self, f1_matrix):
        total = sum(per_class_contingency(f1_matrix, label).tp
                    for label in f1_matrix.space.labels)
        assert total == f1_matrix.trace()

    def test_unknown_class(self, f1_matrix):
        with pytest.raises(EvaluationError, match="unknown label"):
            per_class_contingency(f1_matrix, "zz")


class TestDistributions:
    def test_fixture_f1_prevalence_and_bias(self, f1_matrix):
        assert prevalence(f1_matrix).probs.tolist() == [0.8, 0.2]
        assert bias(f1_matrix).probs.tolist() == [0.7, 0.3]

    def test_balanced_diagonal(self):
        cm = ConfusionMatrix([[5, 0], [0, 5]], LabelSpace(["a", "b"]))
        assert prevalence(cm).probs.tolist() == bias(cm).probs.tolist() == [0.5, 0.5]

    def test_single_class(self):
        cm = ConfusionMatrix([[7]], LabelSpace(["a"]))
        assert prevalence(cm).probs.tolist() == [1.0]

    def test_empty_matrix(self):
        cm = ConfusionMatrix([[0, 0], [0, 0]], LabelSpace(["a", "b"]))
        with pytest.raises(EvaluationError, match="empty matrix"):
            prevalence(cm)

    def test_invalid_distribution(self):
        with pytest.raises(EvaluationError, match="not a distribution"):
            ClassDistribution(LabelSpace(["a", "b"]), [0.7, 0.7])


class TestEntropy:
    def test_uniform_binary(self):
        dist = ClassDistribution(LabelSpace(["a", "b"]), [0.5, 0.5])
        assert entropy(dist) == 1.0

    def test_hand_computed_three_way(self):
        dist = ClassDistribution(LabelSpace(["a", "b", "c"]), [0.5, 0.25, 0.25])
        assert entropy(dist) == pytest.approx(1.5, abs=1e-12)

    def test_degenerate(self):
        dist = ClassDistribution(LabelSpace(["a", "b"]), [1.0, 0.0])
        assert entropy(dist) == 0.0

    @given(st.lists(st.integers(min_value=0, max_value=50), min_size=2, max_size=6)
           .filter(lambda counts: sum(counts) > 0))
    def test_bounded_and_permutation_invariant(self, counts):
        probs = np.asarray(counts, dtype=float) / sum(counts)
        space = LabelSpace([f"c{i}" for i in range(len(counts))])
        h = entropy(ClassDistribution(space, probs))
        assert -1e-12 <= h <= math.log2(len(counts)) + 1e-12
        reversed_h = entropy(ClassDistribution(space, probs[::-1]))
        assert h == pytest.approx(reversed_h, abs=1e-12)

    @given(st.integers(min_value=1, max_value=8))
    def test_uniform_maximizes(self, c):
        space = LabelSpace([f"c{i}" for i in range(c)])
        h = entropy(ClassDistribution(space, np.full(c, 1.0 / c)))
        assert h == pytest.approx(math.log2(c), abs=1e-12)


class TestRoundTripInvariants:
    def test_row_and_column_sums_equal_n(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            c = int(rng.integers(1, 5))
            counts = rng.integers(0, 9, size=(c, c))
            if counts.sum() == 0:
                continue
            cm = ConfusionMatrix(counts, LabelSpace([f"c{i}" for i in range(c)]))
            cells = [per_class_contingency(cm, label) for label in cm.space.labels]
            assert sum(cell.tp for cell in cells) + sum(cell.fn for cell in cells) == cm.n
            assert sum(cell.tp for cell in cells) + sum(cell.fp for cell in cells) == cm.n
