import io
import json

import numpy as np
import pytest

from classeval import (
    ClassDistribution,
    EvaluationError,
    EvaluationWarning,
    LabelSpace,
    baseline,
    build_confusion_matrix,
    discretize_scores,
    informedness,
    load_distribution,
    metric_suite,
    parse_predictions,
    prevalence,
)


def parse_text(text, format="csv", **kwargs):
    return parse_predictions(io.StringIO(text), format, **kwargs)


class TestParsePredictions:
    def test_minimal_csv(self):
        dataset = parse_text("gold,pred\nyes,yes\nyes,no\n")
        assert len(dataset) == 2
        assert dataset.space.labels == ("yes", "no")
        assert len(dataset.groups()) == 1

    def test_preserves_order_and_triples(self):
        text = "gold,pred,group\na,b,g1\nb,a,g2\na,a,g1\n"
        dataset = parse_text(text)
        triples = [(r.gold, r.pred, r.group) for r in dataset.records]
        assert triples == [("a", "b", "g1"), ("b", "a", "g2"), ("a", "a", "g1")]
        assert dataset.group_keys == ("g1", "g2")

    def test_jsonl_groups(self):
        lines = [
            {"gold": "yes", "pred": "no", "group": "exist"},
            {"gold": "cat", "pred": "cat", "group": "query"},
            {"gold": "no", "pred": "no", "group": "exist"},
        ]
        text = "\n".join(json.dumps(line) for line in lines) + "\n"
        dataset = parse_text(text, format="jsonl")
        groups = dataset.groups()
        assert set(groups) == {"exist", "query"}
        assert len(groups["exist"]) == 2
        # per-group spaces by default
        assert groups["exist"].space.labels == ("yes", "no")
        assert groups["query"].space.labels == ("cat",)

    def test_shared_space_option(self):
        text = "gold,pred,group\na,a,g1\nb,b,g2\n"
        dataset = parse_text(text)
        shared = dataset.groups(shared_space=True)
        assert shared["g1"].space == dataset.space

    def test_tsv(self):
        dataset = parse_text("gold\tpred\nx\ty\n", format="tsv")
        assert dataset.records[0].pred == "y"

    def test_strict_rejects_unseen_label_with_line_number(self):
        text = "gold,pred\nyes,yes\nyes,maybe\n"
        with pytest.raises(EvaluationError, match="unknown label at line 3"):
            parse_text(text, policy="strict", labels=["yes", "no"])

    def test_strict_requires_labels(self):
        with pytest.raises(EvaluationError, match="strict policy requires"):
            parse_text("gold,pred\na,a\n", policy="strict")

    def test_union_warns_on_prediction_only_labels(self):
        dataset = parse_text("gold,pred\na,a\na,c\n")
        assert any("only in predictions: c" in note for note in dataset.warnings)

    def test_explicit_label_order_wins(self):
        dataset = parse_text("gold,pred\nb,a\n", labels=["z", "a", "b"])
        assert dataset.space.labels == ("z", "a", "b")

    def test_missing_column_is_schema_error(self):
        with pytest.raises(EvaluationError, match="schema error"):
            parse_text("gold,prediction\na,a\n")

    def test_malformed_row_has_line_number(self):
        with pytest.raises(EvaluationError, match="line 2"):
            parse_text('{"gold": "a", "pred": "a"}\nnot json\n', format="jsonl")
        with pytest.raises(EvaluationError, match="line 2"):
            parse_text("gold,pred\n  ,a\n")

    def test_labels_trimmed_interior_preserved(self):
        dataset = parse_text("gold,pred\n  new york , new york\n")
        assert dataset.records[0].gold == "new york"

    def test_overall_round_trip(self):
        text = "gold,pred\na,a\nb,a\na,b\n"
        dataset = parse_text(text)
        cm = build_confusion_matrix(dataset.overall())
        assert cm.n == 3
        assert cm.counts.tolist() == [[1, 1], [1, 0]]


class TestDiscretizeScores:
    def test_paper_style_rounding(self):
        assert discretize_scores([4.6], 0, 5) == ["5"]

    def test_zero(self):
        assert discretize_scores([0.0], 0, 5) == ["0"]

    def test_half_away_from_zero(self):
        assert discretize_scores([2.5], 0, 5) == ["3"]
        assert discretize_scores([-2.5], -5, 0) == ["-3"]

    def test_idempotent_on_integers(self):
        values = [0.0, 1.0, 3.0, 5.0]
        once = discretize_scores(values, 0, 5)
        again = discretize_scores([float(v) for v in once], 0, 5)
        assert once == again == ["0", "1", "3", "5"]

    def test_out_of_range_warns_and_clamps(self):
        with pytest.warns(EvaluationWarning):
            assert discretize_scores([6.2], 0, 5) == ["5"]

    def test_nan_is_an_error(self):
        with pytest.raises(EvaluationError, match="NaN"):
            discretize_scores([float("nan")], 0, 5)


class TestBaseline:
    def train(self, a=0.6, b=0.4):
        return ClassDistribution(LabelSpace(["yes", "no"]), [a, b])

    def test_most_common_constant(self):
        result = baseline("most-common", self.train(), ["yes", "no", "yes"])
        assert [p for _, p in result.pairs] == ["yes", "yes", "yes"]

    def test_most_common_tie_breaks_by_space_order(self):
        result = baseline("most-common", self.train(0.5, 0.5), ["no", "yes"])
        assert {p for _, p in result.pairs} == {"yes"}

    def test_prevalence_sample_degenerate(self):
        train = ClassDistribution(LabelSpace(["yes", "no"]), [1.0, 0.0])
        result = baseline("prevalence-sample", train, ["yes", "no"], seed=3)
        assert {p for _, p in result.pairs} == {"yes"}

    def test_prevalence_sample_law_of_large_numbers(self):
        train = ClassDistribution(LabelSpace(["yes", "no"]), [0.5, 0.5])
        gold = ["yes", "no"] * 50000
        result = baseline("prevalence-sample", train, gold, seed=9)
        share = sum(1 for _, p in result.pairs if p == "yes") / len(result.pairs)
        assert abs(share - 0.5) <= 0.01

    def test_prevalence_sample_deterministic(self):
        train = self.train()
        gold = ["yes", "no"] * 20
        first = baseline("prevalence-sample", train, gold, seed=4)
        second = baseline("prevalence-sample", train, gold, seed=4)
        assert first.pairs == second.pairs

    def test_seed_required_for_sampling(self):
        with pytest.raises(EvaluationError, match="seed"):
            baseline("prevalence-sample", self.train(), ["yes"])

    def test_unknown_gold_label(self):
        with pytest.raises(EvaluationError, match="unknown label"):
            baseline("most-common", self.train(), ["maybe"])

    def test_most_common_accuracy_equals_prevalence_and_informedness_zero(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            c = int(rng.integers(2, 5))
            labels = [f"k{i}" for i in range(c)]
            weights = rng.dirichlet(np.ones(c))
            train = ClassDistribution(LabelSpace(labels), weights)
            gold = [labels[i] for i in rng.integers(0, c, size=60).tolist()]
            if len(set(gold)) < 2:
                continue
            cm = build_confusion_matrix(baseline("most-common", train, gold))
            majority = train.argmax_label()
            expected = gold.count(majority) / len(gold)
            report_prevalence = prevalence(cm).prob_of(majority)
            assert report_prevalence == pytest.approx(expected, abs=1e-12)
            from classeval import accuracy
            assert accuracy(cm) == pytest.approx(expected, abs=1e-12)
            assert informedness(cm).overall == pytest.approx(0.0, abs=1e-12)


class TestLoadDistribution:
    def test_counts_normalized(self):
        dist = load_distribution(io.StringIO("label,count\na,80\nb,20\n"))
        assert dist.probs.tolist() == [0.8, 0.2]

    def test_probabilities_pass_through(self):
        dist = load_distribution(io.StringIO('{"a": 0.7, "b": 0.3}'))
        assert dist.probs.tolist() == pytest.approx([0.7, 0.3], abs=1e-12)

    def test_bad_probability_sum(self):
        with pytest.raises(EvaluationError, match="not a distribution"):
            load_distribution(io.StringIO('{"a": 0.7, "b": 0.7}'))

    def test_negative_entries(self):
        with pytest.raises(EvaluationError, match="not a distribution"):
            load_distribution(io.StringIO('{"a": -1, "b": 2}'))

    def test_integral_floats_treated_as_counts(self):
        dist = load_distribution(io.StringIO('{"a": 3.0, "b": 1.0}'))
        assert dist.probs.tolist() == [0.75, 0.25]
