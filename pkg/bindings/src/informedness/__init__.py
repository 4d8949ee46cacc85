"""Metric functions in the familiar (y_true, y_pred) call style.

No metric logic lives here: every call marshals the label sequences through
the `classeval` core's file and JSON report interfaces (the same path the
CLI uses), so the two can never disagree. The core package must be
installed in the same environment.
"""

from __future__ import annotations

import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path
from typing import Mapping, Sequence

__all__ = ["informedness_score", "nit_score", "metric_report"]
__version__ = "0.1.0"

_ERROR_PREFIX = "error: "


def _stringify(y_true: Sequence, y_pred: Sequence) -> tuple[list[str], list[str]]:
    gold = [str(value) for value in y_true]
    pred = [str(value) for value in y_pred]
    if len(gold) != len(pred):
        raise ValueError(f"length mismatch: {len(gold)} gold vs {len(pred)} predicted labels")
    if not gold:
        raise ValueError("empty classification set")
    return gold, pred


def _core_error(stderr: str) -> ValueError:
    for line in reversed(stderr.strip().splitlines()):
        if line.startswith(_ERROR_PREFIX):
            return ValueError(line[len(_ERROR_PREFIX):])
    return ValueError(stderr.strip() or "evaluation failed")


def _evaluate(y_true: Sequence, y_pred: Sequence,
              train_priors: Mapping[str, float] | None = None) -> dict:
    gold, pred = _stringify(y_true, y_pred)
    with tempfile.TemporaryDirectory() as tmp:
        pred_path = Path(tmp) / "predictions.csv"
        with pred_path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["gold", "pred"])
            writer.writerows(zip(gold, pred))
        command = [sys.executable, "-m", "classeval", "evaluate",
                   "--pred", str(pred_path), "--format", "json"]
        if train_priors is not None:
            priors_path = Path(tmp) / "priors.json"
            priors_path.write_text(
                json.dumps({str(k): float(v) for k, v in train_priors.items()}),
                encoding="utf-8")
            command += ["--priors", str(priors_path)]
        outcome = subprocess.run(command, capture_output=True, text=True)
    if outcome.returncode != 0:
        raise _core_error(outcome.stderr)
    return json.loads(outcome.stdout)


def informedness_score(y_true: Sequence, y_pred: Sequence,
                       train_priors: Mapping[str, float] | None = None) -> float:
    """Chance-corrected probability of an informed prediction.

    Labels are stringified before scoring. Optional train_priors (label ->
    probability or count) replace the test-set prevalence as betting odds.
    """
    return float(_evaluate(y_true, y_pred, train_priors)["metrics"]["informedness"])


def nit_score(y_true: Sequence, y_pred: Sequence) -> float:
    """Normalized information transfer, 2 ** (MI - log2 C)."""
    return float(_evaluate(y_true, y_pred)["metrics"]["nit"])


def metric_report(y_true: Sequence, y_pred: Sequence,
                  train_priors: Mapping[str, float] | None = None) -> dict:
    """Full metric mapping in the core's versioned JSON report schema."""
    return _evaluate(y_true, y_pred, train_priors)
