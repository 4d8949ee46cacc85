"""Synthetic classifier with a dialled probability of informed decisions.

Each sample draws its true class from a prevalence vector; with probability
`power` the prediction copies the truth, otherwise it is redrawn
independently from the same prevalence (and may still land on the correct
class by luck). Sweeping power and prevalence grids regenerates metric
curves from chance through perfect, with run-to-run standard deviations.

Every (grid point, run) owns an independent random stream derived from
(seed, point index, run), so serial and parallel execution agree bit for
bit and point 0 / run 0 reproduces a plain `simulate` call.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    ClassDistribution,
    ClassificationSet,
    EvaluationError,
    LabelSpace,
    build_confusion_matrix,
)
from .metrics import METRIC_NAMES, metric_suite

__all__ = [
    "SimulationConfig",
    "SweepRow",
    "SweepResult",
    "class_labels",
    "parse_prevalence_spec",
    "simulate",
    "sweep",
]


def class_labels(count: int) -> tuple[str, ...]:
    """Generated identifiers c0..c(count-1) for simulated classes."""
    return tuple(f"c{i}" for i in range(count))


def parse_prevalence_spec(spec: str) -> ClassDistribution:
    """Parse a prevalence grid token.

    Accepts "uniform-K" for K equal classes, a single skew value p for a
    binary (p, 1-p) split, or an explicit comma list "p1,p2,..." that must
    sum to 1 within 1e-6.
    """
    token = spec.strip()
    if token.startswith("uniform-"):
        try:
            k = int(token[len("uniform-"):])
        except ValueError:
            raise EvaluationError(f"bad prevalence spec: {spec!r}") from None
        if k < 1:
            raise EvaluationError(f"bad prevalence spec: {spec!r}")
        return ClassDistribution(LabelSpace(class_labels(k)), np.full(k, 1.0 / k))
    try:
        parts = [float(piece) for piece in token.split(",") if piece.strip()]
    except ValueError:
        raise EvaluationError(f"bad prevalence spec: {spec!r}") from None
    if not parts:
        raise EvaluationError(f"bad prevalence spec: {spec!r}")
    if len(parts) == 1:
        p = parts[0]
        if not 0.0 < p < 1.0:
            raise EvaluationError(f"bad prevalence spec: {spec!r} (skew must be inside (0, 1))")
        parts = [p, 1.0 - p]
    total = sum(parts)
    if abs(total - 1.0) > 1e-6:
        raise EvaluationError(f"bad prevalence spec: {spec!r} (sums to {total:.6g})")
    return ClassDistribution(LabelSpace(class_labels(len(parts))), np.asarray(parts) / total)


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs of one synthetic classifier run (or repeated runs)."""

    prevalence: ClassDistribution
    power: float
    n: int
    seed: int
    runs: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.power <= 1.0:
            raise EvaluationError(f"power must be in [0, 1], got {self.power}")
        if self.n < 1:
            raise EvaluationError("n must be at least 1")
        if self.runs < 1:
            raise EvaluationError("runs must be at least 1")
        if self.seed < 0:
            raise EvaluationError("seed must be non-negative")


def simulate(config: SimulationConfig, stream: int = 0) -> ClassificationSet:
    """One synthetic classification set; `stream` selects a sub-stream.

    Per sample: gold ~ prevalence; u ~ U[0, 1); pred = gold if u < power
    else an independent redraw from prevalence. Identical (config, stream)
    always reproduces the identical set; nearby stream integers decorrelate
    through the generator's seed hashing.
    """
    rng = np.random.default_rng(config.seed + stream)
    c = len(config.prevalence.space)
    p = config.prevalence.probs
    gold = rng.choice(c, size=config.n, p=p)
    informed = rng.random(config.n) < config.power
    guess = rng.choice(c, size=config.n, p=p)
    pred = np.where(informed, gold, guess)
    labels = config.prevalence.space.labels
    pairs = [(labels[g], labels[q]) for g, q in zip(gold.tolist(), pred.tolist())]
    return ClassificationSet(pairs, space=config.prevalence.space)


class SweepRow(NamedTuple):
    prevalence_spec: str
    power: float
    metric: str
    mean: float
    std: float


@dataclass(frozen=True)
class SweepResult:
    """Per-metric means and run-to-run stds over a prevalence x power grid."""

    rows: tuple[SweepRow, ...]
    n: int
    runs: int
    seed: int

    def to_csv(self, scale: float = 1.0) -> str:
        """Plot-data CSV; `scale=100.0` gives the percent presentation."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["prevalence_spec", "power", "metric", "mean", "std", "runs", "n", "seed"])
        for row in self.rows:
            writer.writerow([row.prevalence_spec, row.power, row.metric,
                             row.mean * scale, row.std * scale, self.runs, self.n, self.seed])
        return buffer.getvalue()


def _as_spec(item: str | Sequence[float]) -> tuple[str, ClassDistribution]:
    if isinstance(item, str):
        return item.strip(), parse_prevalence_spec(item)
    probs = np.asarray(list(item), dtype=float)
    dist = ClassDistribution(LabelSpace(class_labels(len(probs))), probs)
    return ",".join(format(p, "g") for p in probs), dist


def sweep(prevalences: Sequence[str | Sequence[float]], powers: Sequence[float],
          n: int, seed: int, runs: int = 1, workers: int = 1) -> SweepResult:
    """Run the synthetic classifier over the full grid and aggregate metrics.

    Rows cover the grid exactly once, prevalences outer and powers inner,
    with one row per metric carrying the mean and the run-to-run sample
    standard deviation (0 for a single run). Results are merged by grid
    index and are identical for any worker count.
    """
    specs = [_as_spec(item) for item in prevalences]
    power_grid = [float(p) for p in powers]
    if not specs or not power_grid:
        raise EvaluationError("empty sweep grid")
    configs = [
        SimulationConfig(prevalence=dist, power=power, n=n, seed=seed, runs=runs)
        for _, dist in specs for power in power_grid
    ]

    def run_point(task: tuple[int, int]) -> dict[str, float]:
        point, run = task
        sample = simulate(configs[point], stream=point * runs + run)
        return metric_suite(build_confusion_matrix(sample)).values

    tasks = [(point, run) for point in range(len(configs)) for run in range(runs)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_point, tasks))
    else:
        outcomes = [run_point(task) for task in tasks]

    rows: list[SweepRow] = []
    for point in range(len(configs)):
        spec = specs[point // len(power_grid)][0]
        power = power_grid[point % len(power_grid)]
        per_run = outcomes[point * runs:(point + 1) * runs]
        for metric in METRIC_NAMES:
            series = np.asarray([values[metric] for values in per_run])
            std = float(series.std(ddof=1)) if runs > 1 else 0.0
            rows.append(SweepRow(spec, power, metric, float(series.mean()), std))
    return SweepResult(tuple(rows), n=n, runs=runs, seed=seed)
