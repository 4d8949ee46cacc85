"""Chance-corrected classification evaluation.

A confusion-matrix core with the full metric superset (accuracy, balanced
accuracy, F1 variants, Cohen's kappa, informedness, MCC, NIT), synthetic
classifier sweeps for studying metric bias, and prediction-file evaluation
with sub-task grouping and baseline/delta comparison.
"""

from .core import (
    ClassDistribution,
    ClassificationSet,
    ConfusionMatrix,
    ContingencyCells,
    EvaluationError,
    EvaluationWarning,
    LabelSpace,
    bias,
    build_confusion_matrix,
    entropy,
    per_class_contingency,
    prevalence,
)
from .ingestion import (
    GroupedDataset,
    PredictionRecord,
    RecordSchema,
    baseline,
    discretize_scores,
    load_distribution,
    load_gold_labels,
    parse_predictions,
)
from .metrics import (
    METRIC_NAMES,
    PER_CLASS_METRIC_NAMES,
    FMeasures,
    InformednessResult,
    MccResult,
    MetricReport,
    NitResult,
    accuracy,
    balanced_accuracy,
    cohen_kappa,
    delta_report,
    effective_class_count,
    f_measures,
    informedness,
    mcc,
    metric_suite,
    nit,
    task_mean,
)
from .render import (
    RenderedReport,
    render_comparison,
    render_evaluation,
    report_from_dict,
    report_to_dict,
    scale_report,
)
from .simulation import (
    SimulationConfig,
    SweepResult,
    SweepRow,
    class_labels,
    parse_prevalence_spec,
    simulate,
    sweep,
)

__version__ = "0.1.0"
