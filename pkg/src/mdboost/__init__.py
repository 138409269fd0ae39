"""Margin-distribution boosting via column generation.

Trains ensembles of decision stumps by directly optimizing the margin
distribution (maximize the average margin, minimize the margin variance)
with a totally-corrective column-generation loop; ships an AdaBoost
baseline, margin analytics, nonparametric classifier-comparison tests,
and an experiment harness.
"""

from .adaboost import AdaBoostParams, exp_loss, train_adaboost
from .core import (
    Dataset,
    Ensemble,
    MDBoostError,
    ScatterOperator,
    Stump,
    load_ensemble,
    margin_vector,
    primal_objective,
    save_ensemble,
)
from .datasets import SplitSpec, load_csv, make_toy_dataset, save_csv, split
from .experiments import (
    DEFAULT_D_GRID,
    ExperimentConfig,
    ResultsTable,
    cross_validate_d,
    error_rate,
    run_experiment,
)
from .margins import (
    MarginReport,
    feature_frequency,
    gaussian_cost_approx,
    gaussian_cost_truncated,
    margin_report,
)
from .qp import (
    DualState,
    PrimalSolution,
    RestrictedProblem,
    project_simplex,
    recover_dual,
    solve_restricted,
)
from .stats import (
    ErrorTable,
    TestDecision,
    bonferroni_dunn,
    friedman,
    wilcoxon_signed_rank,
)
from .stumps import KERNEL_BACKEND, ScoredStump, best_stump, edge
from .training import TrainParams, TrainTrace, predict, predict_many, train

__version__ = "0.1.0"

__all__ = [
    "AdaBoostParams", "Dataset", "DEFAULT_D_GRID", "DualState", "Ensemble",
    "ErrorTable", "ExperimentConfig", "KERNEL_BACKEND", "MDBoostError",
    "MarginReport", "PrimalSolution", "RestrictedProblem", "ResultsTable",
    "ScatterOperator", "ScoredStump", "SplitSpec", "Stump", "TestDecision",
    "TrainParams", "TrainTrace", "best_stump", "bonferroni_dunn",
    "cross_validate_d", "edge", "error_rate", "exp_loss",
    "feature_frequency", "friedman", "gaussian_cost_approx",
    "gaussian_cost_truncated", "load_csv", "load_ensemble",
    "make_toy_dataset", "margin_report", "margin_vector", "predict",
    "predict_many", "primal_objective", "project_simplex", "recover_dual",
    "run_experiment", "save_csv", "save_ensemble", "solve_restricted",
    "split", "train", "train_adaboost", "wilcoxon_signed_rank",
]
