"""Column-generation training loop for margin-distribution boosting.

Each iteration asks the weak-learner search for the stump with the
largest u-weighted edge, stops if that edge no longer beats the dual cap
r by more than epsilon, and otherwise adds the stump's signed column to
the restricted master problem, re-solves it (totally corrective: every
weight is updated), and refreshes (u, r) from the new solution.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Dataset, Ensemble, MDBoostError, ScatterOperator
from .qp import RestrictedProblem, recover_dual, solve_restricted
from .stumps import best_stump

TERMINATION_CONVERGED = "converged"
TERMINATION_MAX_ITERATIONS = "max_iterations"
TERMINATION_DUPLICATE_COLUMN = "duplicate_column"


@dataclass(frozen=True)
class TrainParams:
    """Knobs of the training loop.

    d is the weight budget D (sum of stump weights, trades average margin
    against margin variance); epsilon the convergence threshold; delta the
    scatter regularizer; n_max the iteration cap.  seed is recorded for
    experiment bookkeeping; the loop itself is deterministic.
    """

    d: float
    epsilon: float = 1e-5
    delta: float = 1e-6
    n_max: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.d <= 0:
            raise MDBoostError("D must be positive")
        if self.epsilon <= 0:
            raise MDBoostError("epsilon must be positive")
        if self.delta <= 0:
            raise MDBoostError("delta must be positive")
        if self.n_max < 1:
            raise MDBoostError("n_max must be at least 1")


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    edge: float
    r: Optional[float]
    objective: float
    margin_mean: float
    margin_variance: float
    wall_time: float


@dataclass
class TrainTrace:
    """Per-iteration audit trail; wall_time is the only nondeterministic field.

    final_u and final_r hold the dual state after the last solve so a
    post-hoc search can certify convergence (no candidate stump's edge may
    beat final_r by more than epsilon).
    """

    records: list[TraceRecord] = field(default_factory=list)
    termination: str = TERMINATION_MAX_ITERATIONS
    final_u: Optional[np.ndarray] = None
    final_r: Optional[float] = None

    def objectives(self) -> np.ndarray:
        return np.array([rec.objective for rec in self.records])


def _normalized_margin_stats(rho: np.ndarray, weight_sum: float) -> tuple[float, float]:
    norm = rho / weight_sum
    var = float(np.var(norm, ddof=1)) if norm.size >= 2 else 0.0
    return float(np.mean(norm)), var


def train(dataset: Dataset, params: TrainParams) -> tuple[Ensemble, TrainTrace]:
    """Run the column-generation loop; returns the ensemble and its trace.

    Starts from uniform u = 1/M and an empty restricted problem.  The
    convergence test is skipped on the first iteration (r is undefined
    before the first dual solve).  A newly generated stump whose signed
    outputs duplicate an existing column cannot violate dual feasibility,
    so that case terminates with its own reason instead of looping.
    """
    if dataset.n_examples < 2:
        raise MDBoostError("training needs at least 2 examples")
    m = dataset.n_examples
    op = ScatterOperator(m, params.delta)

    u = np.full(m, 1.0 / m)
    r: Optional[float] = None
    stumps = []
    matrix: Optional[np.ndarray] = None  # signed columns so far
    gram: Optional[np.ndarray] = None    # matrix^T matrix, grown incrementally
    seen_columns: set[bytes] = set()
    w: Optional[np.ndarray] = None
    rho: Optional[np.ndarray] = None

    trace = TrainTrace(termination=TERMINATION_MAX_ITERATIONS)
    started = time.perf_counter()

    for iteration in range(1, params.n_max + 1):
        scored = best_stump(dataset, u)
        if iteration > 1 and scored.edge < r + params.epsilon:
            trace.termination = TERMINATION_CONVERGED
            break

        column = dataset.labels * scored.stump.predict_many(dataset.features)
        key = column.tobytes()
        if key in seen_columns:
            trace.termination = TERMINATION_DUPLICATE_COLUMN
            break
        seen_columns.add(key)
        stumps.append(scored.stump)

        if matrix is None:
            matrix = column[:, np.newaxis]
            gram = np.array([[float(column @ column)]])
        else:
            cross = matrix.T @ column
            k = gram.shape[0]
            grown = np.empty((k + 1, k + 1))
            grown[:k, :k] = gram
            grown[:k, k] = cross
            grown[k, :k] = cross
            grown[k, k] = float(column @ column)
            gram = grown
            matrix = np.column_stack([matrix, column])

        problem = RestrictedProblem(
            signed_columns=matrix,
            d_target=params.d,
            scatter=op,
        )
        warm = None if w is None else np.append(w, 0.0)
        solution = solve_restricted(problem, warm_start=warm, warm_rho=rho, gram=gram)
        dual = recover_dual(problem, solution)
        u, r = dual.u, dual.r
        w, rho = solution.w, solution.rho

        mean, var = _normalized_margin_stats(rho, float(np.sum(w)))
        trace.records.append(TraceRecord(
            iteration=iteration,
            edge=scored.edge,
            r=r,
            objective=solution.objective,
            margin_mean=mean,
            margin_variance=var,
            wall_time=time.perf_counter() - started,
        ))

    if w is None:
        raise MDBoostError("no training iterations ran")
    ensemble = Ensemble(
        members=tuple((float(wj), s) for wj, s in zip(w, stumps)),
        weight_sum_target=params.d,
    )
    return ensemble, trace


def predict(ensemble: Ensemble, features) -> int:
    """Sign of F(x) for one example; sign(0) is +1."""
    x = np.asarray(features, dtype=np.float64).ravel()
    needed = 1 + max((s.feature_index for s in ensemble.stumps), default=0)
    if x.shape[0] < needed:
        raise MDBoostError(
            f"feature vector of length {x.shape[0]} but the ensemble "
            f"references feature index {needed - 1}")
    score = float(ensemble.decision_function(x[np.newaxis, :])[0])
    return 1 if score >= 0.0 else -1


def predict_many(ensemble: Ensemble, features: np.ndarray) -> np.ndarray:
    """Vector of +/-1 predictions, one per row."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    needed = 1 + max((s.feature_index for s in ensemble.stumps), default=0)
    if features.shape[1] < needed:
        raise MDBoostError(
            f"feature matrix with {features.shape[1]} columns but the "
            f"ensemble references feature index {needed - 1}")
    scores = ensemble.decision_function(features)
    return np.where(scores >= 0.0, 1.0, -1.0)
