"""Classical AdaBoost with decision stumps, used as the comparison baseline.

Unlike the totally-corrective loop, AdaBoost fixes each coefficient when
the stump is added and only reweights the example distribution.  Its
coefficient sum is exposed through the returned ensemble so the
margin-distribution trainer's D can be set to it for like-for-like margin
comparisons.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import Dataset, Ensemble, MDBoostError
from .stumps import best_stump
from .training import (
    TERMINATION_CONVERGED,
    TERMINATION_MAX_ITERATIONS,
    TraceRecord,
    TrainTrace,
)

# alpha assigned when a stump is error-free; the classical formula diverges
ALPHA_CAP = 0.5 * math.log((1.0 - 1e-10) / 1e-10)


@dataclass(frozen=True)
class AdaBoostParams:
    t_max: int
    seed: int = 0

    def __post_init__(self):
        if self.t_max < 1:
            raise MDBoostError("t_max must be at least 1")


def exp_loss(rho: np.ndarray) -> float:
    """log(sum_i exp(-rho_i)), max-shifted so huge margins cannot overflow."""
    neg = -np.asarray(rho, dtype=np.float64)
    shift = float(np.max(neg))
    return shift + float(np.log(np.sum(np.exp(neg - shift))))


def train_adaboost(dataset: Dataset, params: AdaBoostParams) -> tuple[Ensemble, TrainTrace]:
    """Reweighting AdaBoost: eps_t = misclassified mass, alpha_t = 0.5 ln((1-eps)/eps).

    Stops early when a stump is error-free (eps = 0, alpha capped) or when
    no stump beats random guessing (eps >= 1/2); both are recorded as
    converged since boosting cannot continue.  The example weights stay a
    distribution throughout.
    """
    m = dataset.n_examples
    y = dataset.labels
    u = np.full(m, 1.0 / m)
    scores = np.zeros(m)
    members: list[tuple[float, object]] = []

    trace = TrainTrace(termination=TERMINATION_MAX_ITERATIONS)
    started = time.perf_counter()

    for t in range(1, params.t_max + 1):
        scored = best_stump(dataset, u)
        h = scored.stump.predict_many(dataset.features)
        eps = float(np.sum(u[h * y < 0]))

        if eps >= 0.5:
            trace.termination = TERMINATION_CONVERGED
            break
        alpha = ALPHA_CAP if eps <= 0.0 else 0.5 * math.log((1.0 - eps) / eps)

        members.append((alpha, scored.stump))
        scores += alpha * h
        rho = y * scores
        coeff_sum = sum(a for a, _ in members)
        norm = rho / coeff_sum
        var = float(np.var(norm, ddof=1)) if m >= 2 else 0.0
        trace.records.append(TraceRecord(
            iteration=t,
            edge=scored.edge,
            r=None,
            objective=exp_loss(rho),
            margin_mean=float(np.mean(norm)),
            margin_variance=var,
            wall_time=time.perf_counter() - started,
        ))

        if eps <= 0.0:
            trace.termination = TERMINATION_CONVERGED
            break
        u = u * np.exp(-alpha * y * h)
        u /= np.sum(u)

    if not members:
        raise MDBoostError("no stump beat random guessing on the first round")
    coeff_sum = sum(a for a, _ in members)
    ensemble = Ensemble(members=tuple(members), weight_sum_target=coeff_sum)
    return ensemble, trace
