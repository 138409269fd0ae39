"""Weak-learner search: the stump maximizing the u-weighted edge.

The edge of a stump h under weights u is sum_i u_i * y_i * h(x_i); column
generation adds, at each iteration, the stump with the largest edge.  The
search is exhaustive over a finite complete candidate set: per feature,
all midpoints between consecutive distinct sorted values plus a below-min
and an above-max sentinel, with both polarities.

The inner scan is the hot loop of training and is served by a compiled
kernel when available; set MDBOOST_PURE_PYTHON=1 to force the numpy
fallback.  Both backends return bit-identical results.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .core import Dataset, MDBoostError, Stump

if os.environ.get("MDBOOST_PURE_PYTHON"):
    from . import _stump_scan_py as _kernel
else:
    try:
        from . import _stump_scan as _kernel  # type: ignore[no-redef]
    except ImportError:
        from . import _stump_scan_py as _kernel  # type: ignore[no-redef]

KERNEL_BACKEND: str = _kernel.BACKEND


@dataclass(frozen=True)
class ScoredStump:
    stump: Stump
    edge: float


def threshold_from_pos(values_row: np.ndarray, pos: int) -> float:
    """Map a scan position to a threshold value.

    -1 is the below-min sentinel (min - 1), M-1 the above-max sentinel
    (max + 1), anything else the midpoint after sorted position `pos`.
    Midpoints never coincide with data values, so the strict ">" in
    Stump.predict is split-point invariant on the training data.
    """
    m = values_row.shape[0]
    if pos == -1:
        return float(values_row[0] - 1.0)
    if pos == m - 1:
        return float(values_row[m - 1] + 1.0)
    return float(0.5 * (values_row[pos] + values_row[pos + 1]))


def best_stump(dataset: Dataset, u: np.ndarray) -> ScoredStump:
    """Exhaustive argmax of the edge over all stump candidates.

    Ties break deterministically: lowest feature index, then smallest
    threshold, then polarity +1 first.  If every u_i * y_i is zero the
    canonical first candidate is returned with edge 0 and the caller
    decides what that means.
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != dataset.n_examples:
        raise MDBoostError("weight vector length does not match dataset")
    order, values = dataset.sorted_features()
    s = np.ascontiguousarray(u * dataset.labels)
    edge_val, f, pos, pol = _kernel.scan(order, values, s)
    stump = Stump(f, threshold_from_pos(values[f], pos), pol)
    return ScoredStump(stump=stump, edge=float(edge_val))


def edge(stump: Stump, dataset: Dataset, u: np.ndarray) -> float:
    """sum_i u_i * y_i * h(x_i) for one stump."""
    u = np.asarray(u, dtype=np.float64).ravel()
    if u.shape[0] != dataset.n_examples:
        raise MDBoostError("weight vector length does not match dataset")
    return float(np.dot(u * dataset.labels, stump.predict_many(dataset.features)))
