"""Domain types and the pairwise-scatter operator.

The scatter matrix A (unit diagonal, -1/(M-1) off-diagonal) is never
materialized: it equals c*I - (1/(M-1)) * ones*ones^T with
c = M/(M-1) + delta once regularized, so both the matvec and the solve
are O(M) closed forms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np


class MDBoostError(Exception):
    """Base error for invalid inputs or degenerate states."""


@dataclass(frozen=True)
class Dataset:
    """Training data: real feature matrix (row = example) and +/-1 labels."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: Optional[tuple[str, ...]] = None
    # per-feature argsort, computed lazily for the stump scan
    _sort_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        y = np.asarray(self.labels, dtype=np.float64).ravel()
        if X.ndim != 2:
            raise MDBoostError("features must be a 2-D matrix")
        m, d = X.shape
        if m < 1 or d < 1:
            raise MDBoostError("need at least one example and one feature")
        if y.shape[0] != m:
            raise MDBoostError(f"{m} examples but {y.shape[0]} labels")
        if np.isnan(X).any():
            raise MDBoostError("NaN feature values are rejected")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise MDBoostError("labels must be exactly -1 or +1")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)
        if self.feature_names is not None:
            names = tuple(str(n) for n in self.feature_names)
            if len(names) != d:
                raise MDBoostError(f"{d} features but {len(names)} names")
            object.__setattr__(self, "feature_names", names)

    @property
    def n_examples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def sorted_features(self):
        """(order, values): per-feature argsort indices and sorted values.

        Cached on first use; both arrays are (d, M) C-contiguous, which is
        the layout the scan kernels expect.
        """
        cached = self._sort_cache.get("sorted")
        if cached is None:
            order = np.ascontiguousarray(
                np.argsort(self.features, axis=0, kind="stable").T)
            values = np.ascontiguousarray(
                np.take_along_axis(self.features, order.T, axis=0).T)
            order.setflags(write=False)
            values.setflags(write=False)
            cached = (order, values)
            self._sort_cache["sorted"] = cached
        return cached

    def subset(self, indices: np.ndarray) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        names = self.feature_names
        return Dataset(self.features[idx], self.labels[idx], names)


@dataclass(frozen=True)
class Stump:
    """One-feature threshold rule: polarity if x[feature] > threshold else -polarity."""

    feature_index: int
    threshold: float
    polarity: int

    def __post_init__(self):
        if self.polarity not in (-1, 1):
            raise MDBoostError("polarity must be +1 or -1")
        if self.feature_index < 0:
            raise MDBoostError("feature_index must be nonnegative")

    def predict(self, x: Sequence[float]) -> int:
        x = np.asarray(x, dtype=np.float64)
        return self.polarity if x[self.feature_index] > self.threshold else -self.polarity

    def predict_many(self, features: np.ndarray) -> np.ndarray:
        """Vector of +/-1 predictions, one per row of `features`."""
        col = features[:, self.feature_index]
        out = np.where(col > self.threshold, float(self.polarity), float(-self.polarity))
        return out


@dataclass(frozen=True)
class Ensemble:
    """Weighted stumps; the strong classifier is F(x) = sum_j w_j h_j(x)."""

    members: tuple[tuple[float, Stump], ...]
    weight_sum_target: float

    def __post_init__(self):
        members = tuple((float(w), s) for w, s in self.members)
        for w, _ in members:
            if w < 0:
                raise MDBoostError("member weights must be nonnegative")
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.members], dtype=np.float64)

    @property
    def stumps(self) -> list[Stump]:
        return [s for _, s in self.members]

    def weight_sum(self) -> float:
        return float(sum(w for w, _ in self.members))

    def decision_function(self, features: np.ndarray) -> np.ndarray:
        """F(x) for each row: weighted sum of stump outputs."""
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        scores = np.zeros(features.shape[0])
        for w, stump in self.members:
            scores += w * stump.predict_many(features)
        return scores


def margin_vector(ensemble: Ensemble, dataset: Dataset) -> np.ndarray:
    """Unnormalized margins rho_i = y_i * F(x_i); positive iff correct."""
    if len(ensemble) == 0:
        raise MDBoostError("no weak classifiers")
    return dataset.labels * ensemble.decision_function(dataset.features)


@dataclass(frozen=True)
class ScatterOperator:
    """The regularized pairwise-scatter matrix A + delta*I as a matrix-free operator.

    A has unit diagonal and -1/(M-1) off-diagonal; its rows sum to zero, so
    the all-ones vector is an eigenvector of A + delta*I with eigenvalue
    delta, and every direction orthogonal to it has eigenvalue
    M/(M-1) + delta.
    """

    m: int
    delta: float

    def __post_init__(self):
        if self.m < 2:
            raise MDBoostError("scatter operator needs at least 2 examples")
        if self.delta < 0:
            raise MDBoostError("delta must be nonnegative")

    @property
    def diag_coeff(self) -> float:
        """c = M/(M-1) + delta, the eigenvalue on the zero-sum subspace."""
        return self.m / (self.m - 1) + self.delta

    def apply(self, v: np.ndarray) -> np.ndarray:
        """(A + delta*I) v  ==  c*v - (sum(v)/(M-1)) * ones."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.m,):
            raise MDBoostError(f"expected a length-{self.m} vector")
        return self.diag_coeff * v - (np.sum(v) / (self.m - 1)) * np.ones(self.m)

    def solve(self, v: np.ndarray) -> np.ndarray:
        """(A + delta*I)^{-1} v, via the rank-one (Sherman-Morrison) closed form.

        A + delta*I = c*I - (1/(M-1)) * ones*ones^T, so its inverse is
        (1/c)*I + (1/(c*(M-1)*delta)) * ones*ones^T; the coefficient follows
        from c - M/(M-1) = delta.  Verified by the round-trip
        apply(solve(v)) == v.
        """
        if self.delta <= 0:
            raise MDBoostError("singular operator: solve needs delta > 0")
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.m,):
            raise MDBoostError(f"expected a length-{self.m} vector")
        c = self.diag_coeff
        return v / c + (np.sum(v) / (c * (self.m - 1) * self.delta)) * np.ones(self.m)

    def quad_form(self, v: np.ndarray) -> float:
        """v^T (A + delta*I) v."""
        return float(np.dot(v, self.apply(v)))


def primal_objective(op: ScatterOperator, rho: np.ndarray) -> float:
    """(1/2) rho^T (A + delta*I) rho - sum(rho).

    Equals delta/2 * ||rho||^2 plus the pairwise margin scatter
    sum_{i>j} (rho_i - rho_j)^2 / (2(M-1)) minus the margin total.
    """
    rho = np.asarray(rho, dtype=np.float64)
    return 0.5 * op.quad_form(rho) - float(np.sum(rho))


def save_ensemble(path, ensemble: Ensemble, delta: Optional[float]) -> None:
    """Write the ensemble JSON: {delta, d_param, members: [...]}."""
    doc = {
        "delta": None if delta is None else float(delta),
        "d_param": float(ensemble.weight_sum_target),
        "members": [
            {
                "weight": float(w),
                "feature_index": int(s.feature_index),
                "threshold": float(s.threshold),
                "polarity": int(s.polarity),
            }
            for w, s in ensemble.members
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_ensemble(path) -> tuple[Ensemble, Optional[float]]:
    """Inverse of save_ensemble; the round trip is exact."""
    with open(path) as fh:
        doc = json.load(fh)
    members = tuple(
        (m["weight"], Stump(m["feature_index"], m["threshold"], m["polarity"]))
        for m in doc["members"]
    )
    ensemble = Ensemble(members=members, weight_sum_target=doc["d_param"])
    delta = doc["delta"]
    return ensemble, None if delta is None else float(delta)
