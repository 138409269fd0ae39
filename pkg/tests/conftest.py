"""Shared independent oracles: brute-force enumerations kept deliberately
separate from the library's optimized code paths."""

import numpy as np
import pytest

from mdboost import Dataset, Stump


def dense_scatter(m: int, delta: float) -> np.ndarray:
    """Explicit (A + delta*I): unit diagonal, -1/(M-1) off-diagonal."""
    a = np.full((m, m), -1.0 / (m - 1))
    np.fill_diagonal(a, 1.0)
    return a + delta * np.eye(m)


def enumerate_stumps(dataset: Dataset) -> list[Stump]:
    """Every candidate the exhaustive search considers, in canonical order:
    feature ascending, threshold ascending (below-min sentinel, midpoints
    between consecutive distinct sorted values, above-max sentinel),
    polarity +1 before -1."""
    stumps = []
    for f in range(dataset.n_features):
        vals = np.unique(dataset.features[:, f])
        thresholds = [vals[0] - 1.0]
        thresholds += [0.5 * (a + b) for a, b in zip(vals[:-1], vals[1:])]
        thresholds += [vals[-1] + 1.0]
        for t in thresholds:
            for pol in (1, -1):
                stumps.append(Stump(f, float(t), pol))
    return stumps


def stump_edge_loop(stump: Stump, dataset: Dataset, u: np.ndarray) -> float:
    """Scalar-loop edge sum, independent of the vectorized kernel."""
    total = 0.0
    for i in range(dataset.n_examples):
        h = stump.polarity if dataset.features[i, stump.feature_index] > stump.threshold \
            else -stump.polarity
        total += u[i] * dataset.labels[i] * h
    return total


def brute_force_best_stump(dataset: Dataset, u: np.ndarray):
    """First maximum-edge candidate in canonical order."""
    best = None
    best_edge = -np.inf
    for stump in enumerate_stumps(dataset):
        e = stump_edge_loop(stump, dataset, u)
        if e > best_edge:
            best_edge = e
            best = stump
    return best, best_edge


def random_dataset(rng: np.random.Generator, m: int, d: int) -> Dataset:
    features = rng.normal(size=(m, d))
    labels = rng.choice([-1.0, 1.0], size=m)
    if np.all(labels == labels[0]):  # keep both classes present
        labels[0] = -labels[0]
    return Dataset(features, labels)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
