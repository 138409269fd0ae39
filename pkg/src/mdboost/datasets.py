"""Dataset CSV loading and saving, reproducible splits, and a 2-D toy generator."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Dataset, MDBoostError
from .rng import SplitMix64, split_stream


def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise MDBoostError(
            f"non-numeric cell at row {row}, column {col}: {text!r}") from None
    if math.isnan(value):
        raise MDBoostError(f"NaN cell at row {row}, column {col}")
    return value


def load_csv(path) -> Dataset:
    """Comma-separated file, optional header row, last column = label.

    Labels must be -1 or +1; 0 is accepted and mapped to -1 with a
    warning.  Header detection: a first row with any non-numeric cell is
    treated as names (the last name, the label column's, is dropped).
    Row/column numbers in error messages are 1-based file coordinates.
    """
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    rows = [ln.split(",") for ln in lines if ln]
    if not rows:
        raise MDBoostError(f"{path}: empty file")

    feature_names = None
    start = 0
    def _numeric(cell):
        try:
            float(cell)
            return True
        except ValueError:
            return False
    if not all(_numeric(c) for c in rows[0]):
        feature_names = tuple(c.strip() for c in rows[0][:-1])
        start = 1
    if start == len(rows):
        raise MDBoostError(f"{path}: no data rows")

    width = len(rows[start])
    if width < 2:
        raise MDBoostError(f"{path}: need at least one feature column plus the label")
    features = []
    labels = []
    warned = False
    for i, row in enumerate(rows[start:], start=start + 1):
        if len(row) != width:
            raise MDBoostError(f"{path}: row {i} has {len(row)} cells, expected {width}")
        values = [_parse_cell(cell, i, j + 1) for j, cell in enumerate(row)]
        label = values[-1]
        if label == 0.0:
            if not warned:
                warnings.warn(f"{path}: 0/1 labels detected; mapping 0 to -1")
                warned = True
            label = -1.0
        if label not in (-1.0, 1.0):
            raise MDBoostError(
                f"{path}: row {i}: label {label!r} outside {{-1, 0, +1}}")
        features.append(values[:-1])
        labels.append(label)
    return Dataset(np.array(features), np.array(labels), feature_names)


def save_csv(path, dataset: Dataset) -> None:
    """Inverse of load_csv; floats use repr so the round trip is bit-exact."""
    with open(path, "w") as fh:
        if dataset.feature_names is not None:
            fh.write(",".join((*dataset.feature_names, "label")) + "\n")
        for x, y in zip(dataset.features, dataset.labels):
            cells = [repr(float(v)) for v in x]
            cells.append(str(int(y)))
            fh.write(",".join(cells) + "\n")


@dataclass(frozen=True)
class SplitSpec:
    train_frac: float
    val_frac: float
    test_frac: float
    seed: int = 0
    repeats: int = 1

    def __post_init__(self):
        fracs = (self.train_frac, self.val_frac, self.test_frac)
        if any(not 0.0 < f < 1.0 for f in fracs):
            raise MDBoostError("split fractions must lie in (0, 1)")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise MDBoostError("split fractions must sum to 1")
        if self.repeats < 1:
            raise MDBoostError("repeats must be at least 1")


def split(dataset: Dataset, spec: SplitSpec,
          repeat_index: int) -> tuple[Dataset, Dataset, Dataset]:
    """Deterministic (train, val, test) partition for one repeat.

    The permutation comes from the documented splitmix64 stream seeded
    with (seed, repeat_index); part sizes are floor(frac * M) with any
    remainder handed out train-first (train, then val, then test).
    """
    m = dataset.n_examples
    sizes = [int(math.floor(f * m)) for f in
             (spec.train_frac, spec.val_frac, spec.test_frac)]
    leftover = m - sum(sizes)
    for i in range(leftover):
        sizes[i % 3] += 1
    if any(s == 0 for s in sizes):
        raise MDBoostError(f"split of {m} examples leaves an empty part {tuple(sizes)}")
    perm = split_stream(spec.seed, repeat_index).permutation(m)
    n_train, n_val, _ = sizes
    return (
        dataset.subset(perm[:n_train]),
        dataset.subset(perm[n_train:n_train + n_val]),
        dataset.subset(perm[n_train + n_val:]),
    )


def make_toy_dataset(n: int, noise: float = 0.12, seed: int = 0) -> Dataset:
    """Two interleaving noisy half-moon clusters in the plane.

    Example i is class +1 when i is even, -1 when odd.  With t uniform in
    [0, 1) and theta = pi*t, class +1 sits on (cos theta, sin theta) and
    class -1 on (1 - cos theta, 1/2 - sin theta); isotropic Gaussian noise
    of the given standard deviation is added to both coordinates.  All
    randomness comes from one splitmix64 stream seeded with `seed`, so the
    dataset is a pure function of (n, noise, seed).  The default noise
    keeps stump ensembles in the few-percent test-error regime.
    """
    if n < 2:
        raise MDBoostError("need at least 2 points")
    gen = SplitMix64(seed)
    features = np.empty((n, 2))
    labels = np.empty(n)
    for i in range(n):
        theta = math.pi * gen.uniform()
        g1, g2 = gen.normal_pair()
        if i % 2 == 0:
            x, y = math.cos(theta), math.sin(theta)
            labels[i] = 1.0
        else:
            x, y = 1.0 - math.cos(theta), 0.5 - math.sin(theta)
            labels[i] = -1.0
        features[i, 0] = x + noise * g1
        features[i, 1] = y + noise * g2
    return Dataset(features, labels, feature_names=("x1", "x2"))
