"""Experiment orchestration: repeated splits, cross-validation over D,
checkpointed training, and persisted result tables."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .adaboost import AdaBoostParams, train_adaboost
from .core import Dataset, Ensemble, MDBoostError
from .datasets import SplitSpec, load_csv, split
from .margins import margin_report
from .training import TrainParams, predict_many, train

DEFAULT_D_GRID = (2.0, 5.0, 8.0, 10.0, 12.0, 15.0, 20.0, 30.0, 40.0,
                  50.0, 70.0, 90.0, 100.0, 120.0)
DATA_DIR_ENV = "MDBOOST_DATA_DIR"


@dataclass(frozen=True)
class ExperimentConfig:
    data_path: str
    algorithm: str  # "mdboost" | "adaboost"
    split: SplitSpec
    checkpoints: tuple[int, ...] = (100,)
    d_grid: tuple[float, ...] = DEFAULT_D_GRID
    delta: float = 1e-6
    epsilon: float = 1e-5

    def __post_init__(self):
        if self.algorithm not in ("mdboost", "adaboost"):
            raise MDBoostError(f"unknown algorithm {self.algorithm!r}")
        cps = tuple(int(c) for c in self.checkpoints)
        if not cps or any(c < 1 for c in cps):
            raise MDBoostError("checkpoints must be positive integers")
        if list(cps) != sorted(cps):
            raise MDBoostError("checkpoints must be ascending")
        object.__setattr__(self, "checkpoints", cps)
        grid = tuple(float(d) for d in self.d_grid)
        if self.algorithm == "mdboost" and not grid:
            raise MDBoostError("D grid must be nonempty for mdboost")
        if any(d <= 0 for d in grid):
            raise MDBoostError("D grid values must be positive")
        object.__setattr__(self, "d_grid", grid)

    def to_dict(self) -> dict:
        return {
            "data": self.data_path,
            "algorithm": self.algorithm,
            "split": {
                "train_frac": self.split.train_frac,
                "val_frac": self.split.val_frac,
                "test_frac": self.split.test_frac,
                "seed": self.split.seed,
                "repeats": self.split.repeats,
            },
            "checkpoints": list(self.checkpoints),
            "d_grid": list(self.d_grid),
            "delta": self.delta,
            "epsilon": self.epsilon,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        try:
            split_doc = doc["split"]
            spec = SplitSpec(
                train_frac=split_doc["train_frac"],
                val_frac=split_doc["val_frac"],
                test_frac=split_doc["test_frac"],
                seed=int(split_doc.get("seed", 0)),
                repeats=int(split_doc.get("repeats", 1)),
            )
            return cls(
                data_path=doc["data"],
                algorithm=doc["algorithm"],
                split=spec,
                checkpoints=tuple(doc.get("checkpoints", (100,))),
                d_grid=tuple(doc.get("d_grid", DEFAULT_D_GRID)),
                delta=float(doc.get("delta", 1e-6)),
                epsilon=float(doc.get("epsilon", 1e-5)),
            )
        except KeyError as exc:
            raise MDBoostError(f"experiment config missing key {exc}") from None


@dataclass(frozen=True)
class ResultRow:
    repeat: int
    checkpoint: int
    chosen_d: Optional[float]
    train_error: float
    test_error: float
    margin_mean: float
    margin_variance: float


@dataclass(frozen=True)
class Aggregate:
    checkpoint: int
    test_mean: float
    test_std: float
    train_mean: float
    train_std: float


@dataclass
class ResultsTable:
    config: dict
    rows: list[ResultRow] = field(default_factory=list)
    aggregates: list[Aggregate] = field(default_factory=list)


def resolve_data_path(path: str) -> str:
    """Relative paths resolve against $MDBOOST_DATA_DIR when it is set."""
    base = os.environ.get(DATA_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def error_rate(ensemble: Ensemble, dataset: Dataset) -> float:
    preds = predict_many(ensemble, dataset.features)
    return float(np.mean(preds != dataset.labels))


def cross_validate_d(train_ds: Dataset, val_ds: Dataset, grid,
                     *, delta: float = 1e-6, epsilon: float = 1e-5,
                     n_max: int = 100, seed: int = 0) -> float:
    """Smallest D in the grid minimizing validation error (ties go small)."""
    if not grid:
        raise MDBoostError("D grid must be nonempty")
    best_d = None
    best_err = np.inf
    for d in sorted(float(g) for g in grid):
        ensemble, _ = train(train_ds, TrainParams(
            d=d, epsilon=epsilon, delta=delta, n_max=n_max, seed=seed))
        err = error_rate(ensemble, val_ds)
        if err < best_err:
            best_err = err
            best_d = d
    return best_d


def _train_at_checkpoint(config: ExperimentConfig, train_ds: Dataset,
                         checkpoint: int, chosen_d: Optional[float]):
    if config.algorithm == "mdboost":
        ensemble, _ = train(train_ds, TrainParams(
            d=chosen_d, epsilon=config.epsilon, delta=config.delta,
            n_max=checkpoint, seed=config.split.seed))
    else:
        ensemble, _ = train_adaboost(train_ds, AdaBoostParams(
            t_max=checkpoint, seed=config.split.seed))
    return ensemble


def run_experiment(config: ExperimentConfig) -> ResultsTable:
    """Repeat split / cross-validate / train / evaluate, then aggregate.

    A checkpoint is an iteration cap (n_max for the totally-corrective
    trainer, t_max for AdaBoost).  Because each trainer is deterministic
    and incremental, a run that converges before a checkpoint yields the
    same ensemble at every later checkpoint, which carries its errors
    forward.  D is cross-validated once per repeat (budget: the largest
    checkpoint).
    """
    dataset = load_csv(resolve_data_path(config.data_path))
    rows: list[ResultRow] = []
    for repeat in range(config.split.repeats):
        train_ds, val_ds, test_ds = split(dataset, config.split, repeat)
        chosen_d = None
        if config.algorithm == "mdboost":
            chosen_d = cross_validate_d(
                train_ds, val_ds, config.d_grid,
                delta=config.delta, epsilon=config.epsilon,
                n_max=max(config.checkpoints), seed=config.split.seed)
        for checkpoint in config.checkpoints:
            ensemble = _train_at_checkpoint(config, train_ds, checkpoint, chosen_d)
            report = margin_report(ensemble, train_ds)
            rows.append(ResultRow(
                repeat=repeat,
                checkpoint=checkpoint,
                chosen_d=chosen_d,
                train_error=error_rate(ensemble, train_ds),
                test_error=error_rate(ensemble, test_ds),
                margin_mean=report.mean,
                margin_variance=report.variance,
            ))

    aggregates = []
    for checkpoint in config.checkpoints:
        test = np.array([r.test_error for r in rows if r.checkpoint == checkpoint])
        tr = np.array([r.train_error for r in rows if r.checkpoint == checkpoint])
        aggregates.append(Aggregate(
            checkpoint=checkpoint,
            test_mean=float(test.mean()),
            test_std=float(test.std(ddof=1)) if test.size > 1 else 0.0,
            train_mean=float(tr.mean()),
            train_std=float(tr.std(ddof=1)) if tr.size > 1 else 0.0,
        ))
    return ResultsTable(config=config.to_dict(), rows=rows, aggregates=aggregates)


def save_results(path, table: ResultsTable) -> None:
    doc = {
        "config": table.config,
        "rows": [
            {
                "repeat": r.repeat,
                "checkpoint": r.checkpoint,
                "chosen_d": r.chosen_d,
                "train_error": r.train_error,
                "test_error": r.test_error,
                "margin_mean": r.margin_mean,
                "margin_variance": r.margin_variance,
            }
            for r in table.rows
        ],
        "aggregates": [
            {
                "checkpoint": a.checkpoint,
                "test_mean": a.test_mean,
                "test_std": a.test_std,
                "train_mean": a.train_mean,
                "train_std": a.train_std,
            }
            for a in table.aggregates
        ],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_results(path) -> ResultsTable:
    with open(path) as fh:
        doc = json.load(fh)
    rows = [ResultRow(**row) for row in doc["rows"]]
    aggregates = [Aggregate(**agg) for agg in doc["aggregates"]]
    return ResultsTable(config=doc["config"], rows=rows, aggregates=aggregates)
