"""Nonparametric classifier-comparison tests: Wilcoxon signed-rank,
Friedman, and the Bonferroni-Dunn post hoc.

All tests are oriented "larger statistic = stronger evidence that the
first / control algorithm is better", matching how boosting comparisons
are usually tabulated.  Errors are error rates, so rank 1 = lowest error.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.stats import chi2, norm, rankdata

from .core import MDBoostError


@dataclass(frozen=True)
class ErrorTable:
    algorithms: tuple[str, ...]
    datasets: tuple[str, ...]
    errors: np.ndarray  # n_datasets x k

    def __post_init__(self):
        E = np.asarray(self.errors, dtype=np.float64)
        if E.ndim != 2:
            raise MDBoostError("errors must be a 2-D matrix")
        n, k = E.shape
        if k < 2 or n < 2:
            raise MDBoostError("need at least 2 algorithms and 2 datasets")
        if len(self.algorithms) != k or len(self.datasets) != n:
            raise MDBoostError("name lists do not match the error matrix")
        if np.isnan(E).any():
            raise MDBoostError("NaN entries are rejected")
        E.setflags(write=False)
        object.__setattr__(self, "errors", E)
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "datasets", tuple(self.datasets))

    def column(self, name: str) -> np.ndarray:
        try:
            return self.errors[:, self.algorithms.index(name)]
        except ValueError:
            raise MDBoostError(f"unknown algorithm {name!r}") from None


@dataclass(frozen=True)
class TestDecision:
    statistic: float
    critical_value: float
    better: bool
    degenerate: bool = False


# Exact one-tail alpha=0.05 lower critical values for the signed-rank sum,
# N = 5..25: largest c with P(W <= c) <= 0.05 under H0.  "Better" uses the
# mirrored upper value N(N+1)/2 - c.
_WILCOXON_LOWER_05 = {
    5: 0, 6: 2, 7: 3, 8: 5, 9: 8, 10: 10, 11: 13, 12: 17, 13: 21,
    14: 25, 15: 30, 16: 35, 17: 41, 18: 47, 19: 53, 20: 60, 21: 67,
    22: 75, 23: 83, 24: 91, 25: 100,
}


def signed_rank_lower_critical(n: int, alpha: float) -> int | None:
    """Largest c with P(W <= c) <= alpha, from the exact null distribution.

    None when no rejection is possible (e.g. n < 5 at alpha = 0.05).
    """
    total = n * (n + 1) // 2
    counts = [0] * (total + 1)
    counts[0] = 1
    for k in range(1, n + 1):
        for s in range(total, k - 1, -1):
            counts[s] += counts[s - k]
    denom = 2.0 ** n
    cum = 0.0
    best = None
    for c in range(total + 1):
        cum += counts[c]
        if cum / denom <= alpha:
            best = c
        else:
            break
    return best


def wilcoxon_signed_rank(errors_a: np.ndarray, errors_b: np.ndarray,
                         alpha: float = 0.05) -> TestDecision:
    """One-tail signed-rank test of "A better than B" on paired error rates.

    Differences d_i = errors_b[i] - errors_a[i] (positive favors A) are
    ranked by absolute value with average ranks for ties; the statistic is
    the positive rank sum R+.  Zero differences follow the even-split
    convention: one is dropped when their count is odd, the rest are
    ranked and their rank mass is shared half-and-half between R+ and R-.
    The critical value is exact for effective N <= 25 (tabulated at
    alpha = 0.05), and a continuity-corrected normal approximation beyond.
    """
    a = np.asarray(errors_a, dtype=np.float64).ravel()
    b = np.asarray(errors_b, dtype=np.float64).ravel()
    if a.shape != b.shape:
        raise MDBoostError("paired error vectors must have equal length")
    d = b - a

    if np.all(d == 0.0):
        return TestDecision(statistic=0.0, critical_value=0.0,
                            better=False, degenerate=True)

    zero_idx = np.nonzero(d == 0.0)[0]
    if zero_idx.size % 2 == 1:
        d = np.delete(d, zero_idx[0])
    n_eff = d.size
    ranks = rankdata(np.abs(d), method="average")
    r_plus = float(np.sum(ranks[d > 0.0]) + 0.5 * np.sum(ranks[d == 0.0]))

    total = n_eff * (n_eff + 1) / 2.0
    if n_eff <= 25:
        if alpha == 0.05:
            lower = _WILCOXON_LOWER_05.get(n_eff)
        else:
            lower = signed_rank_lower_critical(n_eff, alpha)
        if lower is None:
            # no rejection region exists at this alpha
            return TestDecision(statistic=r_plus, critical_value=total + 1.0,
                                better=False, degenerate=True)
        critical = total - lower
    else:
        mean = total / 2.0
        sd = np.sqrt(n_eff * (n_eff + 1) * (2 * n_eff + 1) / 24.0)
        critical = mean + 0.5 + norm.ppf(1.0 - alpha) * sd
    return TestDecision(statistic=r_plus, critical_value=float(critical),
                        better=r_plus >= critical)


def friedman(table: ErrorTable, alpha: float = 0.05):
    """Friedman chi-square over the rank table.

    Returns (statistic, average_ranks, reject); rank 1 is the lowest error
    per dataset, ties share average ranks, and the null (all algorithms
    perform alike) is rejected when the statistic exceeds the chi-square
    quantile with k-1 degrees of freedom.
    """
    n, k = table.errors.shape
    ranks = np.vstack([rankdata(row, method="average") for row in table.errors])
    avg_ranks = ranks.mean(axis=0)
    statistic = 12.0 * n / (k * (k + 1)) * (
        float(np.sum(avg_ranks ** 2)) - k * (k + 1) ** 2 / 4.0)
    critical = float(chi2.ppf(1.0 - alpha, k - 1))
    return float(statistic), avg_ranks, bool(statistic > critical)


# The comparison protocol fixes 2.291 as the four-classifier critical
# value at the 95% level; other configurations fall back to the
# Bonferroni-corrected two-tailed normal quantile.
_BD_PROTOCOL_CRITICAL = {(4, 0.05): 2.291}


def bonferroni_dunn(average_ranks: np.ndarray, n_datasets: int,
                    control_index: int, alpha: float = 0.05) -> list[TestDecision]:
    """Control-vs-each post hoc on Friedman average ranks.

    For each non-control algorithm j the statistic is
    z = (rank_j - rank_control) / sqrt(k(k+1)/(6N)); z above the critical
    value declares the control better than j.  Decisions are returned in
    ascending j order, skipping the control itself.
    """
    ranks = np.asarray(average_ranks, dtype=np.float64).ravel()
    k = ranks.size
    if k < 2 or n_datasets < 2:
        raise MDBoostError("need at least 2 algorithms and 2 datasets")
    if not 0 <= control_index < k:
        raise MDBoostError("control index out of range")
    critical = _BD_PROTOCOL_CRITICAL.get((k, alpha))
    if critical is None:
        critical = float(norm.ppf(1.0 - alpha / (2.0 * (k - 1))))
    se = np.sqrt(k * (k + 1) / (6.0 * n_datasets))
    decisions = []
    for j in range(k):
        if j == control_index:
            continue
        z = float((ranks[j] - ranks[control_index]) / se)
        decisions.append(TestDecision(statistic=z, critical_value=critical,
                                      better=z > critical))
    return decisions


def read_error_table(path) -> ErrorTable:
    """CSV with algorithm names in the header row and dataset names in column 0."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if len(rows) < 3:
        raise MDBoostError("error table needs a header and at least 2 dataset rows")
    algorithms = tuple(cell.strip() for cell in rows[0][1:])
    datasets = []
    errors = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(algorithms) + 1:
            raise MDBoostError(f"row {i}: expected {len(algorithms) + 1} cells")
        datasets.append(row[0].strip())
        try:
            errors.append([float(cell) for cell in row[1:]])
        except ValueError as exc:
            raise MDBoostError(f"row {i}: non-numeric error value ({exc})") from None
    return ErrorTable(algorithms=algorithms, datasets=tuple(datasets),
                      errors=np.array(errors))
