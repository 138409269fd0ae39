"""Margin-distribution analytics and the Gaussian view of the exponential loss.

The normalized margin divides rho_i = y_i F(x_i) by the coefficient sum,
landing in [-1, 1].  Two variance scales are reported: the conventional
unbiased sample variance and the pairwise form
sum_{i>j} (rho_i - rho_j)^2 / (M-1), which equals M times the unbiased
variance (identity: sum_{i>j} (rho_i - rho_j)^2 = M*sum rho^2 - (sum rho)^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Dataset, Ensemble, MDBoostError, margin_vector


@dataclass(frozen=True)
class MarginReport:
    normalized_margins: np.ndarray
    mean: float
    variance: float            # unbiased, 1/(M-1)
    variance_pairwise: float   # pairwise-scatter scale, M * variance
    minimum: float
    cumulative: tuple[tuple[float, float], ...]
    degenerate: bool = False   # True for M = 1, where variance is undefined


def margin_report(ensemble: Ensemble, dataset: Dataset) -> MarginReport:
    """Normalized margins plus summary statistics and the empirical CDF.

    The cumulative distribution is emitted as step-function sample points,
    one per distinct margin value, with the final frequency exactly 1.
    """
    weight_sum = ensemble.weight_sum()
    if weight_sum <= 0:
        raise MDBoostError("zero weight sum")
    norm = margin_vector(ensemble, dataset) / weight_sum
    m = norm.size
    degenerate = m < 2
    variance = 0.0 if degenerate else float(np.var(norm, ddof=1))
    values, counts = np.unique(norm, return_counts=True)
    cum = np.cumsum(counts) / m
    cumulative = tuple((float(v), float(c)) for v, c in zip(values, cum))
    return MarginReport(
        normalized_margins=norm,
        mean=float(np.mean(norm)),
        variance=variance,
        variance_pairwise=m * variance,
        minimum=float(np.min(norm)),
        cumulative=cumulative,
        degenerate=degenerate,
    )


def gaussian_cost_approx(mu: float, sigma_sq: float) -> float:
    """-mu + sigma_sq/2: the log of E[exp(-rho)] for rho ~ Gaussian(mu, sigma).

    Its negation, mu - sigma_sq/2, is the quantity the exponential loss
    implicitly maximizes: average margin up, margin variance down.
    """
    if sigma_sq < 0:
        raise MDBoostError("variance must be nonnegative")
    return -mu + 0.5 * sigma_sq


# Rational approximation of the Gauss error function (Abramowitz & Stegun
# 7.1.26), absolute error <= 1.5e-7; diagnostics do not need more.
_ERF_P = 0.3275911
_ERF_A = (0.254829592, -0.284496736, 1.421413741, -1.453152027, 1.061405429)


def erf_approx(x: float) -> float:
    if math.isnan(x):
        return x
    ax = abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    a1, a2, a3, a4, a5 = _ERF_A
    poly = ((((a5 * t + a4) * t + a3) * t + a2) * t + a1) * t
    val = 1.0 - poly * math.exp(-ax * ax)
    return math.copysign(val, x)


def gaussian_cost_truncated(mu: float, sigma: float, rho1: float, rho2: float) -> float:
    """log of the integral of Gaussian(mu, sigma) * exp(-rho) over [rho1, rho2].

    Closed form: completing the square gives
    -log 2 - mu + sigma^2/2 + log(erf(z2) - erf(z1)) with
    z = (rho - mu)/(sqrt(2) sigma) + sigma/sqrt(2).  As the range widens
    the erf difference tends to 2 and the result converges to
    gaussian_cost_approx(mu, sigma^2).
    """
    if sigma <= 0:
        raise MDBoostError("sigma must be positive")
    if rho1 >= rho2:
        raise MDBoostError("need rho1 < rho2")
    root2 = math.sqrt(2.0)

    def z(rho: float) -> float:
        return (rho - mu) / (root2 * sigma) + sigma / root2

    diff = erf_approx(z(rho2)) - erf_approx(z(rho1))
    if diff <= 0.0:
        return -math.inf
    return -math.log(2.0) - mu + 0.5 * sigma * sigma + math.log(diff)


def feature_frequency(ensembles: list[Ensemble], d: int) -> np.ndarray:
    """Per-feature selection counts (members with positive weight), averaged over ensembles."""
    if not ensembles:
        raise MDBoostError("need at least one ensemble")
    counts = np.zeros(d)
    for ensemble in ensembles:
        for w, stump in ensemble.members:
            if w > 0 and stump.feature_index < d:
                counts[stump.feature_index] += 1
    return counts / len(ensembles)


def gaussian_shape_screen(values: np.ndarray,
                          skew_limit: float = 0.5,
                          kurtosis_limit: float = 1.0) -> dict:
    """Skewness / excess-kurtosis screen for rough Gaussianity.

    A diagnostic, not a guarantee: voting margins only approach a Gaussian
    when the selected weak classifiers err roughly independently, which
    real ensembles may violate.
    """
    x = np.asarray(values, dtype=np.float64)
    mu = float(np.mean(x))
    sd = float(np.std(x))
    if sd == 0:
        return {"skewness": 0.0, "excess_kurtosis": 0.0, "passes": True}
    centered = (x - mu) / sd
    skew = float(np.mean(centered ** 3))
    kurt = float(np.mean(centered ** 4) - 3.0)
    return {
        "skewness": skew,
        "excess_kurtosis": kurt,
        "passes": abs(skew) < skew_limit and abs(kurt) < kurtosis_limit,
    }


def write_margin_csv(path, report: MarginReport) -> None:
    """CSV of the empirical margin CDF, prefixed with summary comment lines."""
    with open(path, "w") as fh:
        fh.write(f"# mean={report.mean!r}\n")
        fh.write(f"# variance={report.variance!r}\n")
        fh.write(f"# variance_pairwise={report.variance_pairwise!r}\n")
        fh.write(f"# min={report.minimum!r}\n")
        fh.write("margin,cumulative_frequency\n")
        for value, freq in report.cumulative:
            fh.write(f"{value!r},{freq!r}\n")


def write_feature_frequency_csv(path, frequencies: np.ndarray, feature_names=None) -> None:
    names = feature_names or [f"f{i}" for i in range(len(frequencies))]
    with open(path, "w") as fh:
        fh.write("feature_index,feature_name,frequency\n")
        for i, (name, freq) in enumerate(zip(names, frequencies)):
            fh.write(f"{i},{name},{float(freq)!r}\n")
