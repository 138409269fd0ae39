"""Restricted master problem: a convex QP over the scaled simplex.

With B the matrix of signed columns (B_ij = y_i * h_j(x_i)) the problem is

    min_w  1/2 (Bw)^T (A + delta*I) (Bw) - 1^T (Bw)
    s.t.   w >= 0,  sum(w) = D.

It is solved in the primal (dimension = number of generated columns,
usually far below M) by a warm-started active-set method: equality-
constrained KKT solves on the current support, dropping coordinates
driven negative and adding the coordinate with the most negative reduced
cost until none remains.  The structure of A + delta*I keeps everything
cheap: the Hessian is c*G - col_sums col_sums^T/(M-1) with G = B^T B and
c = M/(M-1) + delta, so no M x M object is ever formed.

The dual pair (u, r) then follows in closed form from the stationarity
relation u = 1 - (A + delta*I) rho and the largest restricted edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import MDBoostError, ScatterOperator, primal_objective

MAX_PIVOTS_BASE = 50


@dataclass(frozen=True)
class RestrictedProblem:
    """Signed columns of the stumps generated so far, plus D and the scatter operator."""

    signed_columns: np.ndarray  # M x N, entries +/-1
    d_target: float
    scatter: ScatterOperator

    def __post_init__(self):
        B = np.ascontiguousarray(np.asarray(self.signed_columns, dtype=np.float64))
        if B.ndim != 2 or B.shape[1] < 1:
            raise MDBoostError("need at least one signed column")
        if B.shape[0] != self.scatter.m:
            raise MDBoostError("column length does not match scatter operator")
        if not np.all(np.abs(B) == 1.0):
            raise MDBoostError("signed columns must have +/-1 entries")
        if self.d_target <= 0:
            raise MDBoostError("D must be positive")
        B.setflags(write=False)
        object.__setattr__(self, "signed_columns", B)

    @property
    def n_columns(self) -> int:
        return self.signed_columns.shape[1]


@dataclass(frozen=True)
class PrimalSolution:
    w: np.ndarray
    rho: np.ndarray
    objective: float


@dataclass(frozen=True)
class DualState:
    """Dual variables of the restricted problem: u, the edge cap r, and per-column slacks r - edge_j."""

    u: np.ndarray
    r: float
    slacks: np.ndarray


def project_simplex(v: np.ndarray, d_target: float) -> np.ndarray:
    """Exact Euclidean projection onto {w >= 0, sum(w) = D}.

    Sort-based threshold algorithm: find tau so that sum(max(v - tau, 0))
    equals D, which the partial sums of the descending sort expose directly.
    """
    if d_target <= 0:
        raise MDBoostError("D must be positive")
    v = np.asarray(v, dtype=np.float64).ravel()
    u = np.sort(v)[::-1]
    shifted = np.cumsum(u) - d_target
    ks = np.arange(1, v.size + 1)
    valid = u - shifted / ks > 0
    k = int(np.nonzero(valid)[0][-1]) + 1
    tau = shifted[k - 1] / k
    return np.maximum(v - tau, 0.0)


class _QuadraticForm:
    """Hessian/gradient access through the gram matrix, never touching M x M."""

    def __init__(self, problem: RestrictedProblem, gram: Optional[np.ndarray]):
        B = problem.signed_columns
        self.gram = B.T @ B if gram is None else np.asarray(gram, dtype=np.float64)
        if self.gram.shape != (B.shape[1], B.shape[1]):
            raise MDBoostError("gram matrix shape does not match the columns")
        self.col_sums = B.sum(axis=0)
        self.c = problem.scatter.diag_coeff
        self.inv_m1 = 1.0 / (problem.scatter.m - 1)
        # linear term: f(w) = 1/2 w^T Q w - col_sums^T w
        self.lin = self.col_sums

    def hess_block(self, idx: np.ndarray) -> np.ndarray:
        cs = self.col_sums[idx]
        return self.c * self.gram[np.ix_(idx, idx)] - self.inv_m1 * np.outer(cs, cs)

    def gradient(self, support: np.ndarray, w_s: np.ndarray) -> np.ndarray:
        bw_dot = self.col_sums[support] @ w_s
        return (self.c * (self.gram[:, support] @ w_s)
                - self.inv_m1 * bw_dot * self.col_sums - self.lin)


def _kkt_step(quad: _QuadraticForm, support: np.ndarray,
              d_target: float) -> tuple[np.ndarray, float]:
    """Minimize over {w_support, sum = D} with the rest pinned at zero."""
    k = support.size
    kkt = np.zeros((k + 1, k + 1))
    kkt[:k, :k] = quad.hess_block(support)
    kkt[:k, k] = 1.0
    kkt[k, :k] = 1.0
    rhs = np.append(quad.lin[support], d_target)
    try:
        sol = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError:
        # linearly dependent support columns: tiny ridge keeps it determinate
        ridge = 1e-10 * max(1.0, float(np.trace(kkt[:k, :k])) / k)
        kkt[:k, :k] += ridge * np.eye(k)
        sol = np.linalg.solve(kkt, rhs)
    return sol[:k], float(sol[k])


def solve_restricted(
    problem: RestrictedProblem,
    warm_start: Optional[np.ndarray] = None,
    warm_rho: Optional[np.ndarray] = None,
    gram: Optional[np.ndarray] = None,
) -> PrimalSolution:
    """Global minimizer of the restricted master problem.

    warm_start seeds both the iterate and the active set (the column-
    generation loop passes the previous optimum padded with a zero, with
    warm_rho its margin vector); gram optionally supplies the precomputed
    B^T B so the loop can grow it incrementally.  The result is never
    worse than the warm start: if floating rounding leaves the re-solved
    point without a measurable improvement, the warm start is returned
    unchanged, which keeps restricted objectives exactly non-increasing
    across column-generation iterations.
    """
    B = problem.signed_columns
    op = problem.scatter
    d_target = problem.d_target
    m, n = B.shape
    quad = _QuadraticForm(problem, gram)

    start_solution: Optional[PrimalSolution] = None
    if warm_start is not None:
        w = np.asarray(warm_start, dtype=np.float64).ravel().copy()
        if w.shape[0] != n:
            raise MDBoostError("warm start length does not match column count")
        if np.any(w < 0.0) or abs(w.sum() - d_target) > 1e-9 * d_target:
            w = project_simplex(w, d_target)
            warm_rho = None
        rho0 = B @ w if warm_rho is None else np.asarray(warm_rho, dtype=np.float64)
        if rho0.shape[0] != m:
            raise MDBoostError("warm rho length does not match example count")
        start_solution = PrimalSolution(w=w.copy(), rho=rho0,
                                        objective=primal_objective(op, rho0))
        support_mask = w > 0.0
        if not support_mask.any():
            support_mask[int(np.argmax(quad.lin))] = True
    else:
        w = np.zeros(n)
        best_col = int(np.argmax(quad.lin))
        w[best_col] = d_target
        support_mask = w > 0.0

    max_pivots = MAX_PIVOTS_BASE + 10 * n
    for _ in range(max_pivots):
        support = np.nonzero(support_mask)[0]
        w_hat, lam = _kkt_step(quad, support, d_target)

        if np.min(w_hat) < 0.0:
            # partial step to the first blocking coordinate, then drop it
            w_s = w[support]
            negative = w_hat < 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                steps = np.where(negative, w_s / (w_s - w_hat), np.inf)
            block = int(np.argmin(steps))
            t = float(steps[block])
            w[support] = w_s + min(max(t, 0.0), 1.0) * (w_hat - w_s)
            w[support[block]] = 0.0
            support_mask[support[block]] = False
            if not support_mask.any():
                support_mask[support[block]] = True  # degenerate; keep one column
                break
            continue

        w = np.zeros(n)
        w[support] = w_hat
        grad = quad.gradient(support, w_hat)
        reduced = grad + lam
        reduced[support] = 0.0
        worst = int(np.argmin(reduced))
        tol = 1e-10 * max(1.0, abs(lam), float(np.max(np.abs(grad))))
        if reduced[worst] >= -tol:
            break
        support_mask[worst] = True

    rho = B @ w
    candidate = PrimalSolution(w=w, rho=rho, objective=primal_objective(op, rho))
    if start_solution is not None and candidate.objective > start_solution.objective:
        return start_solution
    return candidate


def stationarity_residual(problem: RestrictedProblem, solution: PrimalSolution,
                          step: float = 1.0) -> float:
    """Projected-gradient-mapping norm at the solution (0 at exact optimality)."""
    B = problem.signed_columns
    grad = B.T @ (problem.scatter.apply(solution.rho) - 1.0)
    moved = project_simplex(solution.w - step * grad, problem.d_target)
    return float(np.linalg.norm(solution.w - moved) / step)


def recover_dual(problem: RestrictedProblem, primal: PrimalSolution) -> DualState:
    """Closed-form dual: u = 1 - (A + delta*I) rho, r = largest restricted edge."""
    op = problem.scatter
    u = 1.0 - op.apply(primal.rho)
    edges = problem.signed_columns.T @ u
    r = float(np.max(edges))
    return DualState(u=u, r=r, slacks=r - edges)


def dual_objective(problem: RestrictedProblem, dual: DualState) -> float:
    """-D*r - 1/2 (u-1)^T (A + delta*I)^{-1} (u-1); equals the primal optimum at the saddle point."""
    diff = dual.u - 1.0
    return -problem.d_target * dual.r - 0.5 * float(diff @ problem.scatter.solve(diff))
