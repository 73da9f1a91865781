"""Dense bounded-variable primal simplex.

Solves ``max c.x  s.t.  A x <= b, 0 <= x <= u`` with ``b >= 0``, so the
all-slack basis is feasible and no phase one is needed. Nonbasic variables
sit at either bound; the ratio test includes the entering variable's own
bound flip. Pricing is Dantzig's rule and switches to Bland's rule after a
run of degenerate pivots, which guarantees termination.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, SolverError

__all__ = ["LPResult", "solve_bounded_lp"]


@dataclass
class LPResult:
    x: np.ndarray
    objective: float
    duals: np.ndarray
    dual_objective: float
    iterations: int

    @property
    def gap(self) -> float:
        return self.dual_objective - self.objective


def solve_bounded_lp(c, A, b, upper=None, tol=1e-9, max_iter=None, degenerate_limit=50,
                     gap_tol=1e-7) -> LPResult:
    c = np.asarray(c, dtype=float)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    if c.shape != (n,) or b.shape != (m,):
        raise ParameterError("dimension mismatch between c, A and b")
    if np.any(b < 0):
        raise ParameterError("right-hand side must be non-negative")
    u = np.ones(n) if upper is None else np.asarray(upper, dtype=float)
    if np.any(u < 0):
        raise ParameterError("upper bounds must be non-negative")
    if max_iter is None:
        max_iter = 50 * (m + n) + 1000

    ub = np.concatenate([u, np.full(m, np.inf)])
    T = np.hstack([A, np.eye(m)])  # B^-1 [A I]
    beta = b.copy()  # values of basic variables
    basis = np.arange(n, n + m)
    cost = np.concatenate([c, np.zeros(m)])
    at_upper = np.zeros(n + m, dtype=bool)
    is_basic = np.zeros(n + m, dtype=bool)
    is_basic[basis] = True
    # variables with zero upper bound never move
    fixed = ub <= 0

    degenerate = 0
    bland = False
    it = 0
    while True:
        y = cost[basis] @ T[:, n:]  # duals: c_B B^-1
        d = cost - y @ np.hstack([A, np.eye(m)])
        improve = np.where(at_upper, -d, d)
        improve[is_basic | fixed] = 0.0
        cand = np.flatnonzero(improve > tol)
        if cand.size == 0:
            break
        if it >= max_iter:
            raise SolverError("simplex iteration limit reached", iterations=it,
                              diagnostics={"max_improvement": float(improve.max())})
        it += 1
        q = int(cand[0]) if bland else int(cand[np.argmax(improve[cand])])
        sigma = -1.0 if at_upper[q] else 1.0
        alpha = T[:, q] * sigma
        # basic variables move by -theta * alpha
        ratios = np.full(m, np.inf)
        down = alpha > tol
        ratios[down] = beta[down] / alpha[down]
        up = (alpha < -tol) & np.isfinite(ub[basis])
        ratios[up] = (ub[basis][up] - beta[up]) / (-alpha[up])
        theta = ub[q]
        leave = -1
        leave_to_upper = False
        if m and ratios.min() < theta:
            theta = float(ratios.min())
            ties = np.flatnonzero(ratios <= theta + 1e-12)
            if bland:
                leave = int(ties[np.argmin(basis[ties])])
            else:
                leave = int(ties[np.argmax(np.abs(alpha[ties]))])
            leave_to_upper = bool(up[leave])
        if not np.isfinite(theta):
            raise SolverError("LP is unbounded", iterations=it)
        theta = max(theta, 0.0)
        degenerate = degenerate + 1 if theta <= 1e-12 else 0
        if degenerate > degenerate_limit:
            bland = True
        beta -= theta * alpha
        if leave < 0:
            at_upper[q] = not at_upper[q]
            continue
        # pivot: q enters at row `leave`
        entering_value = (ub[q] - theta if at_upper[q] else theta)
        old = basis[leave]
        piv = T[leave, q]
        T[leave] /= piv
        col = T[:, q].copy()
        col[leave] = 0.0
        T -= np.outer(col, T[leave])
        beta[leave] = entering_value
        basis[leave] = q
        is_basic[q] = True
        is_basic[old] = False
        at_upper[q] = False
        at_upper[old] = leave_to_upper
        np.clip(beta, 0.0, ub[basis], out=beta)

    x = np.where(at_upper, ub, 0.0)
    x[basis] = beta
    x = x[:n]
    objective = float(c @ x)
    y = np.maximum(cost[basis] @ T[:, n:], 0.0)
    z = np.maximum(c - y @ A, 0.0)
    finite = np.isfinite(u)
    dual_objective = float(b @ y + u[finite] @ z[finite])
    result = LPResult(x, objective, y, dual_objective, it)
    if abs(result.gap) > gap_tol * (1 + abs(objective)):
        raise SolverError("duality gap above tolerance", iterations=it,
                          diagnostics={"gap": result.gap, "objective": objective})
    return result
