"""Dense two-phase simplex solver.

All LPs in this package are tiny (at most a few hundred columns), so a
self-contained dense solver keeps results exactly reproducible: Bland's
anti-cycling rule fixes the pivot sequence, and ties between optimal bases
are resolved by the lowest-index entering column.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError

FEAS_TOL = 1e-9


class LpResult:
    def __init__(self, value: float, x: np.ndarray, basis: list[int]):
        self.value = value
        self.x = x
        self.basis = basis


def solve_lp(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None) -> LpResult:
    """Maximize c'x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0.

    Returns the optimum, the primal solution over the original columns and
    the sorted list of basic original-column indices (slacks omitted).
    Raises DomainError if the program is infeasible or unbounded.
    """
    c = np.asarray(c, dtype=float)
    n = c.size
    blocks, rhs = [], []
    n_ub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.asarray(A_ub, dtype=float).reshape(-1, n)
        blocks.append(A_ub)
        rhs.append(np.asarray(b_ub, dtype=float))
        n_ub = A_ub.shape[0]
    if A_eq is not None and len(A_eq):
        A_eq = np.asarray(A_eq, dtype=float).reshape(-1, n)
        blocks.append(A_eq)
        rhs.append(np.asarray(b_eq, dtype=float))
    if not blocks:
        raise DomainError("LP with no constraints")
    A = np.vstack(blocks)
    b = np.concatenate(rhs)
    m = A.shape[0]

    # Slack columns for the inequality rows.
    slack = np.zeros((m, n_ub))
    for i in range(n_ub):
        slack[i, i] = 1.0
    A = np.hstack([A, slack])

    # Normalize to b >= 0 so the phase-1 artificial basis is feasible.
    neg = b < 0
    A[neg] *= -1.0
    b = np.where(neg, -b, b)

    total = A.shape[1]
    # Phase 1: artificial columns form the starting basis.
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = list(range(total, total + m))
    obj1 = np.zeros(total + m)
    obj1[total:] = -1.0  # maximize -(sum of artificials)
    _simplex(T, basis, obj1, allowed=total + m)
    if -sum(obj1[j] * T[i, -1] for i, j in enumerate(basis)) > 1e-7:
        raise DomainError("infeasible linear program")
    T, basis = _drive_out_artificials(T, basis, total)

    # Phase 2 on the original + slack columns only.
    obj2 = np.zeros(total + m)
    obj2[:n] = c
    _simplex(T, basis, obj2, allowed=total)
    x = np.zeros(total)
    for i, j in enumerate(basis):
        if j < total:
            x[j] = T[i, -1]
    value = float(obj2[:total] @ x)
    return LpResult(value, x[:n], sorted(j for j in basis if j < n))


def _simplex(T, basis, obj, allowed):
    """Bland-rule simplex on tableau T; columns >= `allowed` never enter."""
    m = T.shape[0]
    while True:
        cb = np.array([obj[j] for j in basis])
        rc = obj[: T.shape[1] - 1] - cb @ T[:, :-1]
        entering = -1
        for j in range(allowed):
            if rc[j] > FEAS_TOL and j not in basis:
                entering = j
                break
        if entering < 0:
            return
        col = T[:, entering]
        leave = -1
        best = None
        for i in range(m):
            if col[i] > FEAS_TOL:
                ratio = T[i, -1] / col[i]
                if (
                    best is None
                    or ratio < best - FEAS_TOL
                    or (abs(ratio - best) <= FEAS_TOL and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            raise DomainError("unbounded linear program")
        _pivot(T, leave, entering)
        basis[leave] = entering


def _drive_out_artificials(T, basis, total):
    """Replace basic artificials by real columns; drop dependent rows."""
    drop = []
    for i in range(T.shape[0]):
        if basis[i] >= total:
            pivot_col = next(
                (j for j in range(total) if abs(T[i, j]) > FEAS_TOL), None
            )
            if pivot_col is None:
                drop.append(i)
            else:
                _pivot(T, i, pivot_col)
                basis[i] = pivot_col
    if drop:
        T = np.delete(T, drop, axis=0)
        basis = [basis[i] for i in range(len(basis)) if i not in drop]
    return T, basis


def _pivot(T, row, col):
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]
