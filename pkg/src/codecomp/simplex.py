"""Phase-one simplex for equality-constrained feasibility problems.

Solves ``min 1'a`` subject to ``A x + a = b``, ``x >= 0``, ``a >= 0`` on a
dense tableau.  Bland's rule (lowest-index entering column, lowest-index
basic variable on ratio ties) rules out cycling on degenerate problems.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SimplexError(RuntimeError):
    pass


@dataclass
class PhaseOneResult:
    x: np.ndarray
    artificial: np.ndarray
    objective: float
    iterations: int
    basis: np.ndarray


def phase_one(
    A_eq,
    b_eq,
    pivot_tol: float = 1e-11,
    cost_tol: float = 1e-12,
    max_iter: int | None = None,
) -> PhaseOneResult:
    """Minimize the total artificial slack needed to satisfy ``A_eq x = b_eq``.

    The optimum is 0 exactly when the system has a non-negative solution.
    """
    A = np.array(A_eq, dtype=np.float64)
    b = np.array(b_eq, dtype=np.float64).ravel()
    m, n = A.shape
    if b.size != m:
        raise ValueError(f"b has {b.size} entries, A has {m} rows")
    neg = b < 0
    A[neg] *= -1.0
    b[neg] *= -1.0

    # tableau columns: x (n), artificials (m), rhs; last row: reduced costs
    tab = np.zeros((m + 1, n + m + 1))
    tab[:m, :n] = A
    tab[:m, n:n + m] = np.eye(m)
    tab[:m, -1] = b
    tab[m, :n] = -A.sum(axis=0)
    tab[m, -1] = -b.sum()
    basis = np.arange(n, n + m)

    if max_iter is None:
        max_iter = 50 * (n + m) + 1000
    it = 0
    while True:
        reduced = tab[m, : n + m]
        candidates = np.nonzero(reduced < -cost_tol)[0]
        if candidates.size == 0:
            break
        if it >= max_iter:
            raise SimplexError(f"no convergence after {max_iter} pivots")
        j = candidates[0]
        col = tab[:m, j]
        rows = np.nonzero(col > pivot_tol)[0]
        if rows.size == 0:
            # cannot happen for a phase-one objective bounded below by 0
            raise SimplexError("unbounded direction in phase one")
        ratios = tab[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        i = tied[np.argmin(basis[tied])]
        tab[i] /= tab[i, j]
        others = tab[:, j].copy()
        others[i] = 0.0
        tab -= np.outer(others, tab[i])
        tab[:m, -1] = np.maximum(tab[:m, -1], 0.0)
        basis[i] = j
        it += 1

    values = np.zeros(n + m)
    values[basis] = tab[:m, -1]
    art = values[n:]
    return PhaseOneResult(
        x=values[:n],
        artificial=art,
        objective=float(art.sum()),
        iterations=it,
        basis=basis.copy(),
    )
