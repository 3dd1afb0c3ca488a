"""Phase-1 simplex for small dense equality systems with sign constraints.

Decides whether {x : A x = b, x >= 0} is non-empty by minimizing the sum
of artificial variables, using Bland's rule for anti-cycling. The
systems here are tiny (tens of rows, at most a few thousand columns),
so a dense tableau is the simplest correct tool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PIVOT_EPS = 1e-11
FEASIBILITY_TOLERANCE = 1e-9


@dataclass(frozen=True)
class PhaseOneResult:
    feasible: bool
    artificial_sum: float
    witness: np.ndarray | None   # x with A x = b, x >= 0, when feasible


def phase_one_feasible(a: np.ndarray, b: np.ndarray,
                       tolerance: float = FEASIBILITY_TOLERANCE) -> PhaseOneResult:
    """Feasibility of A x = b, x >= 0 via the phase-1 artificial objective."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64).copy()
    m, n = a.shape
    if b.shape != (m,):
        raise ValueError(f"b has shape {b.shape}, expected ({m},)")

    # normalize to b >= 0 so the artificial basis is feasible
    tableau = np.hstack([a.copy(), np.eye(m), b.reshape(-1, 1)])
    for i in range(m):
        if tableau[i, -1] < 0:
            tableau[i, :] *= -1.0

    basis = [n + i for i in range(m)]

    # objective row: minimize sum of artificials, reduced against the basis
    obj = np.zeros(n + m + 1)
    obj[n:n + m] = 1.0
    for i in range(m):
        obj -= tableau[i, :]

    total_cols = n + m

    while True:
        entering = -1
        for j in range(total_cols):  # Bland: first improving column
            if obj[j] < -PIVOT_EPS:
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best_ratio = np.inf
        for i in range(m):
            coef = tableau[i, entering]
            if coef > PIVOT_EPS:
                ratio = tableau[i, -1] / coef
                if ratio < best_ratio - PIVOT_EPS or (
                    abs(ratio - best_ratio) <= PIVOT_EPS
                    and (leaving < 0 or basis[i] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = i
        if leaving < 0:
            # the phase-1 objective is bounded below by 0, so this cannot
            # happen with exact arithmetic; treat as a numerical failure
            raise ArithmeticError("phase-1 simplex lost boundedness")
        pivot = tableau[leaving, entering]
        tableau[leaving, :] /= pivot
        for i in range(m):
            if i != leaving and abs(tableau[i, entering]) > 0.0:
                tableau[i, :] -= tableau[i, entering] * tableau[leaving, :]
        obj -= obj[entering] * tableau[leaving, :]
        basis[leaving] = entering

    artificial_sum = float(-obj[-1])
    if artificial_sum > tolerance:
        return PhaseOneResult(feasible=False, artificial_sum=artificial_sum, witness=None)

    x = np.zeros(n)
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i, -1]
    # clamp the tiny negatives that pivoting can leave behind
    x[(x < 0) & (x > -1e-12)] = 0.0
    return PhaseOneResult(feasible=True, artificial_sum=artificial_sum, witness=x)
