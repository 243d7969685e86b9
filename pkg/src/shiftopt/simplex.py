"""Dense two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Exact mode pivots on :class:`fractions.Fraction` entries with zero
tolerance; float mode uses ``float64`` with a feasibility tolerance.
Bland's rule is used for both entering and leaving variables, so the
method terminates without cycling.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

__all__ = ["LPResult", "InfeasibleLP", "UnboundedLP", "solve_lp"]

FLOAT_TOL = 1e-9


class InfeasibleLP(ValueError):
    pass


class UnboundedLP(ValueError):
    pass


@dataclass
class LPResult:
    value: object
    x: list
    pivots: int
    exact: bool


def _pivot(T: np.ndarray, r: int, c: int, exact: bool, tol: float) -> None:
    piv = T[r, c]
    T[r] = T[r] / piv
    col = T[:, c]
    if exact:
        rows = [i for i in range(T.shape[0]) if i != r and col[i] != 0]
    else:
        rows = [i for i in np.nonzero(np.abs(col) > 0)[0].tolist() if i != r]
    for i in rows:
        T[i] = T[i] - col[i] * T[r]
    if not exact:
        # snap round-off so Bland's rule sees clean zeros
        T[np.abs(T) < tol * 1e-3] = 0.0


def _run(T: np.ndarray, basis: list, allowed: int, exact: bool, tol: float, limit: int) -> int:
    """Optimize the tableau whose last row holds reduced costs (``-z`` in the corner).

    Only columns ``< allowed`` may enter.
    """
    m = T.shape[0] - 1
    pivots = 0
    while True:
        cost = T[-1, :allowed]
        entering = None
        for j in range(allowed):
            if cost[j] < -tol:
                entering = j
                break
        if entering is None:
            return pivots
        best_ratio, leave = None, None
        for i in range(m):
            a = T[i, entering]
            if a > tol:
                ratio = T[i, -1] / a
                if best_ratio is None or ratio < best_ratio - (0 if exact else tol) or (
                    abs(ratio - best_ratio) <= (0 if exact else tol) and basis[i] < basis[leave]
                ):
                    best_ratio, leave = ratio, i
        if leave is None:
            raise UnboundedLP("objective is unbounded below")
        _pivot(T, leave, entering, exact, tol)
        basis[leave] = entering
        pivots += 1
        if pivots > limit:  # pragma: no cover - Bland's rule guarantees termination
            raise RuntimeError("simplex pivot limit exceeded")


def solve_lp(c: Sequence, A: Sequence[Sequence], b: Sequence, exact: Optional[bool] = None,
             tol: float = FLOAT_TOL, pivot_limit: int = 10**6) -> LPResult:
    """Minimize ``c.x`` subject to ``A x = b`` and ``x >= 0``.

    ``exact`` defaults to True when every coefficient is an int or Fraction.
    Raises :class:`InfeasibleLP` or :class:`UnboundedLP`.
    """
    m, n = len(A), len(c)
    if exact is None:
        vals = list(c) + list(b) + [v for row in A for v in row]
        exact = all(isinstance(v, (int, Fraction)) for v in vals)
    tol = 0 if exact else tol
    dtype = object if exact else np.float64
    conv = Fraction if exact else float

    # phase 1 tableau: [A | I | b] with b >= 0
    T = np.zeros((m + 1, n + m + 1), dtype=dtype)
    if exact:
        T[:] = Fraction(0)
    for i in range(m):
        sign = -1 if conv(b[i]) < 0 else 1
        for j in range(n):
            T[i, j] = conv(A[i][j]) * sign
        T[i, n + i] = conv(1)
        T[i, -1] = conv(b[i]) * sign
    T[-1] = -T[:m].sum(axis=0)
    for i in range(m):
        T[-1, n + i] = conv(0)
    basis = list(range(n, n + m))
    pivots = _run(T, basis, n + m, exact, tol, pivot_limit)
    phase1 = -T[-1, -1]
    if phase1 > (0 if exact else tol * max(1, m)):
        raise InfeasibleLP(f"phase-1 optimum {phase1} > 0")

    # drive artificial variables out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            row = T[i, :n]
            nz = [j for j in range(n) if (row[j] != 0 if exact else abs(row[j]) > tol)]
            if nz:
                _pivot(T, i, nz[0], exact, tol)
                basis[i] = nz[0]
                pivots += 1
                keep.append(i)
        else:
            keep.append(i)
    T = np.vstack([T[keep][:, list(range(n)) + [n + m]], np.zeros((1, n + 1), dtype=dtype)])
    if exact:
        T[-1] = [Fraction(0)] * (n + 1)
    basis = [basis[i] for i in keep]

    # phase 2 cost row: c_j - c_B B^-1 A_j, corner holds -z
    cvec = np.array([conv(v) for v in c], dtype=dtype)
    T[-1, :n] = cvec
    for i, j in enumerate(basis):
        if cvec[j] != 0:
            T[-1] = T[-1] - cvec[j] * T[i]
    pivots += _run(T, basis, n, exact, tol, pivot_limit)
    x = [conv(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i, -1]
    value = -T[-1, -1]
    return LPResult(value=value, x=x, pivots=pivots, exact=exact)
