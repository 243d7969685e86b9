"""Finite-depth checks of the two guarantees of the ``psi_A`` perturbation.

* :func:`check_upper_inequality` verifies
  ``sum_i psi_A(x_i, k+i) <= 2N(N-1) + N * #{occurrences of omega in x}``.
* :func:`check_growth` verifies, at level ``j`` of a plan, that adding
  ``lam * psi_A`` raises the window average along ``z`` by at least
  ``lam * (N * freq - slack_j)``.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import Number, number_to_json, to_number
from .cocycle import as_symbols, shift_sums
from .symbolic import occurrences
from .weights import PerturbationPlan, Psi, WeightFunction

__all__ = ["check_upper_inequality", "check_growth", "psi_window_sum", "growth_slack", "random_draws"]

_CHUNK = 1 << 20


def psi_window_sum(psi: Psi, x, k: int) -> int:
    """Exact ``sum_{i<n} psi_A(x_i, k+i)`` for a word ``x``."""
    xs = as_symbols(x)
    rows = psi.rows(k, len(xs))
    return int(rows.pick(xs).sum())


def check_upper_inequality(plan, x, k: int, omega=None) -> dict:
    """Evaluate both sides of the occurrence bound for ``psi_A`` on ``x`` at offset ``k``.

    ``plan`` is a :class:`PerturbationPlan` or a :class:`Psi`.
    """
    psi = plan if isinstance(plan, Psi) else plan.psi()
    xs = as_symbols(x)
    N = psi.N
    n = len(xs)
    if n <= N:
        raise ValueError(f"word length {n} must exceed N={N}")
    lhs = psi_window_sum(psi, xs, k)
    hits = int(occurrences(xs, psi.omega).sum())
    rhs = 2 * N * (N - 1) + N * hits
    return {"n": n, "k": k, "N": N, "occurrences": hits, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}


def growth_slack(N: int, n_j: int, j: int) -> Fraction:
    """``(2 N^2 (N-1) + N^2 n_j / 2^j) / n_j``."""
    return Fraction(2 * N * N * (N - 1), n_j) + Fraction(N * N, 2**j)


def _chunked_psi_sum(psi: Psi, z, n: int, k: int) -> int:
    total = 0
    for s in range(0, n, _CHUNK):
        length = min(_CHUNK, n - s)
        xs = z.array(s, length)
        rows = psi.rows(k + s, length)
        total += int(rows.pick(xs).sum())
    return total


def check_growth(plan: PerturbationPlan, phi: WeightFunction, lam, j: int, target: Optional[Number] = None) -> dict:
    """Compare the perturbed window average at level ``j`` with its guaranteed floor.

    ``lhs = (1/n_j) sum_{i<n_j} (phi + lam psi_A)(z_i, k_j + i)`` and
    ``rhs = (1/n_j) sum phi(z_i, k_j + i) + lam (N freq - slack_j)`` where
    ``freq = |C_j| / n_j``.  The margin ``lhs - rhs`` must be nonnegative.
    """
    lv = plan.level(j)
    lam = to_number(lam)
    N, n, k = plan.N, lv.n, lv.k
    psi = plan.psi()
    base = shift_sums(phi, plan.z, n, k, k).max() / n
    psi_total = _chunked_psi_sum(psi, plan.z, n, k)
    c_count = plan.count_C(j)
    a_count = plan.count_A(j)
    freq = Fraction(c_count, n)
    slack = growth_slack(N, n, j)
    psi_avg = Fraction(psi_total, n)
    lhs = base + lam * psi_avg
    rhs = base + lam * (N * freq - slack)
    margin = lhs - rhs
    exact = isinstance(lam, Fraction) and isinstance(base, Fraction)
    report = {
        "j": j,
        "N": N,
        "n_j": n,
        "k_j": k,
        "lambda": number_to_json(lam),
        "count_A_j": a_count,
        "count_C_j": c_count,
        "freq_omega": number_to_json(freq),
        "psi_average": number_to_json(psi_avg),
        "phi_average": number_to_json(base),
        "slack": number_to_json(slack),
        "slack_block_term": number_to_json(Fraction(N * N, 2**j)),
        "slack_edge_term": number_to_json(Fraction(2 * N * N * (N - 1), n)),
        "lhs": number_to_json(lhs),
        "rhs": number_to_json(rhs),
        "margin": number_to_json(margin),
        "holds": bool(margin >= 0) if exact else bool(margin >= -1e-12),
        "exact": exact,
    }
    if target is not None:
        report["target_freq"] = number_to_json(to_number(target))
    return report


def random_draws(plan, draws: int, seed: int, max_n: int = 200) -> list:
    """Upper-inequality reports for random ``(x, k)`` with ``N < n <= max_n``.

    Offsets are drawn near the blocks so that ``psi_A`` is active.  For a
    plan, a third of the draws read ``x`` off ``z`` in the alignment of a
    random level, which makes the blocks fire.
    """
    psi = plan if isinstance(plan, Psi) else plan.psi()
    levels = plan.levels if isinstance(plan, PerturbationPlan) else []
    rng = np.random.default_rng(seed)
    hull = psi.A.hull() or (0, 0)
    lo, hi = hull[0] - max_n, min(hull[1], hull[0] + 4 * max_n) + max_n
    out = []
    for _ in range(draws):
        n = int(rng.integers(psi.N + 1, max_n + 1))
        k = int(rng.integers(lo, hi + 1))
        mode = rng.random()
        if levels and mode < 1 / 3:
            lv = levels[int(rng.integers(len(levels)))]
            k = int(rng.integers(lv.k - max_n, lv.k + min(lv.n, 4 * max_n)))
            x = plan.z.array(k - lv.k, n).copy()
        elif mode < 0.6:
            # words built from omega raise the occurrence count
            reps = -(-n // psi.N)
            x = np.tile(psi.omega.as_array(), reps)[:n].copy()
            flips = rng.random(n) < 0.1
            x[flips] ^= 1
        else:
            x = (rng.random(n) < rng.random()).astype(np.int8)
        out.append(check_upper_inequality(psi, x, k))
    return out
