"""Bounds on the log joint spectral radius ``log rho(L_0, L_1)``.

Upper bounds come from Fekete: for every ``n``,
``log rho <= (1/n) max_{|x|=n} log ||L_x||``.  Lower bounds come from
periodic measures: ``log rho >= Lambda(phi, periodic orbit of w)``.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from ._numeric import Number
from .cocycle import as_symbols, exact_scan_range, periodic_log_spectral_radius, shift_sums
from .lyapunov import lyapunov_periodic_exact
from .weights import WeightFunction

__all__ = ["jsr_upper", "jsr_lower", "MAX_WORD_LENGTH"]

MAX_WORD_LENGTH = 24
_METHODS = ("exchange", "branch_and_bound", "exhaustive")


def _scan_range(phi: WeightFunction, n: int, k_window: Optional[int], k_center: int):
    rng = exact_scan_range(phi, n)
    if rng is not None:
        return rng, True
    if k_window is None:
        raise ValueError("k_window is required when the weight structure admits no exact scan")
    return (k_center - k_window, k_center + k_window), False


def _to_value(total, den, n: int) -> Number:
    if den is None:
        return float(total) / n
    return Fraction(int(total), den * n)


def _exchange(rows, n: int, R: int):
    # max_x sup_k sum_i phi(x_i, k+i) = sup_k sum_i max_a phi(a, k+i)
    env = np.maximum(rows.zero, rows.one)
    c = np.concatenate([np.zeros(1, dtype=env.dtype), np.cumsum(env)])
    sums = c[n : n + R] - c[:R]
    return max(sums.tolist())


def _branch_and_bound(rows, n: int, R: int):
    """Depth-first search over words with per-offset partial sums; a prefix
    is pruned when ``max_k (partial + best possible suffix)`` cannot beat the
    incumbent."""
    zero, one = rows.zero, rows.one
    env = np.maximum(zero, one)
    suffix = [None] * (n + 1)
    suffix[n] = np.zeros(R, dtype=env.dtype)
    for d in range(n - 1, -1, -1):
        suffix[d] = suffix[d + 1] + env[d : d + R]
    best = None
    stack = [(0, np.zeros(R, dtype=env.dtype))]
    while stack:
        depth, partial = stack.pop()
        if depth == n:
            val = partial.max()
            if best is None or val > best:
                best = val
            continue
        children = []
        for row in (zero, one):
            child = partial + row[depth : depth + R]
            bound = (child + suffix[depth + 1]).max()
            if best is None or bound > best:
                children.append((bound, child))
        # explore the more promising child first
        children.sort(key=lambda t: t[0])
        for _, child in children:
            stack.append((depth + 1, child))
    return best


def _exhaustive(phi, n: int, lo: int, hi: int):
    best = None
    for bits in itertools.product((0, 1), repeat=n):
        sums = shift_sums(phi, np.array(bits, dtype=np.int8), None, lo, hi)
        v = sums.values[sums.argmax()]
        best = v if best is None or v > best else best
    return best, sums.den


def jsr_upper(
    phi: WeightFunction,
    n: int,
    k_window: Optional[int] = None,
    method: str = "exchange",
    k_center: int = 0,
    report: bool = False,
):
    """``(1/n) max_{|x| = n} log ||L_x||``, a certified upper bound on ``log rho``.

    ``method`` selects the evaluation: ``"exchange"`` swaps the two maxima
    (linear time), ``"branch_and_bound"`` runs a pruned word search and
    ``"exhaustive"`` tries all ``2^n`` words.  All three return the same
    value.  When the weight structure admits no exact offset scan the
    offsets are limited to ``k_center +- k_window`` and the result is
    heuristic.
    """
    if n <= 0:
        raise ValueError("n must be positive")
    if method not in _METHODS:
        raise ValueError(f"method must be one of {_METHODS}")
    if method != "exchange" and n > MAX_WORD_LENGTH:
        raise ValueError(f"n={n} exceeds the word-search cap {MAX_WORD_LENGTH}")
    (lo, hi), certified = _scan_range(phi, n, k_window, k_center)
    R = hi - lo + 1
    if method == "exhaustive":
        total, den = _exhaustive(phi, n, lo, hi)
    else:
        rows = phi.rows(lo, R + n - 1)
        if rows.exact and (rows.zero.dtype == object or rows.one.dtype == object):
            rows = rows._replace(zero=rows.zero.astype(object), one=rows.one.astype(object))
        total = _exchange(rows, n, R) if method == "exchange" else _branch_and_bound(rows, n, R)
        den = rows.den
    value = _to_value(total, den, n)
    if report:
        return {"value": value, "certified": certified, "n": n, "method": method, "k_range": [lo, hi]}
    return value


def jsr_lower(
    phi: WeightFunction,
    candidates: Iterable,
    m: int = 1,
    k_window: int = 0,
    report: bool = False,
):
    """``max_w Lambda(phi, periodic orbit of w)`` over ``candidates``.

    Certified when ``phi`` has periodic structure.  Otherwise each word is
    scored by the window estimate of ``log rho(L_w) / |w|`` from ``w^m``
    and the result is flagged as an estimate.
    """
    words = [as_symbols(w) for w in candidates]
    if not words:
        raise ValueError("candidate list is empty")
    certified = phi.structure().period is not None
    best, best_word = None, None
    for w in words:
        if certified:
            v = lyapunov_periodic_exact(phi, w)
        else:
            v = periodic_log_spectral_radius(phi, w, m, k_window).lower / len(w)
        if best is None or v > best:
            best, best_word = v, w
    if report:
        return {
            "value": best,
            "certified": certified,
            "word": "".join(map(str, best_word.tolist())),
            "candidates": len(words),
        }
    return best
