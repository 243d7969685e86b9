"""Lyapunov exponents ``Lambda(phi, mu)`` of the weighted shift cocycle.

``Lambda(phi, mu) = inf_n (1/n) E_mu[ sup_k sum_{i<n} phi(x_i, k+i) ]``.
Finite ``n`` therefore certifies upper bounds; periodic data admit a
closed form; everything else is a Monte-Carlo estimate.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import Number
from .cocycle import Bounds, exact_scan_range, log_norm, periodic_far_field_rate
from .measures import Empirical, MeasureSpec, cylinder_masses
from .weights import WeightFunction

__all__ = [
    "lyapunov_periodic_exact",
    "lyapunov_upper",
    "lyapunov_upper_profile",
    "lyapunov_envelope_upper",
    "lyapunov_mc",
    "MAX_ENUMERATION_LENGTH",
]

MAX_ENUMERATION_LENGTH = 20


def lyapunov_periodic_exact(phi: WeightFunction, w) -> Number:
    """Exact ``Lambda`` for the periodic-orbit measure of ``w``.

    Equals ``max_c (1/L) sum_{i<L} phi(w_{i mod |w|}, c+i)`` over the
    periodic far field of ``phi`` with ``L = lcm(period, |w|)``.
    """
    return periodic_far_field_rate(phi, w)


def lyapunov_upper(
    phi: WeightFunction,
    mu: MeasureSpec,
    n: int,
    k_window: Optional[int] = None,
    k_center: int = 0,
    report: bool = False,
):
    """``(1/n) sum_x mu([x]) * log_norm(phi, x)`` over words of length ``n``.

    With exact norms this is a certified upper bound on ``Lambda(phi, mu)``.
    Without them the window maximum is used and the result is flagged as
    heuristic (``report=True`` returns the flag along with the value).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_ENUMERATION_LENGTH:
        raise ValueError(f"n={n} exceeds the enumeration budget ({MAX_ENUMERATION_LENGTH})")
    if k_window is None:
        k_window = 0 if exact_scan_range(phi, n) is not None else n
    masses = cylinder_masses(mu, n)
    total, certified = None, True
    for word, prob in masses.items():
        if prob == 0:
            continue
        b = log_norm(phi, word, k_window, k_center)
        certified = certified and b.upper is not None
        value = b.upper if b.upper is not None else b.lower
        if isinstance(prob, float) and isinstance(value, Fraction):
            value = float(value)
        term = prob * value
        total = term if total is None else total + term
    result = total / n
    if report:
        return {"value": result, "certified": certified, "n": n, "k_window": k_window}
    return result


def lyapunov_upper_profile(phi: WeightFunction, mu: MeasureSpec, ns, k_window: Optional[int] = None) -> list:
    """``[(n, lyapunov_upper(phi, mu, n)), ...]`` plus the running minimum.

    Every entry is an upper bound, so the minimum over ``ns`` is too.
    """
    rows, best = [], None
    for n in ns:
        v = lyapunov_upper(phi, mu, n, k_window)
        best = v if best is None or v < best else best
        rows.append({"n": n, "value": v, "running_min": best})
    return rows


def lyapunov_envelope_upper(phi: WeightFunction, mu: MeasureSpec) -> Number:
    """``sum_a mu([a]) * sup_i phi(a, i)``: the ``n = 1`` bound with row suprema.

    Valid for every weight structure, including aperiodic ones.
    """
    masses = cylinder_masses(mu, 1)
    total = 0
    for (a,), prob in ((tuple(w), p) for w, p in masses.items()):
        _, hi = phi.row_bounds(a)
        total = total + prob * hi
    return total


def _sample_rows(mu: MeasureSpec, n: int, samples: int, rng: np.random.Generator):
    """Yield ``(word_array, position)``; ``position`` is the window start for
    empirical measures and ``0`` otherwise."""
    if isinstance(mu, Empirical):
        base = mu.window_array()
        if n <= mu.n:
            # stay inside the window so positions line up with the sequence
            starts = rng.integers(0, mu.n - n + 1, size=samples)
            ext = base
        else:
            starts = rng.integers(0, mu.n, size=samples)
            ext = np.tile(base, -(-(n + mu.n) // mu.n) + 1)
        for s in starts.tolist():
            yield ext[s : s + n], mu.a + s
        return
    seeds = rng.integers(0, 2**63 - 1, size=samples)
    for seed in seeds.tolist():
        yield mu.sample(n, np.random.default_rng(seed)), 0


def lyapunov_mc(
    phi: WeightFunction,
    mu: MeasureSpec,
    n: int,
    samples: int,
    k_window: int,
    rng_seed: int,
    k_center: int = 0,
    align: bool = True,
    workers: int = 1,
) -> Bounds:
    """Monte-Carlo estimate of ``Lambda`` as ``mean +- 3 SE`` of ``log_norm / n``.

    For :class:`Empirical` measures the samples are sub-windows of the stored
    window (cyclic only when ``n`` exceeds it), and with ``align`` the offset
    scan is centred at each sample's absolute position.  The result is an estimate, not a bound.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(rng_seed)
    draws = list(_sample_rows(mu, n, samples, rng))

    def one(item):
        word, pos = item
        center = k_center + (pos if align else 0)
        return float(log_norm(phi, word, k_window, center).lower) / n

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(one, draws))
    else:
        values = [one(d) for d in draws]
    arr = np.array(values, dtype=np.float64)
    mean = float(arr.mean())
    se = float(arr.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    meta = {"n": n, "k_window": k_window, "samples": samples, "mean": mean, "se": se, "seed": rng_seed}
    return Bounds(mean - 3 * se, mean + 3 * se, meta, estimate=True)
