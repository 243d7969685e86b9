"""End-to-end constructions: the Sturmian gap, the greedy exact formula and
the block-recursive failure of subordination.

Each ``run_*`` function returns a plain dict report.  Reports contain
only JSON-ready values (exact rationals as ``"p/q"`` strings) and a
``table`` list for flat CSV output.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._numeric import number_to_json
from .cocycle import log_norm, periodic_log_spectral_radius
from .dbar import dbar_periodic_exact
from .lyapunov import lyapunov_envelope_upper, lyapunov_mc, lyapunov_periodic_exact
from .measures import Empirical
from .symbolic import (
    GOLDEN,
    BiSequence,
    BlockRecursive,
    Materialized,
    Periodic,
    Sturmian,
    Word,
    default_exponents,
    lyndon_words,
)
from .weights import OrbitInduced, greedy_table, gurvits_weights, nomather_weights

__all__ = [
    "run_gurvits",
    "run_tech_strictly",
    "run_tech_strictly_sweep",
    "run_nomather",
    "fibonacci_lengths",
]


def fibonacci_lengths(limit: int) -> list[int]:
    """Fibonacci numbers ``1, 2, 3, 5, 8, ...`` up to ``limit``."""
    out, a, b = [], 1, 2
    while a <= limit:
        out.append(a)
        a, b = b, a + b
    return out


def _map(fn, items, workers: int):
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def run_gurvits(
    gamma=GOLDEN,
    alpha: float = 0.5,
    n: int = 10_000,
    max_word_len: int = 10,
    m: Optional[int] = None,
    k_window: Optional[int] = None,
    workers: int = 1,
) -> dict:
    """Compare the greedy growth rate with the best periodic-product rate.

    (a) ``log_norm`` of the complement word ``1 - z_0 .. z_{n-1}`` divided by
    ``n``; (b) the best per-symbol rate ``log rho(L_w) / |w|`` over Lyndon
    words ``|w| <= max_word_len``, each estimated from ``w^m`` with
    ``|w| m >= n`` (``m`` defaults to the smallest such value).
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    W = n if k_window is None else k_window
    z = Sturmian(gamma)
    longest = n + max_word_len if m is None else max(n, m * max_word_len)
    zc = Materialized(z, -W - 1, 2 * W + longest + 2)
    phi = gurvits_weights(zc, alpha)
    target = 0.5 * math.log(alpha)

    x = 1 - zc.array(0, n)
    greedy = log_norm(phi, x, W)
    greedy_rate = float(greedy.lower) / n

    words = [w for L in range(1, max_word_len + 1) for w in lyndon_words(L)]

    def rate(w: Word) -> float:
        mw = m if m is not None else -(-n // len(w))
        b = periodic_log_spectral_radius(phi, w, mw, W)
        return float(b.lower) / len(w)

    rates = _map(rate, words, workers)
    per_length = []
    for L in range(1, max_word_len + 1):
        cands = [(r, str(w)) for w, r in zip(words, rates) if len(w) == L]
        r, w = max(cands, key=lambda t: (t[0], [-ord(c) for c in t[1]]))
        per_length.append({"length": L, "best_word": w, "rate": r, "words": len(cands)})
    best = max(per_length, key=lambda row: row["rate"])
    fib = fibonacci_lengths(max_word_len)
    fib_best = max(row["rate"] for row in per_length if row["length"] in fib)
    return {
        "experiment": "gurvits",
        "params": {
            "gamma": gamma if isinstance(gamma, str) else number_to_json(gamma),
            "alpha": alpha,
            "n": n,
            "max_word_len": max_word_len,
            "m": m,
            "k_window": W,
        },
        "jsr_lower_estimate": greedy_rate,
        "best_word": best["best_word"],
        "best_word_rate": best["rate"],
        "fibonacci_lengths": fib,
        "fibonacci_best_rate": fib_best,
        "target_half_log_alpha": target,
        "gap": greedy_rate - best["rate"],
        "table": per_length,
    }


def run_tech_strictly(z, test_periods: int = 7) -> dict:
    """Tabulate ``Lambda(phi, mu)`` against ``1 - dbar(mu, orbit of z)``.

    ``phi(a, i) = 1`` where ``a = z_i`` and ``0`` otherwise; ``mu`` ranges
    over the periodic orbits of Lyndon words of length ``<= test_periods``.
    """
    zword = z.word if isinstance(z, Periodic) else Word(z)
    phi = OrbitInduced(Periodic(zword), greedy_table(1, 0))
    rows, mismatches = [], 0
    for L in range(1, test_periods + 1):
        for w in lyndon_words(L):
            lam = lyapunov_periodic_exact(phi, w)
            formula = 1 - dbar_periodic_exact(w, zword)
            diff = lam - formula
            mismatches += diff != 0
            rows.append(
                {
                    "z": str(zword),
                    "mu": str(w),
                    "lyapunov": number_to_json(lam),
                    "one_minus_dbar": number_to_json(formula),
                    "difference": number_to_json(diff),
                }
            )
    return {
        "experiment": "tech-strictly",
        "params": {"z": str(zword), "test_periods": test_periods},
        "greedy_gap": number_to_json(phi.greedy_gap()),
        "pairs": len(rows),
        "mismatches": mismatches,
        "all_equal": mismatches == 0,
        "table": rows,
    }


def run_tech_strictly_sweep(max_z_period: int = 7, test_periods: int = 7, workers: int = 1) -> dict:
    """:func:`run_tech_strictly` for every Lyndon word ``z`` with ``|z| <= max_z_period``."""
    zs = [w for L in range(1, max_z_period + 1) for w in lyndon_words(L)]
    reports = _map(lambda w: run_tech_strictly(w, test_periods), zs, workers)
    table = [row for rep in reports for row in rep["table"]]
    mismatches = sum(rep["mismatches"] for rep in reports)
    return {
        "experiment": "tech-strictly",
        "params": {"max_z_period": max_z_period, "test_periods": test_periods},
        "z_count": len(zs),
        "pairs": len(table),
        "mismatches": mismatches,
        "all_equal": mismatches == 0,
        "table": table,
    }


def run_nomather(
    exponents: Optional[Sequence[int]] = None,
    j: int = 3,
    n: int = 100_000,
    mc_length: int = 2000,
    samples: int = 64,
    k_window: int = 64,
    seed: int = 0,
    workers: int = 1,
) -> dict:
    """Finite-scale rendering of ``Lambda(phi, mu_2) < 1 + mu_1([1])``.

    ``z`` is the block-recursive sequence with seeds ``0``/``1``; the weight
    is 2 where ``a = z_i = 1``, 1 where ``a = z_i = 0`` and 0 elsewhere.
    ``mu_1`` / ``mu_2`` are the cyclic empirical measures of a ``C_j`` /
    ``B_j`` block.  The greedy value reads ``n`` symbols of ``z`` from the
    first ``C_{j+1}`` block with the aligned offset scan.
    """
    exponents = list(default_exponents(5) if exponents is None else exponents)
    z = BlockRecursive("0", "1", exponents)
    if not 1 <= j < z.depth:
        raise ValueError(f"j={j} needs 1 <= j < depth={z.depth}")
    phi = nomather_weights(z)
    mu1 = Empirical(z, z.block_offset(j, "C"), z.block_length(j, "C"))
    mu2 = Empirical(z, z.block_offset(j, "B"), z.block_length(j, "B"))
    f1, f2 = mu1.ones_frequency(), mu2.ones_frequency()
    target = 1 + f1

    start = z.block_offset(j + 1, "C")
    x = z.central_window(start, n)
    greedy = log_norm(phi, x, k_window, k_center=start)
    greedy_rate = float(greedy.lower) / n

    lam2 = lyapunov_mc(phi, mu2, mc_length, samples, k_window, seed, workers=workers)
    lam1 = lyapunov_mc(phi, mu1, mc_length, samples, k_window, seed + 1, workers=workers)
    envelope2 = lyapunov_envelope_upper(phi, mu2)

    def est(b):
        return {"mean": b.meta["mean"], "se": b.meta["se"], "lower": b.lower, "upper": b.upper}

    return {
        "experiment": "nomather",
        "params": {
            "exponents": exponents,
            "j": j,
            "n": n,
            "mc_length": mc_length,
            "samples": samples,
            "k_window": k_window,
            "seed": seed,
        },
        "f1": float(f1),
        "f2": float(f2),
        "f1_exact": number_to_json(f1),
        "f2_exact": number_to_json(f2),
        "frequency_gap": float(f1 - f2),
        "target_one_plus_f1": float(target),
        "greedy_rate": greedy_rate,
        "greedy_start": start,
        "greedy_error": abs(greedy_rate - float(target)),
        "lambda_mu2_estimate": est(lam2),
        "lambda_mu1_estimate": est(lam1),
        "lambda_mu2_envelope_upper": float(envelope2),
        "margin": float(target) - 0.1 - lam2.upper,
        "table": [
            {"measure": "mu1", "block": f"C_{j}", "ones_frequency": float(f1), "lambda_mean": lam1.meta["mean"],
             "lambda_se": lam1.meta["se"]},
            {"measure": "mu2", "block": f"B_{j}", "ones_frequency": float(f2), "lambda_mean": lam2.meta["mean"],
             "lambda_se": lam2.meta["se"]},
        ],
    }
