"""Slow, independent reference implementations used by the tests.

Everything here is written from the definitions with plain Python loops
and ``Fraction``; nothing imports the package's numeric paths.
"""
from __future__ import annotations

import itertools
import math
from decimal import Decimal, getcontext
from fractions import Fraction


def words(n):
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


class TableWeights:
    """``phi(a, i)``: per-symbol defaults plus a dict of overrides."""

    def __init__(self, default0, default1, overrides=None):
        self.d = (Fraction(default0), Fraction(default1))
        self.over = {key: Fraction(v) for key, v in (overrides or {}).items()}

    def __call__(self, a, i):
        return self.over.get((a, i), self.d[a])

    def support(self):
        idx = [i for _, i in self.over]
        return (min(idx), max(idx)) if idx else None

    def sup_distance(self, other):
        keys = set(self.over) | set(other.over)
        diffs = [abs(self.d[a] - other.d[a]) for a in (0, 1)]
        diffs += [abs(self(a, i) - other(a, i)) for a, i in keys]
        return max(diffs)


def table_sum(phi, x, k):
    return sum(phi(int(c), k + i) for i, c in enumerate(x))


def table_log_norm(phi, x):
    """Exact ``sup_k sum_i phi(x_i, k+i)`` for finitely supported overrides."""
    n = len(x)
    sup = phi.support()
    ks = [0] if sup is None else range(sup[0] - n - 1, sup[1] + 2)
    return max(table_sum(phi, x, k) for k in ks)


def table_jsr(phi, n):
    return max(table_log_norm(phi, x) for x in words(n)) / n


def periodic_weight_rate(f, period, w):
    """Exact periodic-orbit Lyapunov value for ``f(a, i)`` of period ``period``:
    best phase average over a common period."""
    L = period * len(w) // math.gcd(period, len(w))
    best = None
    for c in range(period):
        total = sum(f(int(w[i % len(w)]), c + i) for i in range(L))
        best = total if best is None else max(best, total)
    return Fraction(best, L)


def phase_joinings_dbar(u, v):
    """Minimum over all pairs of phases ``(i, j)`` of the mismatch density
    along the diagonal orbit through ``(i, j)``."""
    p, q = len(u), len(v)
    L = p * q // math.gcd(p, q)
    best = None
    for i in range(p):
        for j in range(q):
            bad = sum(u[(i + t) % p] != v[(j + t) % q] for t in range(L))
            best = bad if best is None else min(best, bad)
    return Fraction(best, L)


def sturmian_symbol(n, gamma=None, digits=60):
    """``1`` iff ``frac(n gamma)`` lies in ``[0, 1/2]``, in high-precision decimal."""
    getcontext().prec = digits
    if gamma is None:
        gamma = (Decimal(5).sqrt() - 1) / 2
    t = (Decimal(n) * gamma) % 1
    if t < 0:
        t += 1
    return 1 if t <= Decimal(1) / 2 else 0


def plan_lengths_linear(N, J):
    ns = [N]
    for j in range(2, J + 1):
        prior = sum(ns)
        n = ns[-1] + 1
        while not Fraction(prior, n) < Fraction(1, 2 ** (j + 1)):
            n += 1
        ns.append(n)
    return ns


def blocks_by_strings(seed_b, seed_c, exponents, depth):
    b, c = seed_b, seed_c
    for a in exponents[:depth]:
        b, c = b * a + c, c * a + b
    return b, c


def admissible_brute(factors, L, n):
    """All length-``n`` words whose length-``L`` windows are all factors."""
    out = []
    for x in words(n):
        if n < L:
            if any(f.startswith(x) or x in f for f in factors):
                out.append(x)
        elif all(x[i : i + L] in factors for i in range(n - L + 1)):
            out.append(x)
    return out


def matching_brute(x, factors, L):
    n = len(x)
    cands = admissible_brute(factors, L, n)
    return Fraction(min(sum(a != b for a, b in zip(x, y)) for y in cands), n)


def markov_stationary(P):
    p01, p10 = Fraction(P[0][1]), Fraction(P[1][0])
    return [p10 / (p01 + p10), p01 / (p01 + p10)]


def psi_brute(omega, A, a, i):
    N = len(omega)
    total = 0
    for ell in A:
        if ell <= i < ell + N:
            total += 1 if int(omega[i - ell]) == a else -N
    return total
