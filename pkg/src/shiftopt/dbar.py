"""Ornstein d-bar distances and finite-window matching distances."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import Number
from .measures import MeasureSpec, cylinder_masses
from .simplex import InfeasibleLP, LPResult, solve_lp
from .symbolic import FactorSet, OrbitClosureApprox, PeriodicOrbit, SubshiftSpec, Word, _word

__all__ = [
    "CouplingLP",
    "dbar_periodic_exact",
    "dbar_lp_lower",
    "dbar_upper_product",
    "matching_distance",
    "MAX_LP_VARIABLES",
]

MAX_LP_VARIABLES = 4**8


def dbar_periodic_exact(u, v) -> Fraction:
    """d-bar between the periodic-orbit measures of ``u`` and ``v``.

    Ergodic joinings of two periodic orbits are the diagonal orbits through
    a pair of phases, so the distance is the least mismatch density over
    relative phases on a common period.
    """
    u, v = _word(u), _word(v)
    p, q = len(u), len(v)
    L = p * q // math.gcd(p, q)
    uu = np.tile(u.as_array(), L // p)
    vv = np.tile(v.as_array(), L // q)
    best = min(int(np.count_nonzero(uu != np.roll(vv, -r))) for r in range(q))
    return Fraction(best, L)


def dbar_upper_product(mu: MeasureSpec, nu: MeasureSpec) -> Number:
    """``mu([1]) nu([0]) + mu([0]) nu([1])``: the cost of the independent joining."""
    m1, n1 = cylinder_masses(mu, 1), cylinder_masses(nu, 1)
    one, zero = Word("1"), Word("0")
    return m1[one] * n1[zero] + m1[zero] * n1[one]


class CouplingLP:
    """Order-``L`` relaxation of the joining polytope of ``mu`` and ``nu``.

    Variables are masses ``m(u, v)`` on pairs of length-``L`` words with
    positive marginal mass.  Constraints: both marginals, and
    shift-consistency ``sum_{a,b} m(as, bt) = sum_{a,b} m(sa, tb)`` for all
    pairs of ``(L-1)``-words.  The objective charges pairs with ``u_0 != v_0``.
    """

    def __init__(self, mu: MeasureSpec, nu: MeasureSpec, L: int):
        if L < 1:
            raise ValueError("L must be positive")
        self.L = L
        mu_L = {w: p for w, p in cylinder_masses(mu, L).items() if p != 0}
        nu_L = {w: p for w, p in cylinder_masses(nu, L).items() if p != 0}
        self.exact = all(isinstance(p, Fraction) for p in list(mu_L.values()) + list(nu_L.values()))
        self.mu_L, self.nu_L = mu_L, nu_L
        self.pairs = [(a, b) for a in sorted(mu_L) for b in sorted(nu_L)]
        if len(self.pairs) > MAX_LP_VARIABLES:
            raise ValueError(f"{len(self.pairs)} variables exceed the LP budget {MAX_LP_VARIABLES}")
        self._build()

    def _build(self) -> None:
        index = {pair: i for i, pair in enumerate(self.pairs)}
        n = len(self.pairs)
        rows, rhs, names = [], [], []
        zero = Fraction(0) if self.exact else 0.0

        def new_row():
            return [zero] * n

        for u, p in sorted(self.mu_L.items()):
            row = new_row()
            for v in self.nu_L:
                row[index[(u, v)]] = 1
            rows.append(row)
            rhs.append(p)
            names.append(f"mu[{u}]")
        for v, p in sorted(self.nu_L.items()):
            row = new_row()
            for u in self.mu_L:
                row[index[(u, v)]] = 1
            rows.append(row)
            rhs.append(p)
            names.append(f"nu[{v}]")
        if self.L > 1:
            shift_rows: dict = {}
            for i, (u, v) in enumerate(self.pairs):
                # +1 where (s, t) is the tail pair, -1 where it is the head pair
                tail = (tuple(u[1:]), tuple(v[1:]))
                head = (tuple(u[:-1]), tuple(v[:-1]))
                shift_rows.setdefault(tail, {}).setdefault(i, 0)
                shift_rows[tail][i] += 1
                shift_rows.setdefault(head, {}).setdefault(i, 0)
                shift_rows[head][i] -= 1
            for key in sorted(shift_rows):
                coeffs = {i: c for i, c in shift_rows[key].items() if c != 0}
                if not coeffs:
                    continue
                row = new_row()
                for i, c in coeffs.items():
                    row[i] = c
                rows.append(row)
                rhs.append(zero)
                s, t = key
                names.append(f"shift[{''.join(map(str, s))},{''.join(map(str, t))}]")
        self.A, self.b, self.row_names = rows, rhs, names
        self.c = [1 if u[0] != v[0] else 0 for u, v in self.pairs]

    @property
    def n_variables(self) -> int:
        return len(self.pairs)

    def solve(self) -> LPResult:
        try:
            return solve_lp(self.c, self.A, self.b, exact=self.exact)
        except InfeasibleLP as exc:
            raise InfeasibleLP(f"coupling LP infeasible (inconsistent measures?): {exc}") from None

    def to_text(self) -> str:
        """Plain-text dump: variables, objective and one line per constraint."""
        fmt = lambda v: str(v)  # noqa: E731
        lines = [f"coupling-lp L={self.L} variables={len(self.pairs)} constraints={len(self.A)}"]
        for i, (u, v) in enumerate(self.pairs):
            lines.append(f"var x{i} = ({u},{v})")
        obj = " + ".join(f"x{i}" for i, c in enumerate(self.c) if c) or "0"
        lines.append(f"minimize {obj}")
        for name, row, rhs in zip(self.row_names, self.A, self.b):
            terms = " ".join(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else fmt(abs(c)) + '*'}x{i}"
                             for i, c in enumerate(row) if c != 0)
            lines.append(f"{name}: {terms} = {fmt(rhs)}")
        lines.append("bounds: all x >= 0")
        return "\n".join(lines) + "\n"


def dbar_lp_lower(mu: MeasureSpec, nu: MeasureSpec, L: int) -> Number:
    """Lower bound on d-bar from the order-``L`` coupling LP.

    Nondecreasing in ``L``.  Exact rationals when both measures are exact.
    """
    return CouplingLP(mu, nu, L).solve().value


def _as_factor_set(Z: SubshiftSpec, n: int) -> FactorSet:
    if isinstance(Z, FactorSet):
        return Z
    if isinstance(Z, OrbitClosureApprox):
        return Z.factor_set()
    return Z.factor_set(min(n, 8))


def matching_distance(x, Z: SubshiftSpec, kind: str = "dp") -> Fraction:
    """``(1/n) min_y #{i : x_i != y_i}`` over admissible ``y`` of length ``n``.

    ``kind="dp"`` scans phases for periodic orbits and runs a Viterbi pass
    over the follower graph otherwise; ``kind="exact"`` enumerates every
    admissible word (small ``n`` only).
    """
    xs = x.as_array() if isinstance(x, Word) else np.asarray(x if isinstance(x, np.ndarray) else _word(x).as_array())
    xs = xs.astype(np.int8)
    n = len(xs)
    if kind == "exact":
        fs = _as_factor_set(Z, n)
        words = fs.admissible_words(n)
        best = min(int(np.count_nonzero(w.as_array() != xs)) for w in words)
        return Fraction(best, n)
    if kind != "dp":
        raise ValueError("kind must be 'dp' or 'exact'")
    if isinstance(Z, PeriodicOrbit):
        w = Z.word.as_array()
        p = len(w)
        base = np.tile(w, -(-n // p) + 1)
        best = min(int(np.count_nonzero(base[s : s + n] != xs)) for s in range(p))
        return Fraction(best, n)
    fs = _as_factor_set(Z, n)
    return Fraction(_viterbi(xs, fs), n)


def _viterbi(xs: np.ndarray, fs: FactorSet) -> int:
    L = fs.L
    n = len(xs)
    if n <= L:
        return min(int(np.count_nonzero(w.as_array() != xs)) for w in fs.admissible_words(n))
    states = sorted(fs.factors)
    pos = {f: i for i, f in enumerate(states)}
    arrs = np.array([f.as_array() for f in states], dtype=np.int8)
    last = arrs[:, -1]
    preds = [[] for _ in states]
    for f in states:
        for g in fs.followers(f):
            preds[pos[g]].append(pos[f])
    # predecessor lists as a padded index matrix for vectorized minima
    width = max(len(p) for p in preds) if preds else 1
    pred_idx = np.zeros((len(states), max(width, 1)), dtype=np.int64)
    pred_ok = np.zeros_like(pred_idx, dtype=bool)
    for i, p in enumerate(preds):
        pred_idx[i, : len(p)] = p
        pred_ok[i, : len(p)] = True
    big = np.iinfo(np.int64).max // 4
    cost = np.count_nonzero(arrs != xs[:L], axis=1).astype(np.int64)
    for i in range(L, n):
        cand = np.where(pred_ok, cost[pred_idx], big)
        cost = cand.min(axis=1) + (last != xs[i])
    return int(cost.min())
