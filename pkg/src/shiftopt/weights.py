"""Bounded weight functions ``phi(a, i)`` on ``{0,1} x Z``.

A weight function fully encodes a pair of weighted shift operators
``L_a e_i = exp(phi(a, i)) e_{i+1}``.  Everything downstream only ever
needs two things from it: pointwise evaluation and *rows*, i.e. the
values ``phi(0, lo..lo+n-1)`` and ``phi(1, lo..lo+n-1)`` as arrays.

Rows are returned as :class:`Rows`.  On the exact path the arrays hold
integer numerators over a common denominator ``den``; on the floating
path they are float64 and ``den`` is ``None``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

import numpy as np

from ._numeric import Number, lcm_all, number_from_json, number_to_json, to_number
from .symbolic import BiSequence, Periodic, Word, _word, occurrences, sequence_from_json

__all__ = [
    "Rows",
    "Structure",
    "WeightFunction",
    "Tabular",
    "OrbitInduced",
    "Combo",
    "Psi",
    "FiniteSet",
    "PerturbationPlan",
    "PlanLevel",
    "eval_weight",
    "psi_ell",
    "build_plan",
    "plan_lengths",
    "constant",
    "greedy_table",
    "gurvits_weights",
    "nomather_weights",
    "greedy_gap",
    "weight_from_json",
]

_INT64_SAFE = 1 << 62


class Rows(NamedTuple):
    zero: np.ndarray
    one: np.ndarray
    den: Optional[int]

    @property
    def exact(self) -> bool:
        return self.den is not None

    def value(self, numerator) -> Number:
        if self.den is None:
            return float(numerator)
        return Fraction(int(numerator), self.den)

    def as_float(self) -> "Rows":
        if self.den is None:
            return self
        return Rows(self.zero.astype(np.float64) / self.den, self.one.astype(np.float64) / self.den, None)

    def pick(self, x: np.ndarray, offset: int = 0) -> np.ndarray:
        """Values ``phi(x_i, lo + offset + i)``."""
        n = len(x)
        return np.where(x == 1, self.one[offset : offset + n], self.zero[offset : offset + n])


def _rescale(arr: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return arr
    if arr.dtype != object and arr.size and int(np.abs(arr).max()) * factor < _INT64_SAFE:
        return arr * factor
    if arr.dtype != object and not arr.size:
        return arr
    return arr.astype(object) * factor


@dataclass(frozen=True)
class Structure:
    """How a weight function repeats: ``period`` of the far field (``None`` if
    aperiodic) and the finite index hull ``support`` where it may deviate."""

    period: Optional[int]
    support: Optional[tuple[int, int]] = None

    @property
    def known(self) -> bool:
        return self.period is not None


class WeightFunction:
    """Base class for the weight variants."""

    exact: bool = True

    def __call__(self, a: int, i: int) -> Number:
        return self.eval(a, i)

    def eval(self, a: int, i: int) -> Number:
        rows = self.rows(i, 1)
        return rows.value((rows.one if a == 1 else rows.zero)[0])

    def rows(self, lo: int, n: int) -> Rows:
        raise NotImplementedError

    def structure(self) -> Structure:
        return Structure(None)

    def row_bounds(self, a: int) -> tuple[Number, Number]:
        """Certified ``(inf_i, sup_i)`` of ``phi(a, i)``."""
        raise NotImplementedError

    def sup_norm(self) -> Number:
        lo0, hi0 = self.row_bounds(0)
        lo1, hi1 = self.row_bounds(1)
        return max(abs(lo0), abs(hi0), abs(lo1), abs(hi1))

    # arithmetic builds Combo terms
    def __add__(self, other: "WeightFunction") -> "Combo":
        return Combo([(1, self), (1, other)])

    def __sub__(self, other: "WeightFunction") -> "Combo":
        return Combo([(1, self), (-1, other)])

    def __mul__(self, lam) -> "Combo":
        return Combo([(lam, self)])

    __rmul__ = __mul__

    def __neg__(self) -> "Combo":
        return Combo([(-1, self)])

    def to_json(self) -> dict:
        raise NotImplementedError


def _pack(values: Iterable[Number]) -> tuple[bool, int]:
    values = list(values)
    exact = all(isinstance(v, Fraction) for v in values)
    den = lcm_all(v.denominator for v in values) if exact else 1
    return exact, den


class Tabular(WeightFunction):
    """``phi(a, i) = default_a`` except at finitely many overridden indices.

    ``overrides`` maps ``(symbol, index)`` to a value; a missing partner
    symbol at an overridden index keeps its default.
    """

    def __init__(self, default0=0, default1=0, overrides: Optional[Mapping] = None, precision: str = "auto"):
        self.default0 = to_number(default0, precision)
        self.default1 = to_number(default1, precision)
        table: dict[int, list] = {}
        for (a, i), v in (overrides or {}).items():
            if a not in (0, 1):
                raise ValueError(f"symbol must be 0 or 1, got {a!r}")
            entry = table.setdefault(int(i), [self.default0, self.default1])
            entry[a] = to_number(v, precision)
        self.overrides = {i: (v[0], v[1]) for i, v in sorted(table.items())}
        vals = [self.default0, self.default1] + [x for pair in self.overrides.values() for x in pair]
        self.exact, self._den = _pack(vals)
        if not self.exact:
            self.default0, self.default1 = float(self.default0), float(self.default1)
            self.overrides = {i: (float(a), float(b)) for i, (a, b) in self.overrides.items()}

    @classmethod
    def from_triples(cls, default0, default1, triples, precision: str = "auto") -> "Tabular":
        over = {}
        for i, v0, v1 in triples:
            over[(0, int(i))] = v0
            over[(1, int(i))] = v1
        return cls(default0, default1, over, precision)

    def eval(self, a: int, i: int) -> Number:
        pair = self.overrides.get(i)
        if pair is None:
            return self.default1 if a == 1 else self.default0
        return pair[a]

    def structure(self) -> Structure:
        if not self.overrides:
            return Structure(1, None)
        keys = list(self.overrides)
        return Structure(1, (keys[0], keys[-1]))

    def rows(self, lo: int, n: int) -> Rows:
        if self.exact:
            d = self._den
            r0 = np.full(n, int(self.default0 * d), dtype=np.int64)
            r1 = np.full(n, int(self.default1 * d), dtype=np.int64)
            conv = lambda v: int(v * d)  # noqa: E731
        else:
            r0 = np.full(n, self.default0, dtype=np.float64)
            r1 = np.full(n, self.default1, dtype=np.float64)
            conv = float
        for i, (v0, v1) in self.overrides.items():
            if lo <= i < lo + n:
                r0[i - lo] = conv(v0)
                r1[i - lo] = conv(v1)
        return Rows(r0, r1, self._den if self.exact else None)

    def row_bounds(self, a: int):
        vals = [self.default1 if a == 1 else self.default0] + [p[a] for p in self.overrides.values()]
        return min(vals), max(vals)

    def to_json(self) -> dict:
        return {
            "variant": "tabular",
            "default0": number_to_json(self.default0),
            "default1": number_to_json(self.default1),
            "overrides": [[i, number_to_json(v0), number_to_json(v1)] for i, (v0, v1) in self.overrides.items()],
        }

    def __repr__(self) -> str:
        return f"Tabular({self.default0}, {self.default1}, {len(self.overrides)} overrides)"


def eval_weight(phi: WeightFunction, a: int, i: int) -> Number:
    """``phi(a, i)``."""
    if a not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {a!r}")
    return phi.eval(a, int(i))


def constant(c) -> Tabular:
    return Tabular(c, c)


class OrbitInduced(WeightFunction):
    """``phi(a, i) = table[(a, z_i)]`` for a fixed sequence ``z``."""

    def __init__(self, z: BiSequence, table: Mapping, precision: str = "auto"):
        self.z = z
        self.table = {(a, b): to_number(table[(a, b)], precision) for a in (0, 1) for b in (0, 1)}
        self.exact, self._den = _pack(self.table.values())
        if not self.exact:
            self.table = {k: float(v) for k, v in self.table.items()}

    def structure(self) -> Structure:
        return Structure(self.z.period, None)

    def rows(self, lo: int, n: int) -> Rows:
        zz = self.z.array(lo, n)
        t = self.table
        if self.exact:
            d = self._den
            vals = {k: int(v * d) for k, v in t.items()}
            dtype = np.int64
        else:
            vals, dtype = t, np.float64
        r0 = np.where(zz == 1, vals[(0, 1)], vals[(0, 0)]).astype(dtype)
        r1 = np.where(zz == 1, vals[(1, 1)], vals[(1, 0)]).astype(dtype)
        return Rows(r0, r1, self._den if self.exact else None)

    def eval(self, a: int, i: int) -> Number:
        return self.table[(a, self.z.symbol(i))]

    def row_bounds(self, a: int):
        vals = [self.table[(a, 0)], self.table[(a, 1)]]
        return min(vals), max(vals)

    def greedy_gap(self) -> Number:
        """``inf_i (phi(z_i, i) - phi(1 - z_i, i))`` over both symbol values."""
        t = self.table
        return min(t[(0, 0)] - t[(1, 0)], t[(1, 1)] - t[(0, 1)])

    def to_json(self) -> dict:
        return {
            "variant": "orbit_induced",
            "z": self.z.to_json(),
            "table": {f"{a}{b}": number_to_json(v) for (a, b), v in sorted(self.table.items())},
        }

    def __repr__(self) -> str:
        return f"OrbitInduced({self.z!r}, {self.table})"


def greedy_table(high=1, low=0) -> dict:
    """``phi(a, i) = high`` if ``a == z_i`` else ``low``."""
    return {(0, 0): high, (1, 1): high, (0, 1): low, (1, 0): low}


def greedy_gap(phi: OrbitInduced) -> Number:
    return phi.greedy_gap()


def gurvits_weights(z: BiSequence, alpha) -> OrbitInduced:
    """``L_0 e_n = alpha^(1 - z_n) e_{n+1}``, ``L_1 e_n = alpha^(z_n) e_{n+1}``."""
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    la = math.log(alpha)
    return OrbitInduced(z, {(0, 0): la, (0, 1): 0.0, (1, 0): 0.0, (1, 1): la})


def nomather_weights(z: BiSequence) -> OrbitInduced:
    """2 where ``a = z_i = 1``, 1 where ``a = z_i = 0``, 0 where ``a != z_i``."""
    return OrbitInduced(z, {(0, 0): 1, (1, 1): 2, (0, 1): 0, (1, 0): 0})


class Combo(WeightFunction):
    """``sum_t lam_t * phi_t``."""

    def __init__(self, terms: Iterable, precision: str = "auto"):
        flat = []
        for lam, phi in terms:
            lam = to_number(lam, precision)
            if isinstance(phi, Combo):
                flat.extend((lam * l2, p2) for l2, p2 in phi.terms)
            else:
                flat.append((lam, phi))
        if not flat:
            raise ValueError("Combo needs at least one term")
        self.terms = flat
        self.exact = all(isinstance(l, Fraction) and p.exact for l, p in flat)

    def structure(self) -> Structure:
        period, lo, hi = 1, None, None
        for _, phi in self.terms:
            s = phi.structure()
            if s.period is None:
                return Structure(None)
            period = period * s.period // math.gcd(period, s.period)
            if s.support is not None:
                lo = s.support[0] if lo is None else min(lo, s.support[0])
                hi = s.support[1] if hi is None else max(hi, s.support[1])
        return Structure(period, None if lo is None else (lo, hi))

    def rows(self, lo: int, n: int) -> Rows:
        parts = [(lam, phi.rows(lo, n)) for lam, phi in self.terms]
        if self.exact:
            den = lcm_all(lam.denominator * r.den for lam, r in parts)
            r0 = np.zeros(n, dtype=np.int64)
            r1 = np.zeros(n, dtype=np.int64)
            for lam, r in parts:
                factor = Fraction(den, r.den) * lam
                assert factor.denominator == 1
                f = int(factor)
                r0 = _safe_add(r0, _rescale(r.zero, abs(f)) * (1 if f >= 0 else -1))
                r1 = _safe_add(r1, _rescale(r.one, abs(f)) * (1 if f >= 0 else -1))
            return Rows(r0, r1, den)
        r0 = np.zeros(n, dtype=np.float64)
        r1 = np.zeros(n, dtype=np.float64)
        for lam, r in parts:
            rf = r.as_float()
            r0 += float(lam) * rf.zero
            r1 += float(lam) * rf.one
        return Rows(r0, r1, None)

    def eval(self, a: int, i: int) -> Number:
        total = sum((lam * phi.eval(a, i) for lam, phi in self.terms), Fraction(0) if self.exact else 0.0)
        return total if self.exact else float(total)

    def row_bounds(self, a: int):
        lo = hi = 0
        for lam, phi in self.terms:
            blo, bhi = phi.row_bounds(a)
            if lam >= 0:
                lo, hi = lo + lam * blo, hi + lam * bhi
            else:
                lo, hi = lo + lam * bhi, hi + lam * blo
        return lo, hi

    def sup_norm(self) -> Number:
        # Sigma |lam| * ||phi_t|| dominates the true norm
        return sum(abs(lam) * phi.sup_norm() for lam, phi in self.terms)

    def to_json(self) -> dict:
        return {"variant": "combo", "terms": [[number_to_json(lam), phi.to_json()] for lam, phi in self.terms]}

    def __repr__(self) -> str:
        return f"Combo({self.terms!r})"


def _safe_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object:
        return a.astype(object) + b.astype(object)
    if a.size and (int(np.abs(a).max()) + int(np.abs(b).max())) >= _INT64_SAFE:
        return a.astype(object) + b.astype(object)
    return a + b


# ---------------------------------------------------------------------------
# perturbation functions psi_ell and psi_A


class FiniteSet:
    """An explicit finite set ``A`` of integers."""

    def __init__(self, members: Iterable[int]):
        self._members = np.array(sorted({int(m) for m in members}), dtype=np.int64)
        self._set = set(self._members.tolist())

    def __contains__(self, ell) -> bool:
        return int(ell) in self._set

    def members(self, lo: int, hi: int) -> np.ndarray:
        m = self._members
        return m[(m >= lo) & (m <= hi)]

    def hull(self) -> Optional[tuple[int, int]]:
        if not len(self._members):
            return None
        return int(self._members[0]), int(self._members[-1])

    def __len__(self) -> int:
        return len(self._members)

    def to_json(self) -> dict:
        return {"members": self._members.tolist()}


def psi_ell(omega, ell: int) -> Tabular:
    """``psi_ell(omega_i, ell+i) = 1`` and ``psi_ell(1-omega_i, ell+i) = -N``."""
    omega = _word(omega)
    N = len(omega)
    over = {}
    for i, s in enumerate(omega):
        over[(s, ell + i)] = 1
        over[(1 - s, ell + i)] = -N
    return Tabular(0, 0, over)


class Psi(WeightFunction):
    """``psi_A = sum_{ell in A} psi_ell``; ``A`` is a :class:`FiniteSet` or a
    :class:`PerturbationPlan` (anything with ``members``/``hull``/``in``)."""

    exact = True

    def __init__(self, omega, A):
        self.omega = _word(omega)
        self.N = len(self.omega)
        self.A = A

    @property
    def plan(self) -> Optional["PerturbationPlan"]:
        return self.A if isinstance(self.A, PerturbationPlan) else None

    def structure(self) -> Structure:
        hull = self.A.hull()
        if hull is None:
            return Structure(1, None)
        return Structure(1, (hull[0], hull[1] + self.N - 1))

    def eval(self, a: int, i: int) -> Fraction:
        total = 0
        N = self.N
        for ell in range(i - N + 1, i + 1):
            if ell in self.A:
                total += 1 if a == self.omega[i - ell] else -N
        return Fraction(total)

    def rows(self, lo: int, n: int) -> Rows:
        N = self.N
        r0 = np.zeros(n, dtype=np.int64)
        r1 = np.zeros(n, dtype=np.int64)
        members = self.A.members(lo - N + 1, lo + n - 1)
        rows = (r0, r1)
        for t, s in enumerate(self.omega):
            pos = members + t - lo
            pos = pos[(pos >= 0) & (pos < n)]
            # members are distinct, so positions for fixed t are distinct
            rows[s][pos] += 1
            rows[1 - s][pos] -= N
        return Rows(r0, r1, 1)

    def row_bounds(self, a: int):
        return Fraction(-self.N * self.N), Fraction(self.N)

    def sup_norm(self) -> Fraction:
        return Fraction(self.N * self.N)

    def to_json(self) -> dict:
        doc = {"variant": "psi", "omega": str(self.omega)}
        if isinstance(self.A, PerturbationPlan):
            doc["plan"] = self.A.to_json()
        else:
            doc.update(self.A.to_json())
        return doc

    def __repr__(self) -> str:
        return f"Psi('{self.omega}', {self.A!r})"


def plan_lengths(N: int, J: int) -> list[int]:
    """``n_1 = N``; ``n_j`` is the least integer with ``sum_{i<j} n_i / n_j < 2^-(j+1)``."""
    if N < 1 or J < 1:
        raise ValueError("N and J must be positive")
    ns = [N]
    for j in range(2, J + 1):
        total = sum(ns)
        ns.append(total * 2 ** (j + 1) + 1)
    return ns


def _interval_difference(interval: tuple[int, int], removed: list[tuple[int, int]]) -> list[tuple[int, int]]:
    pieces = [interval]
    for r0, r1 in removed:
        nxt = []
        for a, b in pieces:
            if r1 < a or r0 > b:
                nxt.append((a, b))
                continue
            if a < r0:
                nxt.append((a, r0 - 1))
            if r1 < b:
                nxt.append((r1 + 1, b))
        pieces = nxt
    return sorted(pieces)


@dataclass(frozen=True)
class PlanLevel:
    j: int
    n: int
    k: int
    B: tuple  # disjoint closed intervals
    window_average: Number


@dataclass
class PerturbationPlan:
    """Data ``(omega, N, z, n_j, k_j, B_j)`` defining ``A`` and ``psi_A``.

    ``B_j`` is stored as disjoint closed intervals.  ``C_j``, ``A_j`` and
    membership in ``A = U_j A_j`` are evaluated on demand from ``z``.
    """

    omega: Word
    z: BiSequence
    levels: list = field(default_factory=list)
    target: Optional[Number] = None

    _CHUNK = 1 << 20

    @property
    def N(self) -> int:
        return len(self.omega)

    @property
    def J(self) -> int:
        return len(self.levels)

    @property
    def n(self) -> list[int]:
        return [lv.n for lv in self.levels]

    @property
    def k(self) -> list[int]:
        return [lv.k for lv in self.levels]

    def level(self, j: int) -> PlanLevel:
        if not 1 <= j <= self.J:
            raise ValueError(f"level {j} outside 1..{self.J}")
        return self.levels[j - 1]

    def block_range(self, j: int) -> tuple[int, int]:
        lv = self.level(j)
        return lv.k, lv.k + lv.n - self.N

    # -- set views
    def B(self, j: int) -> np.ndarray:
        return np.concatenate(
            [np.arange(a, b + 1, dtype=np.int64) for a, b in self.level(j).B] or [np.zeros(0, dtype=np.int64)]
        )

    def _occurs(self, j: int, ells: np.ndarray) -> np.ndarray:
        """``sigma^(ell - k_j) z in [omega]`` for a contiguous sorted ``ells``."""
        if not len(ells):
            return np.zeros(0, dtype=bool)
        k = self.level(j).k
        lo = int(ells[0])
        zz = self.z.array(lo - k, int(ells[-1]) - lo + self.N)
        occ = occurrences(zz, self.omega)
        return occ[ells - lo]

    def C(self, j: int) -> np.ndarray:
        a, b = self.block_range(j)
        ells = np.arange(a, b + 1, dtype=np.int64)
        return ells[self._occurs(j, ells)]

    def A_level(self, j: int) -> np.ndarray:
        parts = []
        for a, b in self.level(j).B:
            ells = np.arange(a, b + 1, dtype=np.int64)
            parts.append(ells[self._occurs(j, ells)])
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    def count_C(self, j: int) -> int:
        a, b = self.block_range(j)
        return self._count(j, [(a, b)])

    def count_A(self, j: int) -> int:
        return self._count(j, list(self.level(j).B))

    def _count(self, j: int, intervals) -> int:
        total = 0
        for a, b in intervals:
            for s in range(a, b + 1, self._CHUNK):
                e = min(b, s + self._CHUNK - 1)
                total += int(self._occurs(j, np.arange(s, e + 1, dtype=np.int64)).sum())
        return total

    # -- protocol used by Psi
    def __contains__(self, ell) -> bool:
        ell = int(ell)
        for lv in self.levels:
            for a, b in lv.B:
                if a <= ell <= b:
                    return bool(self._occurs(lv.j, np.array([ell], dtype=np.int64))[0])
        return False

    def members(self, lo: int, hi: int) -> np.ndarray:
        parts = []
        for lv in self.levels:
            for a, b in lv.B:
                s, e = max(a, lo), min(b, hi)
                if s > e:
                    continue
                ells = np.arange(s, e + 1, dtype=np.int64)
                parts.append(ells[self._occurs(lv.j, ells)])
        if not parts:
            return np.zeros(0, dtype=np.int64)
        return np.sort(np.concatenate(parts))

    def hull(self) -> Optional[tuple[int, int]]:
        ends = [(a, b) for lv in self.levels for a, b in lv.B]
        if not ends:
            return None
        return min(a for a, _ in ends), max(b for _, b in ends)

    def psi(self) -> Psi:
        return Psi(self.omega, self)

    def check_invariants(self) -> list[str]:
        """Return a list of violated plan invariants (empty when all hold)."""
        bad = []
        if self.levels and self.levels[0].n != self.N:
            bad.append("n_1 != N")
        for j in range(2, self.J + 1):
            prior = sum(self.n[: j - 1])
            if not Fraction(prior, self.n[j - 1]) < Fraction(1, 2 ** (j + 1)):
                bad.append(f"length rule fails at j={j}")
        seen: list[tuple[int, int]] = []
        for lv in self.levels:
            for a, b in lv.B:
                if any(not (b < c or a > d) for c, d in seen):
                    bad.append(f"B_{lv.j} overlaps an earlier B")
            a0, b0 = self.block_range(lv.j)
            if any(a < a0 or b > b0 for a, b in lv.B):
                bad.append(f"B_{lv.j} leaves its block range")
            seen.extend(lv.B)
        return bad

    def to_json(self) -> dict:
        return {
            "omega": str(self.omega),
            "N": self.N,
            "z": self.z.to_json(),
            "levels": [
                {
                    "j": lv.j,
                    "n": lv.n,
                    "k": lv.k,
                    "B": [list(iv) for iv in lv.B],
                    "window_average": number_to_json(lv.window_average),
                }
                for lv in self.levels
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PerturbationPlan":
        levels = [
            PlanLevel(int(d["j"]), int(d["n"]), int(d["k"]), tuple(tuple(iv) for iv in d["B"]),
                      number_from_json(d.get("window_average", 0)))
            for d in doc["levels"]
        ]
        return cls(Word(doc["omega"]), sequence_from_json(doc["z"]), levels)

    @classmethod
    def from_levels(cls, omega, z: BiSequence, ks: list[int], ns: Optional[list[int]] = None,
                    window_averages=None) -> "PerturbationPlan":
        """Assemble a plan from chosen offsets ``k_j`` (and optionally lengths)."""
        omega = _word(omega)
        ns = plan_lengths(len(omega), len(ks)) if ns is None else list(ns)
        levels, used = [], []
        for j, (n, k) in enumerate(zip(ns, ks), start=1):
            full = (k, k + n - len(omega))
            B = tuple(_interval_difference(full, used)) if full[0] <= full[1] else ()
            used.append(full)
            avg = window_averages[j - 1] if window_averages else Fraction(0)
            levels.append(PlanLevel(j, n, k, B, avg))
        return cls(omega, z, levels)


def build_plan(phi: WeightFunction, omega, z: BiSequence, J: int, k_search: int) -> PerturbationPlan:
    """Choose ``n_j`` by the doubling rule and ``k_j`` as the best offset in
    ``[-k_search, k_search]`` for the window sum of ``phi`` along ``z_0..z_{n_j-1}``.

    Raises ``ValueError`` when ``omega`` does not occur in ``z`` along the
    plan windows (``psi_A`` would vanish).
    """
    from .cocycle import shift_sums  # local import: cocycle depends on this module

    omega = _word(omega)
    N = len(omega)
    ns = plan_lengths(N, J)
    # C_j collects occurrences of omega in z_0 .. z_{n_j - 1}
    head = z.array(0, min(ns[-1], 1 << 22))
    if not occurrences(head, omega).any():
        raise ValueError(f"omega={omega} does not occur in z within the plan windows")
    ks, avgs = [], []
    for n in ns:
        sums = shift_sums(phi, z, n, -k_search, k_search)
        idx = sums.argmax()
        ks.append(-k_search + idx)
        best = sums.value(idx)
        avgs.append(best / n if isinstance(best, Fraction) else best / n)
    return PerturbationPlan.from_levels(omega, z, ks, ns, avgs)


# ---------------------------------------------------------------------------
# JSON


def weight_from_json(doc: dict, precision: str = "auto") -> WeightFunction:
    kind = doc.get("variant")
    if kind == "tabular":
        return Tabular.from_triples(doc.get("default0", 0), doc.get("default1", 0), doc.get("overrides", []), precision)
    if kind == "constant":
        c = number_from_json(doc["value"], precision)
        return Tabular(c, c)
    if kind == "orbit_induced":
        if not isinstance(doc.get("table"), dict):
            raise ValueError('orbit_induced "table" must map "ab" keys to values')
        table = {(int(k[0]), int(k[1])): v for k, v in doc["table"].items()}
        return OrbitInduced(sequence_from_json(doc["z"]), table, precision)
    if kind == "gurvits":
        return gurvits_weights(sequence_from_json(doc.get("z", {"variant": "sturmian"})), doc.get("alpha", 0.5))
    if kind == "combo":
        return Combo([(number_from_json(lam, precision), weight_from_json(t, precision)) for lam, t in doc["terms"]],
                     precision)
    if kind == "psi":
        if "plan" in doc:
            plan = PerturbationPlan.from_json(doc["plan"])
            return Psi(plan.omega, plan)
        return Psi(doc["omega"], FiniteSet(doc.get("members", [])))
    raise ValueError(f"unknown weight variant {kind!r}")
