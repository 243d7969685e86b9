"""Windowed weight sums and the norm identity.

For a word ``x`` of length ``n`` the operator product has

    log ||L_{x_n} ... L_{x_1}|| = sup_k sum_{i<n} phi(x_i, k + i),

so every growth quantity reduces to maximizing *shift sums*
``S(k) = sum_i phi(x_i, k+i)`` over integer offsets ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from ._numeric import Number, number_to_json
from .symbolic import BiSequence, Word
from .weights import Rows, WeightFunction

__all__ = [
    "Bounds",
    "ShiftSums",
    "as_symbols",
    "window_sum",
    "shift_sums",
    "power_shift_sums",
    "exact_scan_range",
    "log_norm",
    "periodic_log_spectral_radius",
    "periodic_far_field_rate",
]

_INT64_SAFE = 1 << 62
# element-op budget above which exact scans are skipped
SCAN_BUDGET = 2 * 10**8


@dataclass(frozen=True)
class Bounds:
    """A certified ``lower`` value and an optional certified ``upper`` value.

    ``upper is None`` marks a one-sided result.  ``estimate`` is set when
    ``lower`` is a heuristic estimate rather than a certified bound.
    """

    lower: Number
    upper: Optional[Number] = None
    meta: dict = field(default_factory=dict)
    estimate: bool = False

    def __post_init__(self):
        if self.upper is not None and not self.estimate:
            if isinstance(self.lower, Fraction) and isinstance(self.upper, Fraction):
                slack = 0
            else:
                slack = 1e-9 * max(1.0, abs(float(self.upper)))
            if self.lower > self.upper + slack:
                raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.upper == self.lower

    @property
    def one_sided(self) -> bool:
        return self.upper is None

    @property
    def value(self) -> Number:
        return self.upper if self.exact else self.lower

    def scaled(self, factor) -> "Bounds":
        up = None if self.upper is None else self.upper * factor
        return Bounds(self.lower * factor, up, dict(self.meta), self.estimate)

    def to_json(self) -> dict:
        return {
            "lower": number_to_json(self.lower),
            "upper": None if self.upper is None else number_to_json(self.upper),
            "exact": self.exact,
            "one_sided": self.one_sided,
            "estimate": self.estimate,
            "meta": {k: (number_to_json(v) if isinstance(v, (Fraction, float)) else v) for k, v in self.meta.items()},
        }


def as_symbols(x) -> np.ndarray:
    """Return ``x`` (Word, str, sequence or array) as an int8 array of 0/1."""
    if isinstance(x, np.ndarray):
        arr = np.asarray(x).ravel()
        if arr.size and (arr.min() < 0 or arr.max() > 1):
            raise ValueError("symbols must be 0 or 1")
        if not arr.size:
            raise ValueError("empty word")
        return arr.astype(np.int8, copy=False)
    return Word(x).as_array()


def _exact_total(arr: np.ndarray) -> int:
    if arr.dtype == object:
        return int(sum(arr.tolist()))
    if arr.size and int(np.abs(arr).max()) * arr.size >= _INT64_SAFE:
        return int(sum(arr.astype(object).tolist()))
    return int(arr.sum())


def window_sum(phi: WeightFunction, x, k: int) -> Number:
    """``sum_{i<n} phi(x_i, k+i)``, exact on rational weights."""
    xs = as_symbols(x)
    rows = phi.rows(k, len(xs))
    vals = rows.pick(xs)
    if rows.exact:
        return Fraction(_exact_total(vals), rows.den)
    return float(vals.sum())


class ShiftSums:
    """Values ``S(k)`` for ``k = k_lo .. k_lo + len - 1`` (numerators over ``den``)."""

    def __init__(self, values: np.ndarray, den: Optional[int], k_lo: int):
        self.values = values
        self.den = den
        self.k_lo = k_lo

    def __len__(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return self.den is not None

    def value(self, idx) -> Number:
        v = self.values[int(idx)]
        return Fraction(int(v), self.den) if self.exact else float(v)

    def argmax(self) -> int:
        if self.values.dtype == object:
            vals = self.values.tolist()
            best = max(vals)
            return vals.index(best)
        return int(np.argmax(self.values))

    def max(self) -> Number:
        return self.value(self.argmax())

    def best_k(self) -> int:
        return self.k_lo + self.argmax()

    def at(self, k: int) -> Number:
        return self.value(k - self.k_lo)


def _correlate(a: np.ndarray, v: np.ndarray, exact: bool) -> np.ndarray:
    """``c[j] = sum_i a[j+i] * v[i]`` for ``j = 0 .. len(a)-len(v)`` with 0/1 ``v``."""
    n, span = len(v), len(a) - len(v) + 1
    if a.dtype == object:
        return np.array([sum(a[j : j + n][v == 1].tolist()) for j in range(span)], dtype=object)
    bound = float(np.abs(a).max()) * n if a.size else 0.0
    if exact and bound >= _INT64_SAFE:
        return _correlate(a.astype(object), v, exact)
    if n * span <= 4 * 10**6 or (exact and bound >= 2**40):
        return np.correlate(a, v.astype(a.dtype), mode="valid")
    size = 1 << int(np.ceil(np.log2(len(a) + n)))
    fa = np.fft.rfft(a.astype(np.float64), size)
    fv = np.fft.rfft(v[::-1].astype(np.float64), size)
    full = np.fft.irfft(fa * fv, size)[n - 1 : n - 1 + span]
    if exact:
        return np.rint(full).astype(np.int64)
    return full


def _window_totals(a: np.ndarray, n: int) -> np.ndarray:
    """Sums of ``a`` over every length-``n`` window."""
    if a.dtype == object:
        c = np.concatenate([[0], np.cumsum(a)]).astype(object)
    else:
        c = np.concatenate([np.zeros(1, dtype=a.dtype), np.cumsum(a)])
    return c[n:] - c[: len(c) - n]


def _rows_sums(rows: Rows, xs: np.ndarray, span: int) -> np.ndarray:
    n = len(xs)
    if not rows.exact:
        # two direct correlations avoid the cancellation of prefix-sum differences
        return _correlate(rows.one, xs, False) + _correlate(rows.zero, (1 - xs).astype(xs.dtype), False)
    base = _window_totals(rows.zero, n)
    return base[:span] + _correlate(rows.one - rows.zero, xs, rows.exact)


def _x_array(x, n: Optional[int]) -> np.ndarray:
    if isinstance(x, BiSequence):
        if n is None:
            raise ValueError("n is required when x is a bi-infinite sequence")
        return x.array(0, n)
    xs = as_symbols(x)
    if n is not None and n != len(xs):
        xs = xs[:n]
    return xs


def shift_sums(phi: WeightFunction, x, n: Optional[int], k_lo: int, k_hi: int) -> ShiftSums:
    """``S(k) = sum_{i<n} phi(x_i, k+i)`` for every ``k`` in ``[k_lo, k_hi]``.

    ``x`` is a word or a bi-infinite sequence (read from index 0).  When both
    ``phi`` and ``x`` are purely periodic the cost is independent of ``n``.
    """
    if k_hi < k_lo:
        raise ValueError("empty offset range")
    struct = phi.structure()
    if isinstance(x, BiSequence) and x.period is not None and struct.period is not None and struct.support is None:
        return _periodic_shift_sums(phi, x, n, k_lo, k_hi, struct.period)
    xs = _x_array(x, n)
    span = k_hi - k_lo + 1
    rows = phi.rows(k_lo, len(xs) + span - 1)
    return ShiftSums(_rows_sums(rows, xs, span), rows.den, k_lo)


def _periodic_shift_sums(phi, x: BiSequence, n: int, k_lo: int, k_hi: int, P: int) -> ShiftSums:
    q = x.period
    L = P * q // np.gcd(P, q)
    full, rest = divmod(n, L)
    # per residue c mod P: sum over one L-block and over the first `rest` symbols
    block = shift_sums(phi, x.array(0, L), None, 0, P - 1)
    if rest:
        part = shift_sums(phi, x.array(0, rest), None, 0, P - 1)
        part_vals, part_den = part.values, part.den
    else:
        part_vals, part_den = np.zeros(P, dtype=block.values.dtype), block.den
    if block.exact:
        den = block.den * part_den // np.gcd(block.den, part_den)
        bv = _scale_int(block.values, den // block.den)
        pv = _scale_int(part_vals, den // part_den)
        if bv.dtype != object and bv.size and int(np.abs(bv).max()) * (full + 1) >= _INT64_SAFE:
            bv = bv.astype(object)
        per_res = bv * full + pv
    else:
        den = None
        per_res = block.values * full + part_vals
    ks = np.arange(k_lo, k_hi + 1, dtype=np.int64) % P
    return ShiftSums(per_res[ks], den, k_lo)


def _scale_int(arr: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return arr
    if arr.dtype != object and (not arr.size or int(np.abs(arr).max()) * factor < _INT64_SAFE):
        return arr * factor
    return arr.astype(object) * factor


def power_shift_sums(phi: WeightFunction, w, m: int, k_lo: int, k_hi: int) -> ShiftSums:
    """Shift sums for ``x = w^m`` using strided prefix sums (cost ``O(|w| * span + m|w|)``)."""
    wa = as_symbols(w)
    p = len(wa)
    n = p * m
    span = k_hi - k_lo + 1
    total_len = span + n - 1
    rows = phi.rows(k_lo, total_len)
    if rows.exact and (rows.zero.dtype == object or rows.one.dtype == object):
        return shift_sums(phi, np.tile(wa, m), None, k_lo, k_hi)
    if rows.exact:
        bound = max(int(np.abs(rows.zero).max()), int(np.abs(rows.one).max())) * n
        if bound >= _INT64_SAFE:
            return shift_sums(phi, np.tile(wa, m), None, k_lo, k_hi)
    out = None
    strided = {}
    for a in (0, 1):
        if a not in wa:
            continue
        F = rows.one if a == 1 else rows.zero
        # T[s] = sum_{t<m} F[s + t p] for s in [0, span + p - 1)
        rows_needed = -(-(len(F)) // p)
        padded = np.zeros(rows_needed * p, dtype=F.dtype)
        padded[: len(F)] = F
        C = np.cumsum(padded.reshape(rows_needed, p), axis=0).ravel()
        C = np.concatenate([np.zeros(p, dtype=C.dtype), C])
        s = np.arange(span + p - 1)
        strided[a] = C[s + m * p] - C[s]
    for r, a in enumerate(wa.tolist()):
        term = strided[a][r : r + span]
        out = term.copy() if out is None else out + term
    return ShiftSums(out, rows.den, k_lo)


def exact_scan_range(phi: WeightFunction, n: int) -> Optional[tuple[int, int]]:
    """Offsets ``[a, b]`` whose maximum equals ``sup_k`` over all of ``Z``,
    or ``None`` when the weight structure gives no such finite set."""
    s = phi.structure()
    if s.period is None:
        return None
    P = s.period
    if s.support is None:
        return 0, P - 1
    lo, hi = s.support
    return lo - n + 1 - P, hi + P


def log_norm(phi: WeightFunction, x, k_window: int, k_center: int = 0) -> Bounds:
    """Bounds on ``log ||L_{x_n} ... L_{x_1}||``.

    ``lower`` is the best shift sum over ``[k_center - k_window, k_center + k_window]``.
    ``upper`` is the exact supremum when the weight structure admits a finite
    scan, otherwise ``None``.
    """
    if k_window < 0:
        raise ValueError("k_window must be nonnegative")
    xs = as_symbols(x)
    n = len(xs)
    scan = shift_sums(phi, xs, None, k_center - k_window, k_center + k_window)
    lower = scan.max()
    upper = None
    exact_range = exact_scan_range(phi, n)
    if exact_range is not None and (exact_range[1] - exact_range[0] + 1) * n <= SCAN_BUDGET:
        upper = shift_sums(phi, xs, None, *exact_range).max()
        if upper < lower:
            # numerical slack on the floating path only
            upper = lower
    meta = {"n": n, "k_window": k_window, "k_center": k_center, "best_k": scan.best_k()}
    return Bounds(lower, upper, meta)


def periodic_far_field_rate(phi: WeightFunction, w) -> Number:
    """``max_c (1/L) sum_{i<L} phi(w_{i mod |w|}, B + c + i)`` with ``L = lcm(P, |w|)``.

    ``B`` sits just right of any finite support, so only the periodic far
    field contributes.  Raises ``ValueError`` for aperiodic structure.
    """
    s = phi.structure()
    if s.period is None:
        raise ValueError("weight function has no periodic structure")
    wa = as_symbols(w)
    p, P = len(wa), s.period
    L = p * P // np.gcd(p, P)
    base = 0 if s.support is None else s.support[1] + 1
    sums = shift_sums(phi, np.tile(wa, L // p), None, base, base + P - 1)
    best = sums.max()
    return best / L


def periodic_log_spectral_radius(phi: WeightFunction, w, m: int, k_window: int, k_center: int = 0) -> Bounds:
    """Bounds on ``log rho(L_w)`` (per period of ``w``, not per symbol).

    ``upper`` is ``min_{m' <= m} log_norm(w^m').upper / m'`` when exact norms
    exist; ``lower`` is the exact limit for periodic weight structure and an
    estimate ``log_norm(w^m).lower / m`` otherwise.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    wa = as_symbols(w)
    p = len(wa)
    s = phi.structure()
    meta = {"n": p * m, "k_window": k_window, "m": m, "word_length": p}
    if s.period is None:
        sums = power_shift_sums(phi, wa, m, k_center - k_window, k_center + k_window)
        meta["best_k"] = sums.best_k()
        return Bounds(sums.max() / m, None, meta, estimate=True)

    exact_limit = periodic_far_field_rate(phi, wa) * p
    upper, checked = _fekete_upper(phi, wa, m)
    meta["m_checked"] = checked
    if upper is not None and upper < exact_limit:
        upper = exact_limit  # floating slack only
    return Bounds(exact_limit, upper, meta)


def _fekete_upper(phi: WeightFunction, wa: np.ndarray, m: int):
    """``min over m'`` of the exact normalized norm of ``w^m'``."""
    p = len(wa)
    rng = exact_scan_range(phi, p * m)
    if rng is None:
        return None, 0
    k_lo, k_hi = rng
    R = k_hi - k_lo + 1
    if R * p * m <= SCAN_BUDGET:
        ms = list(range(1, m + 1))
    else:
        ms = sorted({1 << e for e in range(m.bit_length()) if (1 << e) <= m} | {m})
    best = None
    for mm in ms:
        lo_mm, hi_mm = exact_scan_range(phi, p * mm)
        if (hi_mm - lo_mm + 1) * p * mm > SCAN_BUDGET:
            continue
        val = power_shift_sums(phi, wa, mm, lo_mm, hi_mm).max() / mm
        best = val if best is None or val < best else best
    return best, len(ms)
