"""Binary words, bi-infinite sequences, cylinder sets and subshift descriptions.

Every sequence exposes ``array(a, n)`` (symbols ``a .. a+n-1`` as an int8
array) and ``window(a, b)`` (inclusive on both ends, returned as a
:class:`Word`).
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

import numpy as np

__all__ = [
    "Word",
    "BiSequence",
    "Periodic",
    "Sturmian",
    "BlockRecursive",
    "Shifted",
    "Complemented",
    "Materialized",
    "SubshiftSpec",
    "PeriodicOrbit",
    "FactorSet",
    "OrbitClosureApprox",
    "EndpointAmbiguityError",
    "window",
    "mismatch_density",
    "block_sequence",
    "lyndon_words",
    "necklaces",
    "occurrences",
    "default_exponents",
]


class Word(tuple):
    """A nonempty finite word over ``{0, 1}``.

    Accepts a string such as ``"0110"`` or any iterable of 0/1 values.
    """

    __slots__ = ()

    def __new__(cls, symbols):
        if isinstance(symbols, Word):
            return symbols
        if isinstance(symbols, str):
            if not symbols or any(c not in "01" for c in symbols):
                raise ValueError(f"invalid binary word {symbols!r}")
            data = tuple(int(c) for c in symbols)
        else:
            if isinstance(symbols, np.ndarray):
                symbols = symbols.ravel().tolist()
            data = tuple(int(s) for s in symbols)
        if not data:
            raise ValueError("words have length at least 1")
        if any(s not in (0, 1) for s in data):
            raise ValueError(f"symbols must be 0 or 1, got {data!r}")
        return super().__new__(cls, data)

    def __str__(self) -> str:
        return "".join(map(str, self))

    def __repr__(self) -> str:
        return f"Word('{self}')"

    def __add__(self, other) -> "Word":
        return Word(tuple(self) + tuple(Word(other)))

    def __mul__(self, times: int) -> "Word":
        if times < 1:
            raise ValueError("repetition count must be >= 1")
        return Word(tuple(self) * times)

    __rmul__ = __mul__

    def complement(self) -> "Word":
        return Word(1 - s for s in self)

    def rotate(self, r: int) -> "Word":
        r %= len(self)
        return Word(self[r:] + self[:r])

    def as_array(self) -> np.ndarray:
        return np.fromiter(self, dtype=np.int8, count=len(self))

    def ones(self) -> int:
        return sum(self)

    def is_primitive(self) -> bool:
        n = len(self)
        return all(self.rotate(d) != self for d in range(1, n) if n % d == 0)

    def minimal_period(self) -> int:
        """Smallest ``d`` dividing ``len`` with ``self == self.rotate(d)``."""
        n = len(self)
        for d in range(1, n + 1):
            if n % d == 0 and self.rotate(d) == self:
                return d
        return n  # pragma: no cover


def _word(w) -> Word:
    return w if isinstance(w, Word) else Word(w)


class EndpointAmbiguityError(ArithmeticError):
    """A rotation coordinate fell too close to an interval endpoint to decide."""


# ---------------------------------------------------------------------------
# bi-infinite sequences


class BiSequence:
    """Base class; subclasses implement ``array``."""

    period: Optional[int] = None

    def array(self, a: int, n: int) -> np.ndarray:
        raise NotImplementedError

    def symbol(self, i: int) -> int:
        return int(self.array(i, 1)[0])

    def window(self, a: int, b: int) -> Word:
        if a > b:
            raise ValueError(f"empty window [{a}, {b}]")
        return Word(self.array(a, b - a + 1))

    def shift(self, k: int) -> "Shifted":
        return Shifted(self, k)

    def complement(self) -> "Complemented":
        return Complemented(self)

    def to_json(self) -> dict:
        raise NotImplementedError


def window(seq: BiSequence, a: int, b: int) -> Word:
    """Symbols ``seq_a .. seq_b`` (inclusive)."""
    return seq.window(a, b)


class Periodic(BiSequence):
    """``word`` repeated in both directions; ``x_0 = word[0]``."""

    def __init__(self, word):
        self.word = _word(word)
        self.period = len(self.word)
        self._arr = self.word.as_array()

    def array(self, a: int, n: int) -> np.ndarray:
        idx = (np.arange(n, dtype=np.int64) + a) % self.period
        return self._arr[idx]

    def __repr__(self) -> str:
        return f"Periodic('{self.word}')"

    def __eq__(self, other) -> bool:
        return isinstance(other, Periodic) and other.word == self.word

    def __hash__(self) -> int:
        return hash(("periodic", self.word))

    def to_json(self) -> dict:
        return {"variant": "periodic", "word": str(self.word)}


GOLDEN = "golden"


def _fixed_point(value, bits: int) -> int:
    """``floor(value * 2**bits)`` for the supported rotation-number specs."""
    if isinstance(value, str) and value.strip().lower() == GOLDEN:
        # (sqrt 5 - 1) / 2 scaled by 2**bits, via integer square root
        root5 = math.isqrt(5 << (2 * bits))
        return (root5 - (1 << bits)) >> 1
    frac = Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
    return math.floor(frac * (1 << bits))


class Sturmian(BiSequence):
    """Coding of the rotation by ``gamma``: ``x_i = 1`` iff
    ``frac((i + offset) * gamma + phase)`` lies in the closed interval
    ``[0, 1/2]``.

    ``gamma`` is ``"golden"`` (``(sqrt 5 - 1)/2``) or a number given as a
    float, Fraction or decimal string, stored as a ``precision``-bit
    fixed-point number. Evaluations whose coordinate lies within the
    accumulated rounding error of ``0`` or ``1/2`` raise
    :class:`EndpointAmbiguityError`; the origin itself is exact.
    """

    def __init__(self, gamma=GOLDEN, offset: int = 0, phase=0, precision: int = 128):
        if precision < 80:
            raise ValueError("precision must be at least 80 bits")
        self.gamma = gamma
        self.offset = int(offset)
        self.precision = int(precision)
        self._mod = 1 << self.precision
        self._g = _fixed_point(gamma, self.precision) % self._mod
        if self._g == 0:
            raise ValueError("gamma must not be an integer")
        if not (isinstance(gamma, str) and gamma.strip().lower() == GOLDEN):
            fr = Fraction(gamma) if not isinstance(gamma, str) else Fraction(gamma.strip())
            if not isinstance(gamma, float) and fr.denominator < (1 << 24):
                raise ValueError(
                    f"gamma={gamma!r} is rational with a small denominator; "
                    "the coding would be periodic"
                )
        self.phase = phase
        self._phase = _fixed_point(phase, self.precision) % self._mod if phase else 0

    @classmethod
    def from_fixed(cls, g: int, phase_fixed: int = 0, offset: int = 0, precision: int = 128) -> "Sturmian":
        obj = cls.__new__(cls)
        obj.gamma = Fraction(g, 1 << precision)
        obj.offset = offset
        obj.precision = precision
        obj._mod = 1 << precision
        obj._g = g % obj._mod
        obj.phase = Fraction(phase_fixed, 1 << precision)
        obj._phase = phase_fixed % obj._mod
        return obj

    @property
    def gamma_fixed(self) -> int:
        return self._g

    def with_phase_fixed(self, phase_fixed: int) -> "Sturmian":
        return Sturmian.from_fixed(self._g, phase_fixed, self.offset, self.precision)

    def array(self, a: int, n: int) -> np.ndarray:
        mod, g, half = self._mod, self._g, self._mod >> 1
        start = a + self.offset
        worst = max(abs(start), abs(start + n)) + 2
        # the phase is exact in fixed point; only multiples of g accumulate error
        exact_origin = self._phase == 0
        r = (self._phase + start * g) % mod
        out = np.empty(n, dtype=np.int8)
        for t in range(n):
            idx = start + t
            if exact_origin and idx == 0:
                out[t] = 1
            else:
                if r < worst or mod - r < worst or abs(r - half) < worst:
                    raise EndpointAmbiguityError(
                        f"rotation coordinate at index {idx} within rounding error of an endpoint"
                    )
                out[t] = 1 if r <= half else 0
            r += g
            if r >= mod:
                r -= mod
        return out

    def __repr__(self) -> str:
        return f"Sturmian(gamma={self.gamma!r}, offset={self.offset})"

    def to_json(self) -> dict:
        gamma = self.gamma
        if isinstance(gamma, Fraction):
            gamma = str(gamma)
        out = {"variant": "sturmian", "gamma": gamma, "offset": self.offset, "precision": self.precision}
        if self._phase:
            out["phase_fixed"] = str(self._phase)
        return out


def default_exponents(depth: int) -> list[int]:
    """``a_j = 4**j`` for ``j = 1 .. depth``."""
    return [4 ** j for j in range(1, depth + 1)]


class BlockRecursive(BiSequence):
    """Nested block sequence ``B_{j+1} = B_j^{a_j} C_j``, ``C_{j+1} = C_j^{a_j} B_j``.

    ``exponents[j]`` is ``a_j``. The level-``depth`` block ``B_depth`` is
    placed on ``[origin, origin + len)`` with ``origin = -(len // 2)`` and
    tiled periodically outside. Experiments only read windows inside the
    central block; :meth:`central_window` enforces that.
    """

    _CACHE_LIMIT = 1 << 21

    def __init__(self, seed_b, seed_c, exponents: Iterable[int], depth: Optional[int] = None):
        self.seed_b = _word(seed_b)
        self.seed_c = _word(seed_c)
        self.exponents = [int(e) for e in exponents]
        if any(e < 1 for e in self.exponents):
            raise ValueError("exponents must be positive")
        self.depth = len(self.exponents) if depth is None else int(depth)
        if not 0 <= self.depth <= len(self.exponents):
            raise ValueError(f"depth {depth} exceeds the {len(self.exponents)} exponents given")
        lb, lc = [len(self.seed_b)], [len(self.seed_c)]
        ob, oc = [self.seed_b.ones()], [self.seed_c.ones()]
        for a in self.exponents[: self.depth]:
            lb.append(a * lb[-1] + lc[-1])
            lc.append(a * lc[-1] + lb[-2])
            ob.append(a * ob[-1] + oc[-1])
            oc.append(a * oc[-1] + ob[-2])
        self._len = {"B": lb, "C": lc}
        self._ones = {"B": ob, "C": oc}
        self.period = lb[self.depth]
        self.origin = -(self.period // 2)
        self._cache: dict = {}

    # -- block bookkeeping
    def block_length(self, level: int, kind: str = "B") -> int:
        return self._len[kind][level]

    def ones_frequency(self, level: int, kind: str = "B") -> Fraction:
        return Fraction(self._ones[kind][level], self._len[kind][level])

    def block(self, level: int, kind: str = "B") -> Word:
        return Word(self._block_array(level, kind, 0, self._len[kind][level]))

    def central_range(self) -> tuple[int, int]:
        return self.origin, self.origin + self.period - 1

    def block_offset(self, level: int, kind: str = "B") -> int:
        """Absolute index of the first ``kind`` block of ``level`` inside the central block."""
        if not 0 <= level <= self.depth:
            raise ValueError("level out of range")
        if kind == "B":
            return self.origin
        if level == self.depth:
            raise ValueError("the central block is B_depth; C_depth does not occur in it")
        # C_level first occurs inside B_{level+1} after a_level copies of B_level
        return self.origin + self.exponents[level] * self._len["B"][level]

    def central_window(self, a: int, n: int) -> np.ndarray:
        lo, hi = self.central_range()
        if a < lo or a + n - 1 > hi:
            raise ValueError(f"window [{a}, {a + n - 1}] leaves the central block [{lo}, {hi}]")
        return self.array(a, n)

    # -- evaluation
    def _block_array(self, level: int, kind: str, start: int, stop: int) -> np.ndarray:
        length = self._len[kind][level]
        if length <= self._CACHE_LIMIT:
            key = (level, kind)
            full = self._cache.get(key)
            if full is None:
                full = self._materialize(level, kind)
                self._cache[key] = full
            return full[start:stop]
        parts = []
        self._collect(level, kind, start, stop, parts)
        return np.concatenate(parts) if parts else np.empty(0, dtype=np.int8)

    def _materialize(self, level: int, kind: str) -> np.ndarray:
        if level == 0:
            return (self.seed_b if kind == "B" else self.seed_c).as_array()
        other = "C" if kind == "B" else "B"
        same = self._block_array(level - 1, kind, 0, self._len[kind][level - 1])
        tail = self._block_array(level - 1, other, 0, self._len[other][level - 1])
        return np.concatenate([np.tile(same, self.exponents[level - 1]), tail])

    def _collect(self, level: int, kind: str, start: int, stop: int, parts: list) -> None:
        if self._len[kind][level] <= self._CACHE_LIMIT:
            parts.append(self._block_array(level, kind, start, stop))
            return
        other = "C" if kind == "B" else "B"
        sub = self._len[kind][level - 1]
        reps = self.exponents[level - 1]
        head = reps * sub
        pos = start
        while pos < stop:
            if pos < head:
                q, r = divmod(pos, sub)
                end = min(stop, (q + 1) * sub)
                self._collect(level - 1, kind, r, r + end - pos, parts)
            else:
                end = stop
                self._collect(level - 1, other, pos - head, stop - head, parts)
            pos = end

    def array(self, a: int, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.int8)
        filled = 0
        while filled < n:
            pos = (a + filled - self.origin) % self.period
            take = min(n - filled, self.period - pos)
            out[filled : filled + take] = self._block_array(self.depth, "B", pos, pos + take)
            filled += take
        return out

    def __repr__(self) -> str:
        return f"BlockRecursive('{self.seed_b}', '{self.seed_c}', {self.exponents}, depth={self.depth})"

    def to_json(self) -> dict:
        return {
            "variant": "block_recursive",
            "seed_b": str(self.seed_b),
            "seed_c": str(self.seed_c),
            "exponents": list(self.exponents),
            "depth": self.depth,
        }


def block_sequence(seed_b, seed_c, exponents, depth: int) -> BlockRecursive:
    exponents = list(exponents)
    if depth > len(exponents):
        raise ValueError("depth exceeds the number of exponents")
    return BlockRecursive(seed_b, seed_c, exponents, depth)


class Shifted(BiSequence):
    """``(sigma^k base)_i = base_{i+k}``."""

    def __init__(self, base: BiSequence, k: int):
        self.base = base
        self.k = int(k)
        self.period = base.period

    def array(self, a: int, n: int) -> np.ndarray:
        return self.base.array(a + self.k, n)

    def __repr__(self) -> str:
        return f"Shifted({self.base!r}, {self.k})"

    def to_json(self) -> dict:
        return {"variant": "shifted", "base": self.base.to_json(), "k": self.k}


class Materialized(BiSequence):
    """``base`` with the symbols on ``[a, a + n)`` precomputed.

    Requests inside the stored range are served by slicing; others fall
    through to ``base``.
    """

    def __init__(self, base: BiSequence, a: int, n: int):
        self.base = base
        self.period = base.period
        self.a = int(a)
        self._arr = base.array(self.a, int(n))

    def array(self, a: int, n: int) -> np.ndarray:
        lo = a - self.a
        if lo >= 0 and lo + n <= len(self._arr):
            return self._arr[lo : lo + n]
        return self.base.array(a, n)

    def __repr__(self) -> str:
        return f"Materialized({self.base!r}, a={self.a}, n={len(self._arr)})"

    def to_json(self) -> dict:
        return self.base.to_json()


class Complemented(BiSequence):
    def __init__(self, base: BiSequence):
        self.base = base
        self.period = base.period

    def array(self, a: int, n: int) -> np.ndarray:
        return (1 - self.base.array(a, n)).astype(np.int8)

    def __repr__(self) -> str:
        return f"Complemented({self.base!r})"

    def to_json(self) -> dict:
        return {"variant": "complemented", "base": self.base.to_json()}


def sequence_from_json(doc: dict) -> BiSequence:
    kind = doc.get("variant")
    if kind == "periodic":
        return Periodic(doc["word"])
    if kind == "sturmian":
        seq = Sturmian(doc.get("gamma", GOLDEN), doc.get("offset", 0), precision=int(doc.get("precision", 128)))
        if "phase_fixed" in doc:
            seq = Sturmian.from_fixed(seq.gamma_fixed, int(doc["phase_fixed"]), seq.offset, seq.precision)
            seq.gamma = doc.get("gamma", GOLDEN)
        return seq
    if kind == "block_recursive":
        return BlockRecursive(doc["seed_b"], doc["seed_c"], doc["exponents"], doc.get("depth"))
    if kind == "shifted":
        return Shifted(sequence_from_json(doc["base"]), doc["k"])
    if kind == "complemented":
        return Complemented(sequence_from_json(doc["base"]))
    raise ValueError(f"unknown sequence variant {kind!r}")


# ---------------------------------------------------------------------------
# word utilities


def mismatch_density(u, v) -> Fraction:
    u, v = _word(u), _word(v)
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} != {len(v)}")
    return Fraction(sum(a != b for a, b in zip(u, v)), len(u))


def occurrences(x: np.ndarray, omega) -> np.ndarray:
    """Boolean array: ``out[i]`` is True iff ``x[i : i+N] == omega``."""
    omega = _word(omega)
    n, N = len(x), len(omega)
    if n < N:
        return np.zeros(0, dtype=bool)
    out = np.ones(n - N + 1, dtype=bool)
    for t, s in enumerate(omega):
        out &= x[t : t + n - N + 1] == s
    return out


def necklaces(n: int) -> Iterator[Word]:
    """Lexicographically least rotations of all binary words of length ``n``."""
    for w in _fkm(n):
        if n % len(w) == 0:
            yield Word(w * (n // len(w)))


def lyndon_words(n: int) -> Iterator[Word]:
    """Primitive necklaces (Lyndon words) of exact length ``n``."""
    for w in _fkm(n):
        if len(w) == n:
            yield Word(w)


@lru_cache(maxsize=None)
def _fkm(n: int) -> tuple:
    # Fredricksen-Kessler-Maiorana / Duval generation of Lyndon words of length <= n
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        out.append(tuple(w))
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == 1:
            w.pop()
    return tuple(out)


# ---------------------------------------------------------------------------
# subshift descriptions


class SubshiftSpec:
    def factor_set(self, L: int) -> "FactorSet":
        raise NotImplementedError


class PeriodicOrbit(SubshiftSpec):
    """The finite orbit of ``word^infinity``."""

    def __init__(self, word):
        self.word = _word(word)

    def factor_set(self, L: int) -> "FactorSet":
        seq = Periodic(self.word)
        p = len(self.word)
        return FactorSet(L, {seq.window(s, s + L - 1) for s in range(p)})

    def to_json(self) -> dict:
        return {"variant": "periodic_orbit", "word": str(self.word)}


class FactorSet(SubshiftSpec):
    """A set of length-``L`` words; ``u -> v`` when ``u[1:] == v[:-1]``.

    Every factor must have at least one follower.
    """

    def __init__(self, L: int, factors: Iterable):
        self.L = int(L)
        self.factors = frozenset(_word(f) for f in factors)
        if not self.factors:
            raise ValueError("empty factor set")
        if any(len(f) != self.L for f in self.factors):
            raise ValueError(f"all factors must have length {self.L}")
        dead = [f for f in self.factors if not self.followers(f)]
        if dead:
            raise ValueError(f"factor set has dead ends: {sorted(map(str, dead))[:5]}")

    def followers(self, f: Word) -> list[Word]:
        tail = tuple(f[1:])
        return [g for g in (Word(tail + (0,)), Word(tail + (1,))) if g in self.factors]

    def factor_set(self, L: int) -> "FactorSet":
        if L != self.L:
            raise ValueError("FactorSet cannot change its order")
        return self

    def admissible_words(self, n: int) -> set:
        """All length-``n`` words whose length-``L`` factors are in the set (brute force)."""
        if n <= self.L:
            return {Word(f[s : s + n]) for f in self.factors for s in range(self.L - n + 1)}
        current = {tuple(f) for f in self.factors}
        for _ in range(n - self.L):
            nxt = set()
            for w in current:
                for g in self.followers(Word(w[-self.L :])):
                    nxt.add(w + (g[-1],))
            current = nxt
        return {Word(w) for w in current}

    def to_json(self) -> dict:
        return {"variant": "factor_set", "L": self.L, "factors": sorted(map(str, self.factors))}


class OrbitClosureApprox(SubshiftSpec):
    """Length-``L`` factors of ``seq`` read on ``[start, start + window)``.

    Factors without a follower inside the window are pruned iteratively so
    the resulting follower graph has no dead ends.
    """

    def __init__(self, seq: BiSequence, window: int, L: int, start: int = 0):
        self.seq, self.window, self.L, self.start = seq, int(window), int(L), int(start)

    def factor_set(self, L: Optional[int] = None) -> FactorSet:
        L = self.L if L is None else L
        x = self.seq.array(self.start, self.window)
        found = {Word(x[s : s + L]) for s in range(self.window - L + 1)}
        while True:
            keep = {f for f in found if any(g in found for g in (Word(tuple(f[1:]) + (0,)), Word(tuple(f[1:]) + (1,))))}
            if keep == found:
                break
            found = keep
        return FactorSet(L, found)

    def to_json(self) -> dict:
        return {
            "variant": "orbit_closure",
            "seq": self.seq.to_json(),
            "window": self.window,
            "L": self.L,
            "start": self.start,
        }


def subshift_from_json(doc: dict) -> SubshiftSpec:
    kind = doc.get("variant")
    if kind == "periodic_orbit":
        return PeriodicOrbit(doc["word"])
    if kind == "factor_set":
        return FactorSet(doc["L"], doc["factors"])
    if kind == "orbit_closure":
        return OrbitClosureApprox(sequence_from_json(doc["seq"]), doc["window"], doc["L"], doc.get("start", 0))
    raise ValueError(f"unknown subshift variant {kind!r}")
