"""Shift-invariant probability measures on binary sequences.

Every measure answers cylinder queries ``mu([omega])``; most can also
draw words of a given length.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Optional

import numpy as np

from ._numeric import Number, number_from_json, number_to_json, to_number
from .symbolic import (
    GOLDEN,
    BiSequence,
    EndpointAmbiguityError,
    Sturmian,
    Word,
    _word,
    sequence_from_json,
)

__all__ = [
    "MeasureSpec",
    "PeriodicMeasure",
    "Bernoulli",
    "Markov",
    "SturmianMeasure",
    "Empirical",
    "cylinder_prob",
    "cylinder_masses",
    "sample_word",
    "measure_from_json",
    "all_words",
]


def all_words(L: int):
    """All ``2^L`` binary words of length ``L`` in lexicographic order."""
    for bits in itertools.product((0, 1), repeat=L):
        yield Word(bits)


class MeasureSpec:
    """Base class; subclasses implement :meth:`cylinder` and usually :meth:`sample`."""

    exact: bool = True

    def cylinder(self, omega: Word) -> Number:
        raise NotImplementedError

    def masses(self, L: int) -> dict:
        """``{word: mu([word])}`` over all words of length ``L`` (zeros included)."""
        return {w: self.cylinder(w) for w in all_words(L)}

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        raise ValueError(f"{type(self).__name__} does not support sampling")

    def to_json(self) -> dict:
        raise NotImplementedError


def _cyclic_counts(word: Word, L: int) -> dict:
    """Occurrences of every length-``L`` word in the cyclic word."""
    arr = word.as_array()
    p = len(arr)
    reps = -(-(L + p) // p)
    ext = np.tile(arr, reps)
    counts: dict = {}
    for i in range(p):
        key = Word(ext[i : i + L])
        counts[key] = counts.get(key, 0) + 1
    return counts


class PeriodicMeasure(MeasureSpec):
    """Uniform measure on the orbit of ``word^inf``."""

    def __init__(self, word):
        self.word = _word(word)

    def cylinder(self, omega) -> Fraction:
        omega = _word(omega)
        counts = _cyclic_counts(self.word, len(omega))
        return Fraction(counts.get(omega, 0), len(self.word))

    def masses(self, L: int) -> dict:
        counts = _cyclic_counts(self.word, L)
        p = len(self.word)
        return {w: Fraction(counts.get(w, 0), p) for w in all_words(L)}

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        arr = self.word.as_array()
        phase = int(rng.integers(len(arr)))
        idx = (np.arange(n) + phase) % len(arr)
        return arr[idx]

    def to_json(self) -> dict:
        return {"variant": "periodic_orbit", "word": str(self.word)}

    def __repr__(self) -> str:
        return f"PeriodicMeasure('{self.word}')"


class Bernoulli(MeasureSpec):
    """I.i.d. symbols with ``P(1) = p``."""

    def __init__(self, p, precision: str = "auto"):
        self.p = to_number(p, precision)
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")
        self.exact = isinstance(self.p, Fraction)

    def cylinder(self, omega) -> Number:
        omega = _word(omega)
        ones = omega.ones()
        return self.p**ones * (1 - self.p) ** (len(omega) - ones)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return (rng.random(n) < float(self.p)).astype(np.int8)

    def to_json(self) -> dict:
        return {"variant": "bernoulli", "p": number_to_json(self.p)}

    def __repr__(self) -> str:
        return f"Bernoulli({self.p})"


class Markov(MeasureSpec):
    """Stationary first-order Markov chain with transition matrix ``P``.

    ``pi`` defaults to the stationary vector of ``P``; a supplied ``pi`` must
    satisfy ``pi P = pi``.
    """

    def __init__(self, P, pi=None, precision: str = "auto"):
        self.P = [[to_number(P[a][b], precision) for b in (0, 1)] for a in (0, 1)]
        self.exact = all(isinstance(v, Fraction) for row in self.P for v in row)
        tol = 0 if self.exact else 1e-12
        for row in self.P:
            if min(row) < 0 or abs(row[0] + row[1] - 1) > tol:
                raise ValueError("P must be row-stochastic")
        p01, p10 = self.P[0][1], self.P[1][0]
        if pi is None:
            if p01 + p10 == 0:
                raise ValueError("P is the identity; pass pi explicitly")
            pi = [p10 / (p01 + p10), p01 / (p01 + p10)]
        self.pi = [to_number(v, precision) for v in pi]
        if not self.exact:
            self.P = [[float(v) for v in row] for row in self.P]
            self.pi = [float(v) for v in self.pi]
        else:
            self.exact = all(isinstance(v, Fraction) for v in self.pi)
        for b in (0, 1):
            lhs = self.pi[0] * self.P[0][b] + self.pi[1] * self.P[1][b]
            if abs(lhs - self.pi[b]) > (0 if self.exact else 1e-12):
                raise ValueError("pi is not stationary for P")
        if abs(self.pi[0] + self.pi[1] - 1) > (0 if self.exact else 1e-12):
            raise ValueError("pi must sum to 1")

    def cylinder(self, omega) -> Number:
        omega = _word(omega)
        prob = self.pi[omega[0]]
        for a, b in zip(omega, omega[1:]):
            prob = prob * self.P[a][b]
        return prob

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        u = rng.random(n)
        out = np.empty(n, dtype=np.int8)
        state = int(u[0] < float(self.pi[1]))
        out[0] = state
        stay1, go1 = float(self.P[1][1]), float(self.P[0][1])
        for i in range(1, n):
            state = int(u[i] < (stay1 if state else go1))
            out[i] = state
        return out

    def to_json(self) -> dict:
        return {
            "variant": "markov",
            "P": [[number_to_json(v) for v in row] for row in self.P],
            "pi": [number_to_json(v) for v in self.pi],
        }

    def __repr__(self) -> str:
        return f"Markov({self.P}, pi={self.pi})"


class SturmianMeasure(MeasureSpec):
    """The rotation-invariant coding measure of ``t -> t + gamma`` by ``[0, 1/2]``.

    Cylinder masses are computed from the arcs cut out by the points
    ``-i*gamma`` and ``1/2 - i*gamma`` in fixed point, so each mass is exact
    up to ``L * 2^-precision``.
    """

    exact = False

    def __init__(self, gamma=GOLDEN, precision: int = 128):
        self.gamma = gamma
        self.precision = int(precision)
        self._seq = Sturmian(gamma, precision=self.precision)
        self._cache: dict = {}

    @property
    def gamma_fixed(self) -> int:
        return self._seq.gamma_fixed

    def _arc_words(self, L: int) -> list:
        """``(length, word)`` for each arc between consecutive cut points, in circle order."""
        mod = 1 << self.precision
        half = mod >> 1
        G = self.gamma_fixed
        cuts = sorted({(-i * G) % mod for i in range(L)} | {(half - i * G) % mod for i in range(L)})
        arcs = []
        for idx, start in enumerate(cuts):
            end = cuts[idx + 1] if idx + 1 < len(cuts) else cuts[0] + mod
            if end == start:
                continue
            mid = (start + end) // 2
            # arcs never contain an endpoint in their interior, so the midpoint decides
            word = Word([1 if ((mid + i * G) % mod) <= half else 0 for i in range(L)])
            arcs.append((end - start, word))
        return arcs

    def masses(self, L: int) -> dict:
        if L not in self._cache:
            mod = 1 << self.precision
            out = {w: 0 for w in all_words(L)}
            for length, word in self._arc_words(L):
                out[word] += length
            self._cache[L] = {w: v / mod for w, v in out.items()}
        return self._cache[L]

    def cylinder(self, omega) -> float:
        omega = _word(omega)
        return self.masses(len(omega))[omega]

    def arc_count(self, omega) -> int:
        """Number of maximal circle arcs whose union is ``[omega]``."""
        omega = _word(omega)
        inside = [w == omega for _, w in self._arc_words(len(omega))]
        if all(inside):
            return 1
        return sum(1 for i, flag in enumerate(inside) if flag and not inside[i - 1])

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        bits = self.precision
        for _ in range(64):
            hi = int(rng.integers(0, 1 << 62))
            lo = int(rng.integers(0, 1 << 62))
            phase = ((hi << 62) | lo) % (1 << bits)
            try:
                return Sturmian.from_fixed(self.gamma_fixed, phase, 0, bits).array(0, n)
            except EndpointAmbiguityError:  # pragma: no cover - probability ~ n 2^-120
                continue
        raise EndpointAmbiguityError("could not draw a phase away from the endpoints")  # pragma: no cover

    def to_json(self) -> dict:
        doc = {"variant": "sturmian", "precision": self.precision}
        doc["gamma"] = self.gamma if isinstance(self.gamma, str) else number_to_json(to_number(self.gamma))
        return doc

    def __repr__(self) -> str:
        return f"SturmianMeasure({self.gamma!r})"


class Empirical(MeasureSpec):
    """Cyclic empirical measure of the window ``seq_a .. seq_{a+n-1}``.

    Frequencies are counted around the window closed into a cycle, which
    makes the result an honest shift-invariant (periodic-orbit) measure.
    """

    def __init__(self, seq: BiSequence, a: int, n: int):
        if n < 1:
            raise ValueError("window length must be positive")
        self.seq, self.a, self.n = seq, int(a), int(n)
        self._word: Optional[Word] = None

    def window_array(self) -> np.ndarray:
        return self.seq.array(self.a, self.n)

    def as_periodic(self) -> PeriodicMeasure:
        if self._word is None:
            self._word = Word(self.window_array())
        return PeriodicMeasure(self._word)

    def cylinder(self, omega) -> Fraction:
        omega = _word(omega)
        arr = self.window_array()
        L = len(omega)
        ext = np.concatenate([arr, np.resize(arr, L - 1)]) if L > 1 else arr
        hits = np.ones(self.n, dtype=bool)
        for t, s in enumerate(omega):
            hits &= ext[t : t + self.n] == s
        return Fraction(int(hits.sum()), self.n)

    def masses(self, L: int) -> dict:
        return self.as_periodic().masses(L)

    def ones_frequency(self) -> Fraction:
        return Fraction(int(self.window_array().sum()), self.n)

    def to_json(self) -> dict:
        return {"variant": "empirical", "seq": self.seq.to_json(), "a": self.a, "n": self.n}

    def __repr__(self) -> str:
        return f"Empirical({self.seq!r}, a={self.a}, n={self.n})"


def cylinder_prob(mu: MeasureSpec, omega) -> Number:
    """``mu([omega])``."""
    return mu.cylinder(_word(omega))


def cylinder_masses(mu: MeasureSpec, L: int) -> dict:
    if L < 1:
        raise ValueError("L must be positive")
    return mu.masses(L)


def sample_word(mu: MeasureSpec, n: int, rng_seed: int) -> Word:
    """Draw a length-``n`` word from ``mu``; deterministic given ``rng_seed``."""
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(mu, Empirical):
        raise ValueError("Empirical measures are read from their window, not sampled")
    rng = np.random.default_rng(rng_seed)
    return Word(mu.sample(n, rng))


def measure_from_json(doc: dict, precision: str = "auto") -> MeasureSpec:
    kind = doc.get("variant")
    if kind == "periodic_orbit":
        return PeriodicMeasure(doc["word"])
    if kind == "bernoulli":
        return Bernoulli(number_from_json(doc["p"], precision), precision)
    if kind == "markov":
        return Markov(doc["P"], doc.get("pi"), precision)
    if kind == "sturmian":
        return SturmianMeasure(doc.get("gamma", GOLDEN), int(doc.get("precision", 128)))
    if kind == "empirical":
        return Empirical(sequence_from_json(doc["seq"]), doc["a"], doc["n"])
    raise ValueError(f"unknown measure variant {kind!r}")
