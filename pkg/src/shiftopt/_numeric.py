"""Scalar conventions shared by every module.

Rational inputs (ints, Fractions, decimal strings) stay exact as
:class:`fractions.Fraction`; Python floats select the floating path.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import numpy as np

Number = Union[Fraction, float]

#: slack used when comparing values produced on the floating path
FLOAT_SLACK = 1e-12


def to_number(value, precision: str = "auto") -> Number:
    """Coerce *value* to a Fraction (exact) or float.

    ``precision="float"`` forces floats; ``"rational"`` refuses floats that
    are not exactly representable as given (it converts them exactly).
    """
    if isinstance(value, (bool, np.bool_)):
        value = int(value)
    if isinstance(value, np.integer):
        value = int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, str):
        value = Fraction(value.strip())
    if isinstance(value, int):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return float(value) if precision == "float" else value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite weight value {value!r}")
        if precision == "rational":
            return Fraction(value)
        return value
    raise TypeError(f"cannot interpret {value!r} as a number")


def is_exact(value) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def number_to_json(value):
    """Fractions become ``"p/q"`` strings so that round trips are bit-exact."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return float(value)


def number_from_json(value, precision: str = "auto") -> Number:
    return to_number(value, precision)


def as_float(value) -> float:
    return float(value)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * int(v) // math.gcd(out, int(v))
    return out


def common_denominator(values) -> int:
    return lcm_all(Fraction(v).denominator for v in values)
