"""Input validation helpers shared by the estimators and the CLI."""
from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .measures import MeasureSpec, measure_from_json
from .symbolic import SubshiftSpec, subshift_from_json
from .weights import WeightFunction, weight_from_json

__all__ = ["check_word_matrix", "check_weights", "check_measure", "check_subshift", "check_positive_int"]


def check_word_matrix(X, min_length: int = 1) -> np.ndarray:
    """Validate a 2-D array of equal-length binary words (one per row).

    Strings are accepted and split into symbols.
    """
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], str):
        lengths = {len(s) for s in X}
        if len(lengths) != 1:
            raise ValueError("all words must have the same length")
        if any(set(s) - {"0", "1"} for s in X):
            raise ValueError("words must be binary strings")
        X = [[int(c) for c in s] for s in X]
    arr = check_array(X, dtype=np.int64, ensure_min_features=min_length)
    if arr.size and (arr.min() < 0 or arr.max() > 1):
        raise ValueError("symbols must be 0 or 1")
    return arr.astype(np.int8)


def check_weights(weights, precision: str = "auto") -> WeightFunction:
    if isinstance(weights, WeightFunction):
        return weights
    if isinstance(weights, dict):
        return weight_from_json(weights, precision)
    raise TypeError(f"expected a WeightFunction or a JSON dict, got {type(weights).__name__}")


def check_measure(measure, precision: str = "auto") -> MeasureSpec:
    if isinstance(measure, MeasureSpec):
        return measure
    if isinstance(measure, dict):
        return measure_from_json(measure, precision)
    raise TypeError(f"expected a MeasureSpec or a JSON dict, got {type(measure).__name__}")


def check_subshift(subshift) -> SubshiftSpec:
    if isinstance(subshift, SubshiftSpec):
        return subshift
    if isinstance(subshift, dict):
        return subshift_from_json(subshift)
    raise TypeError(f"expected a SubshiftSpec or a JSON dict, got {type(subshift).__name__}")


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return int(value)
