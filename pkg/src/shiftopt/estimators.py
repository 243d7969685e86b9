"""scikit-learn style wrappers around the functional API.

Rows of ``X`` are binary words of a common length ``n``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .cocycle import log_norm
from .dbar import matching_distance
from .validation import check_positive_int, check_subshift, check_weights, check_word_matrix

__all__ = ["LogNormTransformer", "MatchingDistanceTransformer", "LyapunovRateEstimator"]


class LogNormTransformer(TransformerMixin, BaseEstimator):
    """Map each word ``x`` to ``log_norm(weights, x).lower / n``.

    Parameters
    ----------
    weights : WeightFunction or dict
        Weight function or its JSON document.
    k_window : int, default=0
        Half-width of the offset scan.
    k_center : int, default=0
        Centre of the offset scan.
    exact : bool, default=False
        Use the exact supremum when available (falls back to the scan).
    """

    def __init__(self, weights=None, k_window=0, k_center=0, exact=False):
        self.weights = weights
        self.k_window = k_window
        self.k_center = k_center
        self.exact = exact

    def fit(self, X, y=None):
        X = check_word_matrix(X)
        self.weights_ = check_weights(self.weights)
        check_positive_int(self.k_window, "k_window", minimum=0)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "weights_")
        X = check_word_matrix(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected words of length {self.n_features_in_}, got {X.shape[1]}")
        out = np.empty((X.shape[0], 1))
        for i, row in enumerate(X):
            b = log_norm(self.weights_, row, self.k_window, self.k_center)
            val = b.upper if (self.exact and b.upper is not None) else b.lower
            out[i, 0] = float(val) / X.shape[1]
        return out


class MatchingDistanceTransformer(TransformerMixin, BaseEstimator):
    """Map each word to its matching distance from a subshift.

    Parameters
    ----------
    subshift : SubshiftSpec or dict
    kind : {"dp", "exact"}, default="dp"
    """

    def __init__(self, subshift=None, kind="dp"):
        self.subshift = subshift
        self.kind = kind

    def fit(self, X, y=None):
        X = check_word_matrix(X)
        self.subshift_ = check_subshift(self.subshift)
        if self.kind not in ("dp", "exact"):
            raise ValueError("kind must be 'dp' or 'exact'")
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "subshift_")
        X = check_word_matrix(X)
        return np.array([[float(matching_distance(row, self.subshift_, self.kind))] for row in X])


class LyapunovRateEstimator(BaseEstimator):
    """Average normalized log-norm of sample words: a Monte-Carlo Lyapunov estimate.

    After ``fit``, ``rate_`` is the sample mean and ``stderr_`` its standard
    error.  ``predict`` returns per-word rates.

    Parameters
    ----------
    weights : WeightFunction or dict
    k_window : int, default=0
    """

    def __init__(self, weights=None, k_window=0):
        self.weights = weights
        self.k_window = k_window

    def fit(self, X, y=None):
        self.transformer_ = LogNormTransformer(self.weights, self.k_window).fit(X)
        rates = self.transformer_.transform(X)[:, 0]
        self.rate_ = float(rates.mean())
        self.stderr_ = float(rates.std(ddof=1) / np.sqrt(len(rates))) if len(rates) > 1 else 0.0
        self.n_features_in_ = self.transformer_.n_features_in_
        return self

    def predict(self, X):
        check_is_fitted(self, "transformer_")
        return self.transformer_.transform(X)[:, 0]

    def score(self, X, y=None):
        """Negative absolute deviation of the sample mean from ``rate_``."""
        return -abs(float(self.predict(X).mean()) - self.rate_)
