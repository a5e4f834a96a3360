"""Scikit-learn style facade over the index builder.

``MinimalPerfectHash`` is a transformer: ``fit`` builds the index over
a key set, ``transform`` maps keys to their positions in [0, n).  It
exists so the library drops into sklearn pipelines (e.g. as a
categorical encoder stage); all real work happens in :mod:`bimphf.mphf`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .mphf import BuildConfig, build


def _key_list(X):
    if isinstance(X, (bytes, str)):
        raise ValueError("X must be a sequence of keys, not a single key")
    if isinstance(X, np.ndarray):
        X = X.tolist()
    keys = []
    for k in X:
        if isinstance(k, (list, tuple)) and len(k) == 1:
            k = k[0]  # 2-D column input, sklearn-style
        if not isinstance(k, (bytes, str)):
            raise ValueError(f"keys must be bytes or str, got {type(k)}")
        keys.append(k)
    return keys


class MinimalPerfectHash(BaseEstimator, TransformerMixin):
    """Map a fixed set of byte/string keys bijectively onto [0, n).

    Parameters mirror :class:`bimphf.mphf.BuildConfig`.  ``transform``
    on keys outside the fitted set returns arbitrary in-range values;
    use ``strict=True`` checks downstream if that matters.
    """

    def __init__(self, leaf_size=32, engine="quadsplit", global_seed=0,
                 compact=True):
        self.leaf_size = leaf_size
        self.engine = engine
        self.global_seed = global_seed
        self.compact = compact

    def fit(self, X, y=None):
        keys = _key_list(X)
        cfg = BuildConfig(
            leaf_size=self.leaf_size, engine=self.engine,
            global_seed=self.global_seed, compact=self.compact)
        self.index_ = build(keys, cfg)
        self.n_keys_ = self.index_.n_keys
        return self

    def transform(self, X) -> np.ndarray:
        if not hasattr(self, "index_"):
            raise NotFittedError(
                "This MinimalPerfectHash instance is not fitted yet.")
        keys = _key_list(X)
        if not keys:
            return np.zeros(0, np.int64)
        return self.index_.query_many(keys)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)
