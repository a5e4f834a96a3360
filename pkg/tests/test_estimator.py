"""Transformer facade: sklearn API conventions."""

from __future__ import annotations

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from bimphf.estimator import MinimalPerfectHash


def test_fit_transform_bijection():
    keys = [f"key-{i}" for i in range(1000)]
    est = MinimalPerfectHash(leaf_size=16)
    pos = est.fit_transform(keys)
    assert sorted(pos.tolist()) == list(range(1000))


def test_transform_matches_fit_set():
    keys = [f"item{i}".encode() for i in range(300)]
    est = MinimalPerfectHash().fit(keys)
    a = est.transform(keys)
    b = est.transform(keys)
    assert np.array_equal(a, b)
    assert sorted(a.tolist()) == list(range(300))


def test_get_set_params_round_trip():
    est = MinimalPerfectHash(leaf_size=8, engine="rotation")
    params = est.get_params()
    assert params["leaf_size"] == 8
    assert params["engine"] == "rotation"
    est2 = clone(est)
    assert est2.get_params() == params


def test_unfitted_transform_raises():
    with pytest.raises(NotFittedError):
        MinimalPerfectHash().transform(["x"])


def test_rejects_single_key_input():
    with pytest.raises(ValueError):
        MinimalPerfectHash().fit("just one string")
    with pytest.raises(ValueError):
        MinimalPerfectHash().fit([1, 2, 3])


def test_column_input_accepted():
    keys = [[f"k{i}"] for i in range(64)]
    est = MinimalPerfectHash(leaf_size=8).fit(keys)
    pos = est.transform(keys)
    assert sorted(pos.tolist()) == list(range(64))


def test_transform_empty():
    est = MinimalPerfectHash(leaf_size=8).fit([f"k{i}" for i in range(32)])
    assert est.transform([]).size == 0


def test_invalid_params_error_at_fit():
    est = MinimalPerfectHash(leaf_size=1)
    with pytest.raises(ValueError):
        est.fit(["a", "b"])
