"""Shared helpers for the test suite."""

from __future__ import annotations

import random

import numpy as np
import pytest

from bimphf.hashing import MasterHash


def random_master_hashes(n, rng):
    """n random 128-bit master hash codes."""
    return [MasterHash(rng.getrandbits(64), rng.getrandbits(64))
            for _ in range(n)]


def random_keys(n, rng, min_len=10, max_len=50):
    """Distinct random byte strings without zero bytes."""
    seen = set()
    keys = []
    while len(keys) < n:
        ln = rng.randint(min_len, max_len)
        k = bytes(rng.randint(1, 255) for _ in range(ln))
        if k not in seen:
            seen.add(k)
            keys.append(k)
    return keys


@pytest.fixture
def rng():
    return random.Random(0xB1B0)


@pytest.fixture
def nprng():
    return np.random.default_rng(0xB1B0)
