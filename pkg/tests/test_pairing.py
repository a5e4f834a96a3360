"""Pairing function identities, order properties, and error paths."""

from __future__ import annotations

import pytest

from bimphf.pairing import (MAX_COORD, PairingError, pair_c, pair_s, pair_t,
                            unpair_c, unpair_s, unpair_t)


def test_pair_t_known_values():
    assert pair_t(1, 0) == 0
    assert pair_t(3, 1) == 4


def test_pair_t_domain_errors():
    with pytest.raises(PairingError):
        pair_t(2, 2)
    with pytest.raises(PairingError):
        pair_t(1, 2)
    with pytest.raises(PairingError):
        pair_t(-1, -2)
    with pytest.raises(PairingError):
        pair_t(MAX_COORD + 1, 0)


def test_pair_s_known_values():
    assert pair_s(0, 0) == 0
    assert pair_s(1, 2) == 5
    assert pair_s(2, 1) == 7


def test_pair_c_known_values():
    assert pair_c(0, 0) == 0
    assert pair_c(1, 2) == 8


def test_unpair_known_values():
    assert unpair_t(0) == (1, 0)
    assert unpair_t(4) == (3, 1)
    assert unpair_s(5) == (1, 2)
    assert unpair_s(7) == (2, 1)
    assert unpair_c(8) == (1, 2)


def test_negative_codes_rejected():
    for f in (unpair_t, unpair_s, unpair_c):
        with pytest.raises(PairingError):
            f(-1)


def test_pair_t_enumeration_order():
    # increasing x then increasing y visits codes 0, 1, 2, ...
    z = 0
    for x in range(1, 200):
        for y in range(x):
            assert pair_t(x, y) == z
            z += 1


def test_szudzik_shell_property():
    # all of [k] x [k] codes before any pair with a coordinate >= k
    for k in range(1, 40):
        inner_max = max(pair_s(x, y) for x in range(k) for y in range(k))
        assert inner_max == pair_s(k - 1, k - 1)
        outer_min = min(pair_s(k, y) for y in range(k + 1))
        outer_min = min(outer_min, min(pair_s(x, k) for x in range(k + 1)))
        assert inner_max < outer_min


def test_szudzik_max_coordinate_nondecreasing():
    prev = -1
    for z in range(5000):
        x, y = unpair_s(z)
        m = max(x, y)
        assert m >= prev
        prev = m


def test_round_trip_forward_large_coords():
    for x in (MAX_COORD, MAX_COORD - 1, 2**20 + 3):
        for y in (0, 1, x - 1):
            assert unpair_t(pair_t(x, y)) == (x, y)
            assert unpair_s(pair_s(x, y)) == (x, y)
            assert unpair_c(pair_c(x, y)) == (x, y)
