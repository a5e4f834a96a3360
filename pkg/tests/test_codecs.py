"""Bit streams, Elias-Fano sequences, and Golomb-Rice coding."""

from __future__ import annotations

import numpy as np
import pytest

from bimphf.codecs import (BitReader, BitWriter, EliasFano, RiceCodec,
                           rice_parameter)


def test_bit_stream_round_trip(nprng):
    w = BitWriter()
    fields = []
    for _ in range(3000):
        nb = int(nprng.integers(0, 64))
        v = int(nprng.integers(0, 2**nb)) if nb else 0
        fields.append((v, nb))
        w.write(v, nb)
    r = BitReader(w.getvalue())
    for v, nb in fields:
        assert r.read(nb) == v


def test_bit_writer_rejects_overwide_values():
    w = BitWriter()
    with pytest.raises(ValueError):
        w.write(4, 2)
    with pytest.raises(ValueError):
        w.write(-1, 8)


def test_unary_round_trip():
    w = BitWriter()
    qs = [0, 1, 7, 31, 32, 33, 100, 0, 5]
    for q in qs:
        w.write_unary(q)
    r = BitReader(w.getvalue())
    for q in qs:
        assert r.read_unary() == q


def test_bit_reader_exhaustion():
    r = BitReader(b"\xff")
    r.read(8)
    with pytest.raises(ValueError):
        r.read(1)


def test_elias_fano_empty():
    ef = EliasFano(np.zeros(0, np.uint64))
    assert len(ef) == 0
    assert ef.decode_all().size == 0
    assert np.array_equal(
        EliasFano.from_bytes(ef.to_bytes()).decode_all(),
        ef.decode_all())


@pytest.mark.parametrize("n", [1, 2, 100, 5000])
def test_elias_fano_round_trip(n, nprng):
    vals = np.sort(nprng.integers(0, 50 * n, n).astype(np.uint64))
    ef = EliasFano(vals)
    assert np.array_equal(ef.decode_all(), vals)
    for i in nprng.integers(0, n, min(n, 100)):
        assert ef[int(i)] == int(vals[int(i)])
    blob = ef.to_bytes()
    ef2 = EliasFano.from_bytes(blob)
    assert np.array_equal(ef2.decode_all(), vals)
    assert ef2.to_bytes() == blob


def test_elias_fano_with_repeats():
    vals = np.array([0, 0, 0, 5, 5, 9, 9, 9, 9], np.uint64)
    ef = EliasFano(vals)
    assert np.array_equal(ef.decode_all(), vals)
    assert [ef[i] for i in range(len(vals))] == vals.tolist()


def test_elias_fano_rejects_decreasing():
    with pytest.raises(ValueError):
        EliasFano(np.array([3, 2], np.uint64))


def test_elias_fano_index_errors():
    ef = EliasFano(np.array([1, 4], np.uint64))
    with pytest.raises(IndexError):
        ef[2]
    with pytest.raises(IndexError):
        ef[-1]


def test_elias_fano_space(nprng):
    # prefix sums of Poisson(32) sizes: ~2 + log2(mean gap) bits/elem
    sizes = nprng.poisson(32, 10000)
    offs = np.concatenate([[0], np.cumsum(sizes)]).astype(np.uint64)
    ef = EliasFano(offs)
    assert ef.num_bits / len(offs) < 2 + np.log2(32) + 1


def test_rice_round_trip(nprng):
    vals = nprng.geometric(0.02, 3000).astype(np.uint64)
    b = rice_parameter(vals)
    codec = RiceCodec(b)
    enc = codec.encode(vals)
    assert np.array_equal(codec.decode(enc, vals.size), vals)
    assert codec.encoded_bits(vals) <= 8 * len(enc)


def test_rice_parameter_formula():
    assert rice_parameter(np.zeros(0, np.uint64)) == 0
    assert rice_parameter(np.array([0, 0], np.uint64)) == 0
    # mean 7 -> floor(log2(8)) = 3
    assert rice_parameter(np.full(10, 7, np.uint64)) == 3


def test_rice_zero_parameter():
    codec = RiceCodec(0)
    vals = np.array([0, 1, 2, 10], np.uint64)
    assert np.array_equal(codec.decode(codec.encode(vals), 4), vals)


def test_rice_parameter_bounds():
    with pytest.raises(ValueError):
        RiceCodec(-1)
    with pytest.raises(ValueError):
        RiceCodec(59)
