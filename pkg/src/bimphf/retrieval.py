"""Static 1-bit retrieval structure.

Stores one bit per key with no key material kept at query time.  Each
key selects three positions in a bit table; its value is the XOR of
those three bits.  Construction solves the resulting linear system by
hypergraph peeling: repeatedly remove a position touched by exactly one
key, then assign bits in reverse removal order.

Peeling succeeds with high probability when the table has at least
1.23 bits per key.  On failure the seed is bumped; after several seeds
the table is grown by 5% and the seed retries start over.
"""

from __future__ import annotations

import struct

import numpy as np

from . import _kernels
from .hashing import MasterHash

OVERHEAD = 1.23
SEED_TRIES = 16
GROWTH_ROUNDS = 10


class RetrievalBuildError(RuntimeError):
    """Peeling failed for every seed/size combination tried."""


def table_size(n: int) -> int:
    """Initial table size in bits for n keys.

    Rounded up to a multiple of 3: the table is split into three equal
    segments and each key draws one position per segment, so the three
    positions of a key are always distinct.
    """
    m = int(np.ceil(OVERHEAD * n)) + 3
    return ((m + 2) // 3) * 3


class Retrieval:
    """Immutable 1-bit retrieval structure over a fixed key set."""

    def __init__(self, m: int, seed: int, table: np.ndarray):
        self.m = int(m)
        self.seed = int(seed)
        self.table = np.ascontiguousarray(table, dtype=np.uint64)

    @classmethod
    def build(cls, his, los, values) -> "Retrieval":
        his = np.ascontiguousarray(his, dtype=np.uint64)
        los = np.ascontiguousarray(los, dtype=np.uint64)
        values = np.ascontiguousarray(values, dtype=np.uint8)
        n = his.size
        if los.size != n or values.size != n:
            raise ValueError("his/los/values must have equal length")
        m = table_size(n)
        for _ in range(GROWTH_ROUNDS):
            if m // 3 >= 2**32:
                raise RetrievalBuildError("table segment exceeds 32 bits")
            deg = np.empty(m, np.int64)
            xsum = np.empty(m, np.int64)
            pstack = np.empty(m, np.int64)
            order_e = np.empty(max(n, 1), np.int64)
            order_p = np.empty(max(n, 1), np.int64)
            table = np.zeros((m + 63) // 64, np.uint64)
            for seed in range(SEED_TRIES):
                table[:] = 0
                ok = _kernels.retrieval_build(
                    his, los, values, np.uint64(seed), np.uint64(m),
                    deg, xsum, pstack, order_e, order_p, table)
                if ok:
                    return cls(m=m, seed=seed, table=table)
            m += max(3, m // 20)
            m = ((m + 2) // 3) * 3
        raise RetrievalBuildError(
            f"peeling failed for {n} keys up to table size {m}")

    def query(self, m_hash: MasterHash) -> int:
        return int(self.query_many(
            np.array([m_hash.hi], np.uint64),
            np.array([m_hash.lo], np.uint64))[0])

    def query_many(self, his, los) -> np.ndarray:
        his = np.ascontiguousarray(his, dtype=np.uint64)
        los = np.ascontiguousarray(los, dtype=np.uint64)
        out = np.empty(his.size, np.uint8)
        _kernels.retrieval_query_many(
            his, los, np.uint64(self.seed), np.uint64(self.m),
            self.table, out)
        return out

    @property
    def num_bits(self) -> int:
        """Table size in bits (the space cost, excluding the header)."""
        return self.m

    def to_bytes(self) -> bytes:
        nbytes = (self.m + 7) // 8
        raw = self.table.tobytes()[:nbytes]
        return struct.pack("<QQ", self.m, self.seed) + raw

    @classmethod
    def from_bytes(cls, data: bytes) -> "Retrieval":
        if len(data) < 16:
            raise ValueError("retrieval blob too short")
        m, seed = struct.unpack_from("<QQ", data, 0)
        nbytes = (m + 7) // 8
        raw = data[16:16 + nbytes]
        if len(raw) != nbytes:
            raise ValueError("retrieval blob truncated")
        nwords = (m + 63) // 64
        padded = raw + b"\0" * (nwords * 8 - nbytes)
        table = np.frombuffer(padded, dtype=np.uint64).copy()
        return cls(m=m, seed=seed, table=table)

    @property
    def serialized_size(self) -> int:
        return 16 + (self.m + 7) // 8
