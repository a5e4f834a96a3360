"""Master hashing and derived hash streams.

Every key is hashed exactly once into a 128-bit master code (keyed
blake2b).  All later computation -- bucket assignment, the 1-bit subset
split, and the per-leaf hash values -- is derived from that code alone,
so it is independent of the input distribution.

Derivation is deliberately split across the two halves of the code:
bucket indices consume ``hi``, leaf hash values consume ``lo`` (remixed
with the seed), and the subset bit is the top bit of ``lo``.  The exact
mixing constants are part of the serialization format and must not
change within a format version.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, NamedTuple

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF

# SplitMix64 constants (Steele/Lea/Flood).
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_C1 = 0xBF58476D1CE4E5B9
_MIX_C2 = 0x94D049BB133111EB


class MasterHash(NamedTuple):
    """128-bit master hash code of one key."""

    hi: int
    lo: int


def splitmix64(x: int) -> int:
    """One SplitMix64 step: increment by the golden ratio, then finalize."""
    z = (x + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * _MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_C2) & MASK64
    return z ^ (z >> 31)


def mix64(x: int) -> int:
    """SplitMix64 finalizer (multiply-xor-shift rounds, no increment)."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * _MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX_C2) & MASK64
    return z ^ (z >> 31)


def mulhi64(x: int, r: int) -> int:
    """Map a 64-bit value into [0, r) by taking the high word of x*r.

    Unbiased up to O(r / 2^64), unlike plain modulo.
    """
    return ((x & MASK64) * r) >> 64


def master_hash(key_bytes: bytes, global_seed: int) -> MasterHash:
    """Hash raw key bytes into a 128-bit master code.

    Keyed blake2b; changing ``global_seed`` rehashes everything.
    """
    digest = hashlib.blake2b(
        key_bytes,
        digest_size=16,
        key=(global_seed & MASK64).to_bytes(8, "little"),
    ).digest()
    return MasterHash(
        hi=int.from_bytes(digest[:8], "little"),
        lo=int.from_bytes(digest[8:], "little"),
    )


def master_hash_many(keys: Iterable[bytes], global_seed: int):
    """Master-hash a batch of keys into (hi, lo) uint64 arrays."""
    seed_key = (global_seed & MASK64).to_bytes(8, "little")
    blake2b = hashlib.blake2b
    digests = [
        blake2b(k, digest_size=16, key=seed_key).digest() for k in keys
    ]
    buf = np.frombuffer(b"".join(digests), dtype="<u8").reshape(-1, 2)
    # copies so the arrays own their data
    return np.ascontiguousarray(buf[:, 0]), np.ascontiguousarray(buf[:, 1])


def leaf_hash(m: MasterHash, seed: int, r: int) -> int:
    """Per-leaf hash value in [0, r), derived from lo and the seed."""
    if r < 1:
        raise ValueError("range must be >= 1")
    z = m.lo ^ splitmix64(seed)
    return mulhi64(mix64(z), r)


def subset_bit(m: MasterHash) -> int:
    """Constant 1-bit hash splitting a leaf's keys into two subsets.

    Fixed bit of the master code, independent of any leaf seed, so all
    candidate-generation engines agree on the split.
    """
    return (m.lo >> 63) & 1


def bucket_index(m: MasterHash, num_buckets: int) -> int:
    """Bucket assignment in [0, num_buckets), derived from hi only."""
    if num_buckets < 1:
        raise ValueError("num_buckets must be >= 1")
    return mulhi64(m.hi, num_buckets)
