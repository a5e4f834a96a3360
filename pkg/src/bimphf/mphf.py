"""Bucketed minimal perfect hash function over arbitrary key sets.

Keys are master-hashed once, distributed into ~N/leaf_size buckets, and
each bucket is solved by the leaf seed-pair search.  The index stores,
per bucket, one variable-length seed-pair code; globally, one 1-bit
retrieval structure holding every key's candidate-choice bit and an
Elias-Fano sequence of bucket offsets.

The serialized format ("BSH1") is the module's public contract: all
integers little-endian, every variable block length-prefixed, and a
trailing 64-bit checksum over everything before it.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .codecs import EliasFano, RiceCodec, rice_parameter
from .hashing import MasterHash, master_hash, master_hash_many, splitmix64
from .leafsearch import ENGINES, LeafConfig, SearchFailure, find_seed
from .pairing import unpair_s, unpair_t
from .retrieval import Retrieval, RetrievalBuildError

FORMAT_MAGIC = b"BSH1"
FORMAT_VERSION = 1

MAX_BUCKET = 128          # leaf search hard limit
MAX_REBUILDS = 16         # global-seed bumps before giving up

_HEADER = struct.Struct("<4sHHBBQQQ")   # magic, ver, leaf, engine, compact,
                                        # N, num_buckets, global_seed


class DuplicateKeyError(ValueError):
    """Two input keys share a master hash (usually: equal keys)."""


class BuildError(RuntimeError):
    """Construction failed after all global-seed retries."""


class FormatError(ValueError):
    """Serialized index is malformed, truncated, or corrupt."""


@dataclass(frozen=True)
class BuildConfig:
    leaf_size: int = 32
    engine: str = "quadsplit"
    global_seed: int = 0
    compact: bool = True

    def __post_init__(self):
        if not 2 <= self.leaf_size <= 64:
            raise ValueError(
                f"leaf_size must be in 2..64, got {self.leaf_size}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if not 0 <= self.global_seed < 2**64:
            raise ValueError("global_seed must fit in 64 bits")


def _as_bytes(key) -> bytes:
    if isinstance(key, bytes):
        return key
    if isinstance(key, str):
        return key.encode("utf-8")
    return bytes(key)


def _bucket_of(his: np.ndarray, num_buckets: int) -> np.ndarray:
    """Vectorized mulhi64(hi, num_buckets) for num_buckets < 2**32."""
    nb = np.uint64(num_buckets)
    a = his >> np.uint64(32)
    b = his & np.uint64(0xFFFFFFFF)
    return (a * nb + ((b * nb) >> np.uint64(32))) >> np.uint64(32)


class MphfIndex:
    """Immutable built index; see :func:`build`."""

    def __init__(self, n_keys, num_buckets, leaf_size, engine, global_seed,
                 compact, offsets, zs, retrieval):
        self.n_keys = int(n_keys)
        self.num_buckets = int(num_buckets)
        self.leaf_size = int(leaf_size)
        self.engine = engine
        self.global_seed = int(global_seed)
        self.compact = bool(compact)
        self.offsets = offsets          # EliasFano, num_buckets + 1 entries
        self.zs = np.ascontiguousarray(zs, dtype=np.uint64)
        self.retrieval = retrieval
        self._query_tables = None

    # -- query ---------------------------------------------------------

    def _decode_bucket(self, b: int, k: int):
        """Per-bucket query parameters: seeds and rotation per side."""
        if k == 0:
            return (0, 0, 0), (0, 0, 0)
        z = int(self.zs[b])
        if k == 1:
            return (0, 0, 0), (0, 0, 0)
        c0, c1 = unpair_t(z)  # larger first: the unshifted (bit-0) side
        engine = self.engine if k >= 4 else "basic"
        half = (k + 1) // 2
        sides = []
        for c in (c0, c1):
            if engine == "basic":
                sm = splitmix64(c)
                sides.append((sm, sm, 0))
            elif engine == "rotation":
                s, r = divmod(c, half)
                sm = splitmix64(s)
                sides.append((sm, sm, r))
            else:
                s_a, s_b = unpair_s(c)
                sides.append((splitmix64(s_a), splitmix64(s_b), 0))
        return sides[0], sides[1]

    def _tables(self):
        if self._query_tables is None:
            nb = self.num_buckets
            offs = self.offsets.decode_all().astype(np.int64)
            sm0a = np.empty(nb, np.uint64)
            sm0b = np.empty(nb, np.uint64)
            rot0 = np.empty(nb, np.uint64)
            sm1a = np.empty(nb, np.uint64)
            sm1b = np.empty(nb, np.uint64)
            rot1 = np.empty(nb, np.uint64)
            for b in range(nb):
                k = int(offs[b + 1] - offs[b])
                side0, side1 = self._decode_bucket(b, k)
                sm0a[b], sm0b[b], rot0[b] = side0
                sm1a[b], sm1b[b], rot1[b] = side1
            self._query_tables = (offs, sm0a, sm0b, rot0, sm1a, sm1b, rot1)
        return self._query_tables

    def query_many(self, keys) -> np.ndarray:
        """Positions of a batch of keys; a bijection for the build set."""
        if self.n_keys == 0:
            raise ValueError("cannot query an empty index")
        his, los = master_hash_many(
            [_as_bytes(k) for k in keys], self.global_seed)
        return self.query_hashes(his, los)

    def query_hashes(self, his, los) -> np.ndarray:
        """Query pre-hashed keys (timing harness entry point)."""
        offs, sm0a, sm0b, rot0, sm1a, sm1b, rot1 = self._tables()
        out = np.empty(his.size, np.int64)
        _kernels.mphf_query_many(
            his, los, np.uint64(self.num_buckets), offs,
            sm0a, sm0b, rot0, sm1a, sm1b, rot1,
            np.uint64(self.retrieval.seed), np.uint64(self.retrieval.m),
            self.retrieval.table, out)
        return out

    def query(self, key) -> int:
        return int(self.query_many([key])[0])

    # -- serialization -------------------------------------------------

    def serialize(self) -> bytes:
        engine_idx = ENGINES.index(self.engine)
        header = _HEADER.pack(
            FORMAT_MAGIC, FORMAT_VERSION, self.leaf_size, engine_idx,
            int(self.compact), self.n_keys, self.num_buckets,
            self.global_seed)
        ef_block = self.offsets.to_bytes()
        if self.compact:
            b = rice_parameter(self.zs)
            codec = RiceCodec(b)
            z_block = bytes([b]) + codec.encode(self.zs)
        else:
            z_block = self.zs.astype("<u8").tobytes()
        r_block = self.retrieval.to_bytes()
        body = header
        for block in (ef_block, z_block, r_block):
            body += struct.pack("<Q", len(block)) + block
        checksum = int.from_bytes(
            hashlib.blake2b(body, digest_size=8).digest(), "little")
        return body + struct.pack("<Q", checksum)

    @classmethod
    def deserialize(cls, data: bytes) -> "MphfIndex":
        if len(data) < _HEADER.size + 8:
            raise FormatError("index blob too short")
        body, (checksum,) = data[:-8], struct.unpack("<Q", data[-8:])
        expect = int.from_bytes(
            hashlib.blake2b(body, digest_size=8).digest(), "little")
        if checksum != expect:
            raise FormatError("checksum mismatch")
        magic, ver, leaf_size, engine_idx, compact, n_keys, nb, seed = \
            _HEADER.unpack_from(body, 0)
        if magic != FORMAT_MAGIC:
            raise FormatError(f"bad magic {magic!r}")
        if ver != FORMAT_VERSION:
            raise FormatError(f"unsupported format version {ver}")
        if engine_idx >= len(ENGINES):
            raise FormatError(f"unknown engine id {engine_idx}")
        pos = _HEADER.size
        blocks = []
        for _ in range(3):
            if pos + 8 > len(body):
                raise FormatError("truncated block table")
            (blen,) = struct.unpack_from("<Q", body, pos)
            pos += 8
            if pos + blen > len(body):
                raise FormatError("truncated block")
            blocks.append(body[pos:pos + blen])
            pos += blen
        if pos != len(body):
            raise FormatError("trailing bytes after last block")
        ef_block, z_block, r_block = blocks
        offsets = EliasFano.from_bytes(ef_block)
        if len(offsets) != nb + 1:
            raise FormatError("offset count does not match bucket count")
        if compact:
            if not z_block:
                raise FormatError("empty leaf-code block")
            codec = RiceCodec(z_block[0])
            zs = codec.decode(z_block[1:], nb)
        else:
            if len(z_block) != 8 * nb:
                raise FormatError("leaf-code block has wrong length")
            zs = np.frombuffer(z_block, dtype="<u8").copy()
        retrieval = Retrieval.from_bytes(r_block)
        return cls(n_keys=n_keys, num_buckets=nb, leaf_size=leaf_size,
                   engine=ENGINES[engine_idx], global_seed=seed,
                   compact=bool(compact), offsets=offsets, zs=zs,
                   retrieval=retrieval)

    # -- reporting -----------------------------------------------------

    def space_report(self) -> dict:
        """Exact bit counts by component; total normalized per key."""
        if self.compact:
            codec = RiceCodec(rice_parameter(self.zs))
            seed_bits = codec.encoded_bits(self.zs)
        else:
            seed_bits = 64 * self.num_buckets
        retrieval_bits = self.retrieval.num_bits
        offset_bits = self.offsets.num_bits
        total_bits = 8 * len(self.serialize())
        metadata_bits = total_bits - seed_bits - retrieval_bits - offset_bits
        n = max(self.n_keys, 1)
        return {
            "seed_bits": int(seed_bits),
            "retrieval_bits": int(retrieval_bits),
            "offset_bits": int(offset_bits),
            "metadata_bits": int(metadata_bits),
            "total_bits_per_key": round(total_bits / n, 3),
        }


def _attempt_build(his, los, order, bucket_sorted, sizes, cfg: BuildConfig,
                   seed: int, stats_out: dict | None):
    """One construction pass at a fixed global seed; may raise."""
    n = his.size
    nb = sizes.size
    offs = np.zeros(nb + 1, np.int64)
    np.cumsum(sizes, out=offs[1:])
    zs = np.zeros(nb, np.uint64)
    all_bits = np.zeros(n, np.uint8)
    his_s = his[order]
    los_s = los[order]
    total_stats = {"seeds_scanned": 0, "pairs_considered": 0,
                   "orientability_tests": 0}
    for b in range(nb):
        lo_off, hi_off = int(offs[b]), int(offs[b + 1])
        k = hi_off - lo_off
        if k == 0:
            continue
        if k == 1:
            continue  # z stays 0, bit stays 0; both sides evaluate to 0
        keys_mh = [MasterHash(int(h), int(l))
                   for h, l in zip(his_s[lo_off:hi_off], los_s[lo_off:hi_off])]
        leaf_cfg = LeafConfig(
            n=k, engine=cfg.engine if k >= 4 else "basic")
        desc, st = find_seed(keys_mh, leaf_cfg)
        zs[b] = desc.z
        all_bits[lo_off:hi_off] = desc.bits
        total_stats["seeds_scanned"] += st.seeds_scanned
        total_stats["pairs_considered"] += st.pairs_considered
        total_stats["orientability_tests"] += st.orientability_tests
    retrieval = Retrieval.build(his_s, los_s, all_bits)
    if stats_out is not None:
        stats_out.update(total_stats)
    return MphfIndex(
        n_keys=n, num_buckets=nb, leaf_size=cfg.leaf_size,
        engine=cfg.engine, global_seed=seed, compact=cfg.compact,
        offsets=EliasFano(offs.astype(np.uint64)), zs=zs,
        retrieval=retrieval)


def build(keys, cfg: BuildConfig | None = None,
          stats_out: dict | None = None) -> MphfIndex:
    """Construct the index over a set of distinct keys.

    Order-independent and deterministic for a fixed config.  Oversized
    buckets, leaf-search budget exhaustion, and retrieval peeling
    failures all trigger a bounded number of full rebuilds at bumped
    global seeds.
    """
    if cfg is None:
        cfg = BuildConfig()
    key_bytes = [_as_bytes(k) for k in keys]
    n = len(key_bytes)
    if n == 0:
        return MphfIndex(
            n_keys=0, num_buckets=0, leaf_size=cfg.leaf_size,
            engine=cfg.engine, global_seed=cfg.global_seed,
            compact=cfg.compact, offsets=EliasFano(np.zeros(1, np.uint64)),
            zs=np.zeros(0, np.uint64),
            retrieval=Retrieval.build([], [], []))
    if len(set(key_bytes)) != n:
        raise DuplicateKeyError("input keys are not distinct")
    last_err = None
    for attempt in range(MAX_REBUILDS):
        seed = (cfg.global_seed + attempt) % 2**64
        his, los = master_hash_many(key_bytes, seed)
        # a 128-bit collision between distinct keys: bump the seed
        pairs = np.lexsort((los, his))
        if n > 1:
            hs, ls = his[pairs], los[pairs]
            if np.any((hs[1:] == hs[:-1]) & (ls[1:] == ls[:-1])):
                last_err = DuplicateKeyError("master hash collision")
                continue
        nb = max(1, -(-n // cfg.leaf_size))
        bucket = _bucket_of(his, nb)
        sizes = np.bincount(bucket.astype(np.int64), minlength=nb)
        if sizes.max() > MAX_BUCKET:
            last_err = BuildError(f"bucket overflow at seed {seed}")
            continue
        order = np.lexsort((los, his, bucket))
        try:
            return _attempt_build(his, los, order, bucket, sizes, cfg,
                                  seed, stats_out)
        except (SearchFailure, RetrievalBuildError) as exc:
            last_err = exc
            continue
    raise BuildError(
        f"construction failed after {MAX_REBUILDS} seed attempts: "
        f"{last_err}")
