"""Seed-pair search for a single leaf of up to 128 keys.

A leaf is solved by finding two hash function candidates whose combined
bipartite graph is orientable.  Candidates are drawn from a growing pool
of surjective functions; every new candidate is paired against all
previous ones in ascending triangular-code order, so the returned code
doubles as the count of the search position.  Three candidate-generation
engines exist:

* ``basic``     -- one raw seed per candidate.
* ``rotation``  -- one seed yields ceil(n/2) candidates by cyclically
                   rotating the hash values of one key subset.
* ``quadsplit`` -- candidates are pairs of independent per-subset seeds,
                   screened with bit-pattern OR checks and encoded with
                   the Szudzik pairing function.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .hashing import MasterHash, leaf_hash, subset_bit
from .pairing import pair_t, unpair_s, unpair_t

ENGINES = ("basic", "rotation", "quadsplit")

DEFAULT_MAX_PAIR_CODE = 2**44


class SearchFailure(RuntimeError):
    """Pair-code budget exhausted; the caller must rehash the bucket."""


@dataclass(frozen=True)
class LeafConfig:
    n: int
    engine: str = "quadsplit"
    use_surjectivity_filter: bool = True
    use_isolated_filter: bool = True
    use_seed_cache: bool = True
    max_pair_code: int = DEFAULT_MAX_PAIR_CODE

    def __post_init__(self):
        if not 1 <= self.n <= 128:
            raise ValueError(f"leaf size must be in 1..128, got {self.n}")
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")
        if self.engine != "basic" and self.n < 4:
            raise ValueError("rotation/quadsplit require n >= 4")
        if not 0 < self.max_pair_code <= 2**62:
            raise ValueError("max_pair_code out of range")

    @property
    def half(self) -> int:
        return (self.n + 1) // 2


@dataclass(frozen=True)
class SeedCandidate:
    """One surjective hash function candidate for a leaf."""

    code: int
    hash_bytes: np.ndarray  # uint8, per-key position in [0, half)
    coverage_mask: int      # half bits
    isolated_mask: int      # n bits, bit k set iff key k is sole at its slot


@dataclass(frozen=True)
class LeafDescriptor:
    """Winning seed pair (triangular-coded) plus the assignment bits."""

    z: int
    bits: np.ndarray  # uint8 per key; empty for n == 1


@dataclass
class SearchStats:
    seeds_scanned: int = 0
    seeds_surjective: int = 0
    pairs_considered: int = 0
    isolated_rejections: int = 0
    orientability_tests: int = 0
    combos_checked: int = 0

    @classmethod
    def from_kernel(cls, arr) -> "SearchStats":
        return cls(
            seeds_scanned=int(arr[_kernels.ST_SEEDS]),
            seeds_surjective=int(arr[_kernels.ST_SURJ]),
            pairs_considered=int(arr[_kernels.ST_PAIRS]),
            isolated_rejections=int(arr[_kernels.ST_ISO_REJ]),
            orientability_tests=int(arr[_kernels.ST_ORIENT]),
            combos_checked=int(arr[_kernels.ST_COMBOS]),
        )


def _lo_array(keys) -> np.ndarray:
    return np.array([m.lo for m in keys], dtype=np.uint64)


def _subset_array(keys) -> np.ndarray:
    return np.array([subset_bit(m) for m in keys], dtype=np.uint8)


def candidate_value(m: MasterHash, code: int, engine: str, half: int) -> int:
    """Decode a candidate code and hash one key into [0, half)."""
    if engine == "basic":
        return leaf_hash(m, code, half)
    if engine == "rotation":
        s, r = divmod(code, half)
        v = leaf_hash(m, s, half)
        if subset_bit(m):
            v = (v + r) % half
        return v
    s_a, s_b = unpair_s(code)
    return leaf_hash(m, s_b if subset_bit(m) else s_a, half)


def coverage_mask(keys, candidate_code: int, cfg: LeafConfig) -> int:
    """Recompute the position-coverage bit mask of a candidate."""
    mask = 0
    for m in keys:
        mask |= 1 << candidate_value(m, candidate_code, cfg.engine, cfg.half)
    return mask


def make_candidate(keys, candidate_code: int, cfg: LeafConfig) -> SeedCandidate:
    """Materialize a candidate: hash bytes plus coverage/isolated masks."""
    vals = np.array(
        [candidate_value(m, candidate_code, cfg.engine, cfg.half)
         for m in keys],
        dtype=np.uint8,
    )
    cov = 0
    counts = np.zeros(cfg.half, dtype=np.int64)
    for v in vals:
        cov |= 1 << int(v)
        counts[v] += 1
    iso = 0
    for k, v in enumerate(vals):
        if counts[v] == 1:
            iso |= 1 << k
    return SeedCandidate(code=candidate_code, hash_bytes=vals,
                         coverage_mask=cov, isolated_mask=iso)


def isolated_filter(new: SeedCandidate, old: SeedCandidate, n: int) -> bool:
    """True iff the pair may still be orientable.

    A key isolated in both candidates forms a two-node, one-edge
    component, which can never be oriented; such pairs are rejected
    without running the full check.  Exception: at odd n both endpoints
    may coincide on the single shared overlap node (a self-loop, which
    is orientable), so overlap-capable keys are excluded from the check.
    """
    half = (n + 1) // 2
    a = new.isolated_mask
    b = old.isolated_mask
    if n % 2 == 1:
        for k, v in enumerate(new.hash_bytes):
            if v == half - 1:
                a &= ~(1 << k)
        for k, v in enumerate(old.hash_bytes):
            if v == 0:
                b &= ~(1 << k)
    return (a & b) == 0


def _trivial_descriptor() -> tuple[LeafDescriptor, SearchStats]:
    return LeafDescriptor(z=0, bits=np.zeros(0, np.uint8)), SearchStats()


def _verify(keys, desc: LeafDescriptor, cfg: LeafConfig) -> None:
    # decoded-and-retested contract: the stored code must reproduce a
    # bijection onto [0, n)
    c0, c1 = unpair_t(desc.z)
    half = cfg.half
    positions = []
    for m, bit in zip(keys, desc.bits):
        c = c0 if bit == 0 else c1
        off = 0 if bit == 0 else cfg.n - half
        positions.append(off + candidate_value(m, c, cfg.engine, half))
    if sorted(positions) != list(range(cfg.n)):
        raise AssertionError("leaf descriptor failed bijection verification")


def _run_kernel(keys, cfg: LeafConfig):
    n = len(keys)
    lo = _lo_array(keys)
    f_out = np.zeros(n, np.uint8)
    stats = np.zeros(_kernels.N_STATS, np.int64)
    max_code = np.uint64(cfg.max_pair_code)
    if cfg.engine == "basic":
        z = _kernels.search_basic(
            lo, n, cfg.half, cfg.use_surjectivity_filter,
            cfg.use_isolated_filter, cfg.use_seed_cache, max_code,
            f_out, stats)
    elif cfg.engine == "rotation":
        z = _kernels.search_rotation(
            lo, _subset_array(keys), n, cfg.half, cfg.use_isolated_filter,
            max_code, f_out, stats)
    else:
        z = _kernels.search_quadsplit(
            lo, _subset_array(keys), n, cfg.half, cfg.use_isolated_filter,
            max_code, f_out, stats)
    if z == int(_kernels.FAIL):
        raise SearchFailure(
            f"no orientable pair within budget {cfg.max_pair_code} "
            f"(engine={cfg.engine}, n={n})")
    desc = LeafDescriptor(z=int(z), bits=f_out)
    _verify(keys, desc, cfg)
    return desc, SearchStats.from_kernel(stats)


def find_seed_basic(keys, cfg: LeafConfig):
    n = len(keys)
    if n != cfg.n:
        raise ValueError("key count does not match cfg.n")
    if n == 1:
        return _trivial_descriptor()
    return _run_kernel(keys, LeafConfig(
        n=n, engine="basic",
        use_surjectivity_filter=cfg.use_surjectivity_filter,
        use_isolated_filter=cfg.use_isolated_filter,
        use_seed_cache=cfg.use_seed_cache,
        max_pair_code=cfg.max_pair_code))


def find_seed_rotation(keys, cfg: LeafConfig):
    if cfg.n < 4:
        raise ValueError("rotation engine requires n >= 4")
    if len(keys) != cfg.n:
        raise ValueError("key count does not match cfg.n")
    return _run_kernel(keys, LeafConfig(
        n=cfg.n, engine="rotation",
        use_isolated_filter=cfg.use_isolated_filter,
        max_pair_code=cfg.max_pair_code))


def find_seed_quadsplit(keys, cfg: LeafConfig):
    if cfg.n < 4:
        raise ValueError("quadsplit engine requires n >= 4")
    if len(keys) != cfg.n:
        raise ValueError("key count does not match cfg.n")
    return _run_kernel(keys, LeafConfig(
        n=cfg.n, engine="quadsplit",
        use_isolated_filter=cfg.use_isolated_filter,
        max_pair_code=cfg.max_pair_code))


def find_seed(keys, cfg: LeafConfig):
    """Engine dispatch; sizes below 4 always use the basic engine."""
    n = len(keys)
    if n == 1:
        return _trivial_descriptor()
    eff = cfg.engine if n >= 4 else "basic"
    sub_cfg = LeafConfig(
        n=n, engine=eff,
        use_surjectivity_filter=cfg.use_surjectivity_filter,
        use_isolated_filter=cfg.use_isolated_filter,
        use_seed_cache=cfg.use_seed_cache,
        max_pair_code=cfg.max_pair_code)
    return _run_kernel(keys, sub_cfg)


def evaluate_leaf(m: MasterHash, z: int, bit: int, cfg: LeafConfig) -> int:
    """Query-side evaluation: position of one key within its leaf."""
    if cfg.n == 1:
        return 0
    c0, c1 = unpair_t(z)
    half = cfg.half
    c = c0 if bit == 0 else c1
    offset = 0 if bit == 0 else cfg.n - half
    return offset + candidate_value(m, c, cfg.engine, half)
