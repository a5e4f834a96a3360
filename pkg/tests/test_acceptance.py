"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Each test computes its oracle independently, prints a single
``ACCEPTANCE <k> PASS|FAIL`` line (visible even under pytest capture),
and then asserts.  The heavyweight million-key builds are shared
between criteria through module-scoped caches.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np
import pytest

from bimphf.cli import _bench_one, generate_keys
from bimphf.hashing import MasterHash, leaf_hash
from bimphf.leafsearch import LeafConfig, find_seed, find_seed_basic
from bimphf.mphf import BuildConfig, MphfIndex, build
from bimphf.orientation import LeafGraph, is_orientable, orient
from bimphf.pairing import (pair_c, pair_s, pair_t, unpair_c, unpair_s,
                            unpair_t)
from tests.conftest import random_master_hashes

N_FULL = 10**6
ENGINES = ("basic", "rotation", "quadsplit")


def report(capsys, criterion, ok, detail):
    with capsys.disabled():
        print(f"ACCEPTANCE {criterion} {'PASS' if ok else 'FAIL'}: {detail}",
              flush=True)
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def million_keys():
    return generate_keys(N_FULL, 10, 50, rng_seed=2024)


_build_cache = {}


def cached_build(keys, engine, leaf_size):
    key = (engine, leaf_size)
    if key not in _build_cache:
        t0 = time.perf_counter()
        idx = build(keys, BuildConfig(leaf_size=leaf_size, engine=engine))
        _build_cache[key] = (idx, time.perf_counter() - t0)
    return _build_cache[key]


# -- criterion 1: end-to-end bijectivity -------------------------------


@pytest.mark.parametrize("engine", ENGINES)
@pytest.mark.parametrize("n", [16, 32, 64])
def test_criterion_1_bijectivity(engine, n, million_keys, capsys):
    idx, build_s = cached_build(million_keys, engine, n)
    pos = idx.query_many(million_keys)
    ok = bool(np.array_equal(np.sort(pos), np.arange(N_FULL)))
    report(capsys, 1, ok,
           f"engine={engine} n={n} N=10^6 bijective={ok} "
           f"(build {build_s:.1f}s)")


# -- criterion 2: orientation oracle equivalence -----------------------


def _assignment_table(n):
    masks = np.arange(1 << n, dtype=np.uint32)
    return ((masks[:, None] >> np.arange(n, dtype=np.uint32)) & 1) \
        .astype(bool)


def _brute_orientable(e0, e1, table):
    pos = np.where(table, e1[None, :], e0[None, :]).astype(np.uint32)
    covered = np.bitwise_or.reduce(
        np.uint32(1) << pos, axis=1)
    return bool((np.bitwise_count(covered) == e0.size).any())


def test_criterion_2_orientation_oracle(capsys):
    rng = random.Random(777)
    mismatches = 0
    total = 0
    for n in (4, 8, 12):
        half = (n + 1) // 2
        table = _assignment_table(n)
        for _ in range(10**4):
            e0 = np.array([rng.randrange(half) for _ in range(n)], np.uint8)
            e1 = np.array([n - half + rng.randrange(half)
                           for _ in range(n)], np.uint8)
            g = LeafGraph(n=n, endpoint0=e0, endpoint1=e1)
            expect = _brute_orientable(e0, e1, table)
            got = is_orientable(g)
            total += 1
            if got != expect:
                mismatches += 1
            elif got:
                f = orient(g).f
                pos = np.where(f == 0, e0, e1)
                if len(set(pos.tolist())) != n:
                    mismatches += 1
    report(capsys, 2, mismatches == 0,
           f"{total} graphs at n in {{4,8,12}}, {mismatches} mismatches")


# -- criterion 3: pairing exhaustive round trips -----------------------


def test_criterion_3_pairing_round_trip(capsys):
    bad = 0
    for z in range(2**20):
        if pair_t(*unpair_t(z)) != z:
            bad += 1
        if pair_s(*unpair_s(z)) != z:
            bad += 1
        if pair_c(*unpair_c(z)) != z:
            bad += 1
    for x in range(1, 2**11):
        for y in range(x):
            if unpair_t(pair_t(x, y)) != (x, y):
                bad += 1
    for x in range(2**11):
        for y in range(2**11):
            if unpair_s(pair_s(x, y)) != (x, y):
                bad += 1
            if unpair_c(pair_c(x, y)) != (x, y):
                bad += 1
    report(capsys, 3, bad == 0,
           f"all z < 2^20 and all coordinate pairs < 2^11, {bad} failures")


# -- criterion 4: filter-rate statistics -------------------------------


def _splitmix_np(x):
    g = np.uint64(0x9E3779B97F4A7C15)
    c1 = np.uint64(0xBF58476D1CE4E5B9)
    c2 = np.uint64(0x94D049BB133111EB)
    z = x + g
    z = (z ^ (z >> np.uint64(30))) * c1
    z = (z ^ (z >> np.uint64(27))) * c2
    return z ^ (z >> np.uint64(31))


def _mix_np(z):
    c1 = np.uint64(0xBF58476D1CE4E5B9)
    c2 = np.uint64(0x94D049BB133111EB)
    z = (z ^ (z >> np.uint64(30))) * c1
    z = (z ^ (z >> np.uint64(27))) * c2
    return z ^ (z >> np.uint64(31))


def test_criterion_4_filter_rate(capsys):
    n, half, trials = 16, 8, 10**5
    rng = random.Random(4242)
    keys = random_master_hashes(n, rng)
    los = np.array([m.lo for m in keys], np.uint64)
    sm = _splitmix_np(np.arange(trials, dtype=np.uint64))
    cov = np.zeros(trials, np.uint64)
    for lo in los:
        x = _mix_np(lo ^ sm)
        # exact high-word multiply by half (< 2^32)
        v = ((x >> np.uint64(32)) * np.uint64(half)
             + (((x & np.uint64(0xFFFFFFFF)) * np.uint64(half))
                >> np.uint64(32))) >> np.uint64(32)
        cov |= np.uint64(1) << v
    rate = float((cov == (1 << half) - 1).mean())
    oracle = sum((-1) ** i * math.comb(half, i) * ((half - i) / half) ** n
                 for i in range(half + 1))
    sigma = math.sqrt(oracle * (1 - oracle) / trials)
    bound = (1 - math.exp(-2)) ** half
    ok = abs(rate - oracle) < 3 * sigma and rate < bound
    # cross-check the vectorized mixing against the library's scalar path
    spot = sum(
        len({leaf_hash(m, s, half) for m in keys}) == half
        for s in range(200)) / 200
    ok = ok and abs(spot - float((cov[:200] == 255).mean())) < 1e-9
    report(capsys, 4, ok,
           f"rate={rate:.4f} oracle={oracle:.4f} (3sig={3 * sigma:.4f}) "
           f"bound={bound:.4f}")


# -- criterion 5: filter neutrality ------------------------------------


def test_criterion_5_filter_neutrality(capsys):
    rng = random.Random(555)
    mismatches = 0
    for n in (8, 12, 16):
        for _ in range(200):
            keys = random_master_hashes(n, rng)
            zs = set()
            for surj in (True, False):
                for iso in (True, False):
                    for cache in (True, False):
                        cfg = LeafConfig(
                            n=n, engine="basic",
                            use_surjectivity_filter=surj,
                            use_isolated_filter=iso,
                            use_seed_cache=cache)
                        desc, _ = find_seed_basic(keys, cfg)
                        zs.add(desc.z)
            if len(zs) != 1:
                mismatches += 1
    report(capsys, 5, mismatches == 0,
           f"200 leaves x 8 toggle combos at n in {{8,12,16}}, "
           f"{mismatches} mismatching leaves")


# -- criterion 6: seed-cost scaling ------------------------------------


def test_criterion_6_seed_cost(capsys):
    rng = random.Random(66)
    n = 32
    cfg = LeafConfig(n=n, engine="basic")
    acc = 0.0
    leaves = 250
    for _ in range(leaves):
        keys = random_master_hashes(n, rng)
        desc, _ = find_seed_basic(keys, cfg)
        acc += math.log2(desc.z + 1)
    mean = acc / (leaves * n)
    ok = abs(mean - 0.443) <= 0.10
    report(capsys, 6, ok,
           f"mean log2(z+1)/n = {mean:.4f} over {leaves} leaves at n=32 "
           f"(target 0.443 +- 0.10)")


# -- criterion 7: engine ordering --------------------------------------


def test_criterion_7_engine_ordering(capsys):
    rng = np.random.default_rng(77)
    quad100 = _bench_one("quadsplit", 100, 50, rng)
    rot100 = _bench_one("rotation", 100, 50, rng)
    ratio100 = rot100["build_ns_per_key"] / quad100["build_ns_per_key"]
    details = [f"n=100 quadsplit/rotation speedup {ratio100:.2f}x (need 3)"]
    ok = ratio100 >= 3.0
    for n in (32, 64):
        reps = 400 if n == 32 else 50
        basic = _bench_one("basic", n, reps, rng)
        for engine in ("rotation", "quadsplit"):
            other = _bench_one(engine, n, reps, rng)
            r = basic["build_ns_per_key"] / other["build_ns_per_key"]
            details.append(f"n={n} {engine}/basic {r:.2f}x (need 2)")
            ok = ok and r >= 2.0
    report(capsys, 7, ok, "; ".join(details))


# -- criterion 8: space (scaled substitute) ----------------------------


def test_criterion_8_space(million_keys, capsys):
    idx, _ = cached_build(million_keys, "quadsplit", 64)
    rep = idx.space_report()
    seed_pk = rep["seed_bits"] / N_FULL
    ret_pk = rep["retrieval_bits"] / N_FULL
    total = rep["total_bits_per_key"]
    ok = total <= 2.10 and 0.30 <= seed_pk <= 0.60 and ret_pk <= 1.30
    report(capsys, 8, ok,
           f"n=64 N=10^6 compact: total={total} bits/key "
           f"(<=2.10), seed={seed_pk:.3f} ([0.30,0.60]), "
           f"retrieval={ret_pk:.3f} (<=1.30)")


# -- criterion 9: serialization determinism ----------------------------


def test_criterion_9_determinism(capsys):
    keys = generate_keys(10**5, 10, 50, rng_seed=909)
    cfg = BuildConfig(leaf_size=32, engine="quadsplit")
    blob1 = build(keys, cfg).serialize()
    blob2 = build(list(reversed(keys)), cfg).serialize()
    idx = MphfIndex.deserialize(blob1)
    pos1 = build(keys, cfg).query_many(keys)
    pos2 = idx.query_many(keys)
    ok = blob1 == blob2 and np.array_equal(pos1, pos2) \
        and sorted(pos2.tolist()) == list(range(10**5))
    report(capsys, 9, ok,
           f"byte-identical rebuilds ({len(blob1)} bytes) and round-trip "
           f"query equality on 10^5 keys")


# -- criterion 10: pair-count growth -----------------------------------


def test_criterion_10_pair_growth(capsys):
    rng = random.Random(1010)
    details = []
    ok = True
    for n in (16, 24, 32):
        cfg = LeafConfig(n=n, engine="basic")
        tests = 0
        leaves = 200
        for _ in range(leaves):
            keys = random_master_hashes(n, rng)
            _, st = find_seed(keys, cfg)
            tests += st.orientability_tests
        mean = tests / leaves
        bound = 1.175 ** n * n ** 2
        details.append(f"n={n} mean={mean:.0f} bound={bound:.0f}")
        ok = ok and mean <= bound
    report(capsys, 10, ok, "; ".join(details))
