"""Command-line harness: dataset generation, build, query, benchmarks.

Key file format: magic "BSHK", u64 key count, then per key a u16 length
followed by the raw bytes.  CSV outputs have a stable documented header
and embed the library version and the run configuration in every row.
"""

from __future__ import annotations

import struct
import sys
import time

import click
import numpy as np

from . import __version__
from .hashing import MasterHash, master_hash_many
from .leafsearch import LeafConfig, evaluate_leaf, find_seed
from .mphf import BuildConfig, MphfIndex, build as build_index

KEY_MAGIC = b"BSHK"

BENCH_HEADER = ("version,engine,n,N,build_ns_per_key,query_ns_per_key,"
                "seed_bits_per_key,retrieval_bits_per_key,"
                "filter_acceptance_rate,seeds_scanned,pairs_tested")

SPACE_HEADER = ("version,engine,leaf_size,compact,N,seed_bits,"
                "retrieval_bits,offset_bits,metadata_bits,"
                "total_bits_per_key,build_seconds")


def write_key_file(path, keys) -> None:
    with open(path, "wb") as fh:
        fh.write(KEY_MAGIC + struct.pack("<Q", len(keys)))
        for k in keys:
            fh.write(struct.pack("<H", len(k)) + k)


def read_key_file(path) -> list[bytes]:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != KEY_MAGIC:
        raise click.ClickException(f"{path}: not a key file (bad magic)")
    (count,) = struct.unpack_from("<Q", data, 4)
    keys = []
    pos = 12
    for _ in range(count):
        if pos + 2 > len(data):
            raise click.ClickException(f"{path}: truncated key file")
        (ln,) = struct.unpack_from("<H", data, pos)
        pos += 2
        if pos + ln > len(data):
            raise click.ClickException(f"{path}: truncated key file")
        keys.append(data[pos:pos + ln])
        pos += ln
    if pos != len(data):
        raise click.ClickException(f"{path}: trailing bytes in key file")
    return keys


def generate_keys(count, min_len, max_len, rng_seed):
    """Distinct random byte strings, no zero bytes, deterministic."""
    if not 1 <= min_len <= max_len:
        raise click.ClickException("need 1 <= min-len <= max-len")
    space = sum(255 ** l for l in range(min_len, max_len + 1))
    if count > space:
        raise click.ClickException(
            f"cannot generate {count} distinct keys from a "
            f"keyspace of {space}")
    rng = np.random.default_rng(rng_seed)
    seen = set()
    keys = []
    while len(keys) < count:
        ln = int(rng.integers(min_len, max_len + 1))
        k = rng.integers(1, 256, ln, dtype=np.uint8).tobytes()
        if k not in seen:
            seen.add(k)
            keys.append(k)
    return keys


def _out_stream(out):
    return open(out, "w") if out else sys.stdout


@click.group()
@click.version_option(__version__)
def main():
    """Minimal perfect hashing via bipartite graph orientation."""


@main.command()
@click.argument("path", type=click.Path(writable=True, dir_okay=False))
@click.option("--count", type=int, required=True, help="Number of keys.")
@click.option("--min-len", type=int, default=10, show_default=True)
@click.option("--max-len", type=int, default=50, show_default=True)
@click.option("--seed", "rng_seed", type=int, default=0, show_default=True)
def genkeys(path, count, min_len, max_len, rng_seed):
    """Write a deterministic random key file."""
    keys = generate_keys(count, min_len, max_len, rng_seed)
    write_key_file(path, keys)
    click.echo(f"wrote {len(keys)} keys to {path}")


def _build_config(leaf_size, engine, seed, compact):
    try:
        return BuildConfig(leaf_size=leaf_size, engine=engine,
                           global_seed=seed, compact=compact)
    except ValueError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.argument("key_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("index_file", type=click.Path(writable=True, dir_okay=False))
@click.option("--leaf-size", type=int, default=32, show_default=True)
@click.option("--engine", default="quadsplit", show_default=True,
              type=click.Choice(["basic", "rotation", "quadsplit"]))
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--compact/--no-compact", default=True, show_default=True)
@click.option("--threads", type=int, default=1, show_default=True,
              help="Reserved; construction currently runs on one thread.")
@click.option("--out", type=click.Path(writable=True, dir_okay=False),
              default=None, help="Write the space-report CSV here.")
def build(key_file, index_file, leaf_size, engine, seed, compact, threads,
          out):
    """Build an index from a key file and report its space breakdown."""
    cfg = _build_config(leaf_size, engine, seed, compact)
    keys = read_key_file(key_file)
    t0 = time.perf_counter()
    idx = build_index(keys, cfg)
    elapsed = time.perf_counter() - t0
    with open(index_file, "wb") as fh:
        fh.write(idx.serialize())
    rep = idx.space_report()
    stream = _out_stream(out)
    try:
        print(SPACE_HEADER, file=stream)
        print(f"{__version__},{engine},{leaf_size},{int(compact)},"
              f"{idx.n_keys},{rep['seed_bits']},{rep['retrieval_bits']},"
              f"{rep['offset_bits']},{rep['metadata_bits']},"
              f"{rep['total_bits_per_key']},{elapsed:.3f}",
              file=stream)
    finally:
        if stream is not sys.stdout:
            stream.close()
    click.echo(f"built {idx.n_keys} keys -> {index_file} "
               f"({rep['total_bits_per_key']} bits/key)", err=True)


@main.command()
@click.argument("index_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("key_file", type=click.Path(exists=True, dir_okay=False))
def query(index_file, key_file):
    """Verify the bijection over a key file, then time queries."""
    with open(index_file, "rb") as fh:
        idx = MphfIndex.deserialize(fh.read())
    keys = read_key_file(key_file)
    if len(keys) != idx.n_keys:
        raise click.ClickException(
            f"key count {len(keys)} != indexed count {idx.n_keys}")
    t0 = time.perf_counter()
    his, los = master_hash_many(keys, idx.global_seed)
    t_hash = time.perf_counter() - t0
    idx.query_hashes(his[:1], los[:1])  # warm up decode tables / jit
    t0 = time.perf_counter()
    pos = idx.query_hashes(his, los)
    t_query = time.perf_counter() - t0
    n = len(keys)
    if not np.array_equal(np.sort(pos), np.arange(n)):
        raise click.ClickException(
            "verification FAILED: query output is not a bijection "
            f"onto [0, {n}) "
            f"(min {pos.min()}, max {pos.max()}, "
            f"distinct {len(np.unique(pos))})")
    click.echo(f"verified bijection over {n} keys")
    click.echo(f"master hashing: {1e9 * t_hash / n:.1f} ns/key")
    click.echo(f"query:          {1e9 * t_query / n:.1f} ns/key")


def _bench_one(engine, n, reps, rng):
    """Leaf-only microbenchmark: search cost, query cost, space.

    Runs the whole batch of leaves inside one compiled call so the
    measurement reflects the engines, not the Python/JIT call
    boundary.  Leaves above n = 64 need a larger pair-code budget
    than the default.
    """
    from . import _kernels
    his = rng.integers(0, 2**64, (reps, n), dtype=np.uint64)
    los = rng.integers(0, 2**64, (reps, n), dtype=np.uint64)
    eff = engine if n >= 4 else "basic"
    budget = 2**44 if n <= 64 else 2**60
    cfg = LeafConfig(n=n, engine=eff, max_pair_code=budget)
    half = cfg.half
    max_code = np.uint64(budget)
    subs = ((los >> np.uint64(63)) & np.uint64(1)).astype(np.uint8)
    driver = {"basic": _kernels.bench_basic,
              "rotation": _kernels.bench_rotation,
              "quadsplit": _kernels.bench_quadsplit}[eff]

    def run(lo2, sub2, f_out, stats, zs):
        if eff == "basic":
            driver(lo2, n, half, max_code, f_out, stats, zs)
        else:
            driver(lo2, sub2, n, half, max_code, f_out, stats, zs)

    # warm up the jit on a single leaf before timing
    run(los[:1], subs[:1], np.zeros((1, n), np.uint8),
        np.zeros(_kernels.N_STATS, np.int64), np.zeros(1, np.uint64))
    f_out = np.zeros((reps, n), np.uint8)
    stats = np.zeros(_kernels.N_STATS, np.int64)
    zs = np.zeros(reps, np.uint64)
    t0 = time.perf_counter()
    run(los, subs, f_out, stats, zs)
    build_s = time.perf_counter() - t0
    if np.any(zs == _kernels.FAIL):
        raise click.ClickException(
            f"leaf search budget exhausted at n={n}")
    seeds = int(stats[_kernels.ST_SEEDS])
    surj = int(stats[_kernels.ST_SURJ])
    combos = int(stats[_kernels.ST_COMBOS])
    pairs = int(stats[_kernels.ST_PAIRS])
    log_z = float(np.sum(np.log2(zs.astype(np.float64) + 1.0)))
    t0 = time.perf_counter()
    for rep in range(reps):
        z = int(zs[rep])
        for j in range(n):
            m = MasterHash(int(his[rep, j]), int(los[rep, j]))
            evaluate_leaf(m, z, int(f_out[rep, j]), cfg)
    query_s = time.perf_counter() - t0
    total_keys = n * reps
    # acceptance = accepted candidates / combinations examined; the
    # basic engine has no combination stage, there it is per raw seed
    denom = combos if combos else seeds
    rate = min(1.0, surj / denom) if denom else 0.0
    return {
        "build_ns_per_key": 1e9 * build_s / total_keys,
        "query_ns_per_key": 1e9 * query_s / total_keys,
        "seed_bits_per_key": log_z / total_keys,
        "retrieval_bits_per_key": 1.0,
        "filter_acceptance_rate": rate,
        "seeds_scanned": seeds,
        "pairs_tested": pairs,
    }


@main.command()
@click.option("--n", "n_list", multiple=True, type=int,
              default=(16, 32), show_default=True,
              help="Leaf sizes (repeatable).")
@click.option("--engine", "engine_list", multiple=True,
              default=("basic", "rotation", "quadsplit"), show_default=True,
              type=click.Choice(["basic", "rotation", "quadsplit"]))
@click.option("--reps", type=int, default=50, show_default=True,
              help="Leaves per (engine, n) cell.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(writable=True, dir_okay=False),
              default=None)
def bench(n_list, engine_list, reps, seed, out):
    """Leaf-search microbenchmarks across engines and sizes (CSV)."""
    rng = np.random.default_rng(seed)
    stream = _out_stream(out)
    try:
        print(BENCH_HEADER, file=stream)
        for engine in engine_list:
            for n in n_list:
                r = _bench_one(engine, n, reps, rng)
                print(f"{__version__},{engine},{n},{n * reps},"
                      f"{r['build_ns_per_key']:.1f},"
                      f"{r['query_ns_per_key']:.1f},"
                      f"{r['seed_bits_per_key']:.4f},"
                      f"{r['retrieval_bits_per_key']:.2f},"
                      f"{r['filter_acceptance_rate']:.6f},"
                      f"{r['seeds_scanned']},{r['pairs_tested']}",
                      file=stream)
                stream.flush()
    finally:
        if stream is not sys.stdout:
            stream.close()


if __name__ == "__main__":
    main()
