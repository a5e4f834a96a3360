"""CLI subcommands exercised through click's test runner."""

from __future__ import annotations

from click.testing import CliRunner

from bimphf.cli import main, read_key_file


def _run(args, **kw):
    runner = CliRunner()
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    return result


def test_genkeys_deterministic(tmp_path):
    p1 = tmp_path / "a.bshk"
    p2 = tmp_path / "b.bshk"
    for p in (p1, p2):
        r = _run(["genkeys", str(p), "--count", "500", "--seed", "11"])
        assert r.exit_code == 0, r.output
    assert p1.read_bytes() == p2.read_bytes()
    keys = read_key_file(str(p1))
    assert len(keys) == 500
    assert len(set(keys)) == 500
    for k in keys:
        assert 10 <= len(k) <= 50
        assert 0 not in k


def test_genkeys_empty(tmp_path):
    p = tmp_path / "empty.bshk"
    r = _run(["genkeys", str(p), "--count", "0"])
    assert r.exit_code == 0
    assert read_key_file(str(p)) == []
    assert p.read_bytes() == b"BSHK" + b"\x00" * 8


def test_genkeys_impossible_count(tmp_path):
    p = tmp_path / "x.bshk"
    r = _run(["genkeys", str(p), "--count", "300",
              "--min-len", "1", "--max-len", "1"])
    assert r.exit_code != 0


def test_build_query_round_trip(tmp_path):
    kf = tmp_path / "keys.bshk"
    ix = tmp_path / "index.bsh1"
    csv = tmp_path / "space.csv"
    assert _run(["genkeys", str(kf), "--count", "3000"]).exit_code == 0
    r = _run(["build", str(kf), str(ix), "--leaf-size", "16",
              "--out", str(csv)])
    assert r.exit_code == 0, r.output
    lines = csv.read_text().strip().splitlines()
    assert lines[0].startswith("version,engine,leaf_size")
    assert len(lines) == 2
    r = _run(["query", str(ix), str(kf)])
    assert r.exit_code == 0, r.output
    assert "verified bijection over 3000 keys" in r.output


def test_query_detects_wrong_key_file(tmp_path):
    kf = tmp_path / "keys.bshk"
    kf2 = tmp_path / "other.bshk"
    ix = tmp_path / "index.bsh1"
    _run(["genkeys", str(kf), "--count", "400"])
    _run(["genkeys", str(kf2), "--count", "300", "--seed", "5"])
    _run(["build", str(kf), str(ix)])
    r = _run(["query", str(ix), str(kf2)])
    assert r.exit_code != 0


def test_bench_row_count(tmp_path):
    out = tmp_path / "bench.csv"
    r = _run(["bench", "--n", "16", "--n", "32",
              "--engine", "basic", "--engine", "rotation",
              "--engine", "quadsplit",
              "--reps", "5", "--out", str(out)])
    assert r.exit_code == 0, r.output
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 6  # header + 3 engines x 2 sizes
    header = lines[0].split(",")
    for row in lines[1:]:
        cells = dict(zip(header, row.split(",")))
        assert 0.0 <= float(cells["filter_acceptance_rate"]) <= 1.0
        assert int(cells["seeds_scanned"]) >= 0
        assert int(cells["pairs_tested"]) >= 0
        assert float(cells["build_ns_per_key"]) >= 0.0


def test_bad_key_file_rejected(tmp_path):
    bad = tmp_path / "bad.bshk"
    bad.write_bytes(b"JUNK" + b"\x00" * 20)
    ix = tmp_path / "index.bsh1"
    r = _run(["build", str(bad), str(ix)])
    assert r.exit_code != 0
