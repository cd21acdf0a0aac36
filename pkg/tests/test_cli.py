import subprocess
import sys

import pytest

from approxcount.cli import main
from approxcount.rankspace import read_points

STRUCTURES = {
    1: ["dyn1d"],
    2: ["boundary2d", "dominance2d", "dominance2d-fixed", "slabtree2", "slabtree2-fixed", "range2d"],
    3: ["level3d", "level3d-fixed", "slabtree3", "range3d"],
}


def gen(tmp_path, d, n, dist="uniform", seed=1):
    out = tmp_path / f"pts_{d}_{n}_{dist}_{seed}.txt"
    assert main(["gen", "--d", str(d), "--n", str(n), "--dist", dist, "--seed", str(seed), "--out", str(out)]) == 0
    return out


@pytest.mark.parametrize("dist", ["uniform", "clustered", "permutation-grid"])
def test_gen_writes_point_file(tmp_path, dist):
    path = gen(tmp_path, 3, 25, dist)
    d, rows = read_points(path)
    assert d == 3 and len(rows) == 25
    if dist == "permutation-grid":
        for ax in range(3):
            assert sorted(r[ax] for r in rows) == list(range(1, 26))


def test_gen_is_deterministic(tmp_path):
    a = gen(tmp_path, 2, 50, seed=9)
    b = tmp_path / "again.txt"
    main(["gen", "--d", "2", "--n", "50", "--seed", "9", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_small_end_to_end(tmp_path):
    path = gen(tmp_path, 2, 16, "permutation-grid")
    assert main(["verify", "--structure", "dominance2d", "--in", str(path)]) == 0


@pytest.mark.parametrize("d", [1, 2, 3])
def test_verify_every_structure(tmp_path, d, capsys):
    path = gen(tmp_path, d, 120, "clustered", seed=d)
    for name in STRUCTURES[d]:
        code = main(["verify", "--structure", name, "--in", str(path), "--queries", "150", "--rho", "0.5"])
        assert code == 0, (name, capsys.readouterr().out)


def test_verify_zero_queries(tmp_path, capsys):
    path = gen(tmp_path, 2, 30)
    assert main(["verify", "--structure", "slabtree2", "--in", str(path), "--queries", "0"]) == 0


def test_bench_csv_deterministic(tmp_path):
    path = gen(tmp_path, 2, 200)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert main(["bench", "--structure", "dominance2d", "--in", str(path), "--queries", "50",
                     "--rho", "0.5", "--seed", "3", "--csv", str(out), "--no-timing"]) == 0
    assert a.read_bytes() == b.read_bytes()
    text = a.read_bytes()
    assert b"\r" not in text
    lines = text.decode().splitlines()
    assert lines[0] == "query_id,k_exact,estimate,bound,abs_error,build_ms,query_ns"
    assert len(lines) == 51
    for row in lines[1:]:
        cols = row.split(",")
        k, est, bound, err = (int(v) for v in cols[1:5])
        assert float(cols[5]) == 0 and int(cols[6]) == 0
        assert err == abs(est - k) <= bound


def test_bench_with_timing(tmp_path):
    path = gen(tmp_path, 3, 60)
    out = tmp_path / "t.csv"
    assert main(["bench", "--structure", "level3d", "--in", str(path), "--queries", "10", "--csv", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 11


@pytest.mark.parametrize("name,d", [("boundary2d", 2), ("level3d", 3), ("dyn1d", 1), ("dominance2d", 2),
                                    ("slabtree2-fixed", 2), ("range3d", 3)])
def test_audit(tmp_path, name, d, capsys):
    path = gen(tmp_path, d, 90, seed=5)
    assert main(["audit", "--structure", name, "--in", str(path)]) == 0
    assert capsys.readouterr().out.strip()


def test_usage_errors(tmp_path):
    path2 = gen(tmp_path, 2, 10)
    path3 = gen(tmp_path, 3, 10)
    with pytest.raises(SystemExit) as e:
        main(["verify", "--structure", "nope", "--in", str(path2)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["verify", "--structure", "level3d", "--in", str(path2)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["verify", "--structure", "dominance2d", "--in", str(path2), "--rho", "1.5"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["bench", "--structure", "slabtree2", "--in", str(path3), "--csv", str(tmp_path / "x.csv")])
    assert e.value.code == 2


def test_empty_point_file(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("2 0\n")
    assert main(["verify", "--structure", "dominance2d", "--in", str(path), "--queries", "20"]) == 0


def test_verify_reports_violation(tmp_path, monkeypatch, capsys):
    from approxcount import cli

    path = gen(tmp_path, 2, 40)

    class OffByOne(cli.STRUCTURES["slabtree2"]):
        def ask(self, q):
            est, _ = super().ask(q)
            return est + 1, 0

    monkeypatch.setitem(cli.STRUCTURES, "slabtree2", OffByOne)
    assert main(["verify", "--structure", "slabtree2", "--in", str(path), "--queries", "20"]) == 1
    assert "violation query=" in capsys.readouterr().out


def test_module_entry_point(tmp_path):
    path = gen(tmp_path, 2, 12)
    res = subprocess.run([sys.executable, "-m", "approxcount", "verify", "--structure", "slabtree2",
                          "--in", str(path), "--queries", "5"], capture_output=True, text=True)
    assert res.returncode == 0
