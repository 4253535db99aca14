import json
import shutil
import subprocess

import pytest

from pastat.cli import EXIT_ERROR, EXIT_FAILS, EXIT_HOLDS, main
from pastat.io import parse_instance, parse_verdict, serialize_instance
from pastat.pa import eval_dc, eval_maxmin

from helpers import abs_t, neg_abs_t, rand_vec


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_test_exit_codes(files):
    pos = files("abs.json", serialize_instance(abs_t()))
    neg = files("neg.json", serialize_instance(neg_abs_t()))
    assert main(["test", pos]) == EXIT_HOLDS
    assert main(["test", neg, "--epsilon", "5"]) == EXIT_FAILS
    assert main(["test", neg, "--notion", "clarke"]) == EXIT_HOLDS
    assert main(["test", neg, "--polarity", "no", "--epsilon", "5"]) == EXIT_HOLDS


def test_test_json_round_trips(files, capsys):
    neg = files("neg.json", serialize_instance(neg_abs_t()))
    assert main(["test", neg, "--json", "--epsilon", "1/3"]) == EXIT_FAILS
    out = capsys.readouterr().out
    vd = parse_verdict(out)
    assert vd.dist_sq == float("inf") and not vd.yes
    assert json.loads(out)["epsilon"] == "1/3"


def test_input_errors(files, capsys):
    bad = files("bad.json", serialize_instance(abs_t())[:40])
    assert main(["test", bad]) == EXIT_ERROR
    assert "line 1 column" in capsys.readouterr().err
    ok = files("abs.json", serialize_instance(abs_t()))
    assert main(["test", ok, "--epsilon", "-1"]) == EXIT_ERROR
    assert main(["test", ok, "--epsilon", "0.5"]) == EXIT_ERROR
    assert main(["test", ok + ".missing"]) == EXIT_ERROR
    assert main(["frobnicate"]) == EXIT_ERROR


def test_localmin(files, capsys):
    assert main(["localmin", files("a.json", serialize_instance(abs_t()))]) == EXIT_HOLDS
    assert main(["localmin", files("n.json", serialize_instance(neg_abs_t()))]) == EXIT_FAILS
    assert "not a local minimum" in capsys.readouterr().out


def test_gen_clique_frechet_both(files, tmp_path, capsys, rng):
    g = files("k3.txt", "3 3\n1 2\n1 3\n2 3\n")
    out = tmp_path / "out"
    assert main(["gen", "--family", "clique-frechet", "--graph", g, "-k", "2",
                 "--out", str(out)]) == EXIT_HOLDS
    mm = parse_instance((out / "clique-frechet-maxmin.json").read_text())
    dc = parse_instance((out / "clique-frechet-dc.json").read_text())
    assert mm.meta["has_clique"] is True and dc.meta == mm.meta
    assert mm.meta["source"] == "clique" and mm.meta["N"] == 3 and mm.meta["k"] == 2
    for _ in range(20):
        z = rand_vec(rng, 4)
        assert eval_maxmin(mm.function, z) == eval_dc(dc.function, z)
    assert main(["localmin", str(out / "clique-frechet-dc.json")]) == EXIT_FAILS
    text = (out / "clique-frechet-maxmin.json").read_text()
    assert serialize_instance(parse_instance(text)) == text


def test_gen_clique_clarke_then_test(files, tmp_path):
    g = files("p3.txt", "3 2\n1 2\n2 3\n")
    out = tmp_path / "out"
    assert main(["gen", "--family", "clique-clarke", "--graph", g, "-k", "3",
                 "--repr", "maxmin", "--out", str(out)]) == EXIT_HOLDS
    path = out / "clique-clarke-maxmin.json"
    assert parse_instance(path.read_text()).meta["has_clique"] is False
    assert main(["test", str(path), "--notion", "clarke", "--polarity", "no",
                 "--epsilon", "1/3"]) == EXIT_HOLDS


def test_gen_cnn_meta(files, tmp_path):
    g = files("c5.txt", "5 5\n1 2\n2 3\n3 4\n4 5\n1 5\n")
    out = tmp_path / "out"
    assert main(["gen", "--family", "cnn-frechet", "--graph", g, "-k", "3",
                 "--repr", "maxmin", "--out", str(out)]) == EXIT_HOLDS
    inst = parse_instance((out / "cnn-frechet-maxmin.json").read_text())
    assert inst.meta["has_clique"] is False and inst.meta["source"] == "cnn"


def test_gen_errors(files, tmp_path):
    g = files("k3.txt", "3 3\n1 2\n1 3\n2 3\n")
    assert main(["gen", "--family", "clique-frechet", "--graph", g, "-k", "1",
                 "--out", str(tmp_path)]) == EXIT_ERROR
    bad = files("bad.txt", "3 2\n1 2\n")
    assert main(["gen", "--family", "clique-frechet", "--graph", bad, "-k", "2",
                 "--out", str(tmp_path)]) == EXIT_ERROR


def test_audit(capsys, monkeypatch):
    monkeypatch.setenv("PASTAT_SEED", "3")
    assert main(["audit", "--sweep", "graphs", "--max-n", "3", "--quiet"]) == EXIT_HOLDS
    assert main(["audit", "--sweep", "polytopes", "--count", "8"]) == EXIT_HOLDS
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert len(lines) == 8 and all(r["match"] for r in lines)
    assert main(["audit", "--sweep", "graphs", "--max-n", "3", "--quiet", "--inject-fault"]) == EXIT_FAILS
    assert "mismatch" in capsys.readouterr().err


def test_bench(capsys):
    assert main(["bench", "--n-range", "3..5", "--k-range", "2", "--json"]) == EXIT_HOLDS
    rows = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [r["N"] for r in rows] == [3, 4, 5] and all(r["dim"] == 4 for r in rows)
    assert main(["bench", "--n-range", "4", "--k-range", "2,3"]) == EXIT_HOLDS
    table = capsys.readouterr().out.splitlines()
    assert table[0].split()[:5] == ["family", "graph", "N", "k", "dim"]
    assert [ln.split()[4] for ln in table[1:]] == ["4", "6"]
    assert main(["bench", "--n-range", "x"]) == EXIT_ERROR


@pytest.mark.skipif(shutil.which("pastat") is None, reason="console script not installed")
def test_console_script(files):
    pos = files("abs.json", serialize_instance(abs_t()))
    r = subprocess.run(["pastat", "test", pos, "--json"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["holds"] is True
