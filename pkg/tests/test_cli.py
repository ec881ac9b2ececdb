import json
import math
import subprocess
import sys

import pytest

from qlr.cli import main
from qlr.core import BlochProjector, Instance, LocalTerm, singlet_psi
from qlr.io import save_instance


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def worst_edge(tmp_path):
    p = tmp_path / "edge.json"
    save_instance(Instance(2, [(0, 1)], [LocalTerm(1.0, BlochProjector(-1.0, 0.0, 0.0))] * 2), p)
    return p


def test_gen_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(["gen", "--kind", "tvc", "--n", "8", "--density", "0.3", "--seed", "42", "--out", str(p)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["kind"] == "tvc" and doc["n"] == 8


def test_gen_bad_density(capsys):
    code, _, err = run(["gen", "--kind", "tvc", "--n", "4", "--density", "0"], capsys)
    assert code == 2 and "density" in err


def test_solve_lr_exact_ratio(worst_edge, capsys):
    code, out, _ = run(["solve", "--input", str(worst_edge), "--algo", "lr", "--exact", "--certify"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["energy"] == pytest.approx(1.0)
    assert rep["ratio"] == pytest.approx(2 + math.sqrt(2), abs=1e-9)
    assert rep["certify"]["ok"] is True
    assert rep["feasible"] is True


def test_solve_algo_mismatch(tmp_path, capsys):
    p = tmp_path / "evc.json"
    save_instance(Instance(2, [(0, 1)], [LocalTerm(1.0)] * 2, "evc", psi=singlet_psi()), p)
    code, _, err = run(["solve", "--input", str(p), "--algo", "lr"], capsys)
    assert code == 2 and "kind/algo mismatch" in err
    code, out, _ = run(["solve", "--input", str(p), "--algo", "evc", "--exact"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["energy"] == pytest.approx(0.0, abs=1e-12)
    assert rep["exact"] == pytest.approx(0.0, abs=1e-10)


def test_solve_invalid_instance_exit_1(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"kind": "tvc", "n": 2, "edges": [{"u": 0, "v": 1}],
                             "vertices": [{"id": 0, "c": -1.0, "bloch": [0, 0, -1]},
                                          {"id": 1, "c": 1.0, "bloch": [0, 0, -1]}]}))
    code, _, err = run(["solve", "--input", str(p)], capsys)
    assert code == 1 and "negative weight" in err


def test_solve_missing_file(capsys):
    code, _, err = run(["solve", "--input", "/nonexistent.json"], capsys)
    assert code == 2 and "no such file" in err


def test_solve_bad_json(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(["solve", "--input", str(p)], capsys)[0] == 2


def test_bench_small_and_threads(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    t = tmp_path / "t.csv"
    assert run(["bench", "--suite", "tvc-small", "--trials", "12", "--seed", "3", "--out", str(a),
                "--timings", str(t)], capsys)[0] == 0
    assert run(["bench", "--suite", "tvc-small", "--trials", "12", "--seed", "3", "--threads", "4",
                "--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "id,seed,n,edges,kind,energy,exact,ratio,delta,gap_error"
    assert len(lines) == 13
    assert t.read_text().splitlines()[0] == "id,wall_ms"


def test_bench_env_threads(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("QLR_THREADS", "2")
    p = tmp_path / "e.csv"
    assert run(["bench", "--suite", "evc-small", "--trials", "6", "--out", str(p)], capsys)[0] == 0
    monkeypatch.setenv("QLR_THREADS", "x")
    assert run(["bench", "--suite", "evc-small", "--trials", "1"], capsys)[0] == 2


def test_gadget_command(tmp_path, capsys):
    j = tmp_path / "g.json"
    code, out, _ = run(["gadget", "--delta-list", "8,16", "--json", str(j)], capsys)
    assert out.splitlines()[0].startswith("delta,dim,gap_error")
    assert len(out.splitlines()) == 3
    assert code in (0, 1)
    assert json.loads(j.read_text())["rows"][0]["delta"] == 8.0


def test_gadget_bad_delta_list(capsys):
    assert run(["gadget", "--delta-list", "8,-1"], capsys)[0] == 2


def test_version(capsys):
    code, out, _ = run(["version"], capsys)
    assert code == 0 and out.startswith("qlr ") and "PCG64" in out


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "qlr.cli", "version"], capture_output=True, text=True)
    assert res.returncode == 0 and "qlr" in res.stdout
