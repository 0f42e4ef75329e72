from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from treechk.cli import main
from treechk.constructions import gen_binary, gen_k_rake, gen_path, gen_star
from treechk.core import ColoredGraph, read_trees, write_trees


@pytest.fixture
def trees(tmp_path):
    paths = {}
    for name, t in (("p6", gen_path(6)), ("star", gen_star(5)), ("rake", gen_k_rake(2, 3)), ("bin", gen_binary(3))):
        f = tmp_path / f"{name}.json"
        write_trees(str(f), [t])
        paths[name] = str(f)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- check

def test_check_accept_and_reject(capsys, trees):
    code, out, _ = run(capsys, "check", trees["p6"], "--checker", "paths")
    assert code == 0 and json.loads(out) == {"accept": True, "rejecting_vertex": None}
    code, out, _ = run(capsys, "check", trees["star"], "--checker", "paths")
    assert code == 1 and json.loads(out)["accept"] is False
    code, _, _ = run(capsys, "check", trees["rake"], "--checker", "rake:2")
    assert code == 0


def test_check_input_errors(capsys, trees, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"c":1,"colors":[1,1,1],"edges":[[0,1],[1,2],[2,0]]}')
    code, _, err = run(capsys, "check", str(bad), "--checker", "paths")
    assert code == 2 and err.startswith("treechk: error:")
    assert run(capsys, "check", str(tmp_path / "missing.json"), "--checker", "paths")[0] == 2
    assert run(capsys, "check", trees["p6"])[0] == 2
    assert run(capsys, "check", trees["p6"], "--checker", "nonsense")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_check_language_checker(capsys, tmp_path):
    f = tmp_path / "w.json"
    assert run(capsys, "generate", "--family", "word", "--word", "1 2 3", "--encoding", "star", "--d", "2",
               "--out", str(f))[0] == 0
    assert run(capsys, "check", str(f), "--language", "l1", "--encoding", "star", "--depth", "2")[0] == 0
    g = tmp_path / "w2.json"
    run(capsys, "generate", "--family", "word", "--word", "1 3", "--encoding", "star", "--d", "2", "--out", str(g))
    assert run(capsys, "check", str(g), "--language", "l1", "--encoding", "star", "--depth", "2")[0] == 1


def test_checker_json_file(capsys, tmp_path, trees):
    from treechk.checkers import preset

    spec = tmp_path / "ch.json"
    spec.write_text(json.dumps(preset("binary").to_dict()))
    assert run(capsys, "check", trees["p6"], "--checker", str(spec))[0] == 1


# ---------------------------------------------------------------- generate

def test_generate_single_and_batch(capsys, tmp_path):
    f = tmp_path / "r.json"
    assert run(capsys, "generate", "--family", "rake", "--params", "k=2,l=4", "--out", str(f))[0] == 0
    assert read_trees(str(f))[0].n == 16
    code, out, _ = run(capsys, "generate", "--family", "path", "--params", "n=3")
    assert code == 0 and json.loads(out)["edges"] == [[0, 1], [1, 2]]
    d = tmp_path / "batch"
    assert run(capsys, "generate", "--family", "increasing", "--range", "i=2..6", "--out", str(d))[0] == 0
    rows = list(csv.DictReader(open(d / "summary.csv")))
    assert [int(r["i"]) for r in rows] == [2, 3, 4, 5, 6]
    assert len(list(d.glob("increasing_i*.json"))) == 5


def test_generate_exact_reports_target(capsys, tmp_path):
    d = tmp_path / "exact"
    code = main(["generate", "--family", "exact", "--D", "sqrt", "--language", "l2", "--encoding", "star",
                 "--d", "2", "--range", "p=2,3,4", "--out", str(d)])
    assert code == 0
    for r in csv.DictReader(open(d / "summary.csv")):
        assert r["diameter"] == r["target"]


def test_generate_errors(capsys):
    assert run(capsys, "generate", "--family", "rake", "--params", "k=2,l=1")[0] == 2
    assert run(capsys, "generate", "--family", "path", "--params", "n")[0] == 2
    assert run(capsys, "generate", "--family", "path", "--range", "n=1..3")[0] == 2
    assert run(capsys, "generate", "--family", "word")[0] == 2
    assert run(capsys, "generate", "--family", "path", "--params", "n=3", "--range", "n=x..y")[0] == 2


# ---------------------------------------------------------------- landscape, gapprobe, fit

def test_landscape_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "landscape", "--checker", "paths", "--nmax", "6")
    assert code == 0
    rows = list(csv.DictReader(out.splitlines()))
    assert [(r["n"], r["min_diameter"]) for r in rows] == [(str(n), str(n - 1)) for n in range(2, 7)]
    f = tmp_path / "land.csv"
    assert run(capsys, "landscape", "--checker", "binary", "--nmax", "12", "--out", str(f))[0] == 0
    assert f.read_text().startswith("n,accepted_count")


def test_landscape_respects_cap(capsys, monkeypatch):
    monkeypatch.setenv("TREECHK_CAP", "20")
    code, out, _ = run(capsys, "landscape", "--checker", "accept-all", "--nmax", "9")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0 and rows[-1]["truncated"] == "true"


def test_gapprobe(capsys):
    code, out, _ = run(capsys, "gapprobe", "--checker", "paths", "--nmax", "8")
    assert code == 0 and json.loads(out)["kind"] == "LinearEvidence"


def test_fit(capsys, tmp_path):
    code, out, _ = run(capsys, "fit", "--family", "rake", "--params", "k=2", "--range", "l=2,4,8,16,32,64",
                       "--which", "min", "--candidate", "Sqrt")
    assert code == 0 and json.loads(out)["verdict"] == "pass"
    code, out, _ = run(capsys, "fit", "--family", "rake", "--params", "k=2", "--range", "l=2,4,8,16,32,64",
                       "--which", "min", "--candidate", "Constant")
    assert code == 1 and json.loads(out)["verdict"] == "fail"
    f = tmp_path / "land.csv"
    main(["landscape", "--checker", "paths", "--nmax", "12", "--out", str(f)])
    assert run(capsys, "fit", "--csv", str(f), "--candidate", "Linear")[0] == 0
    assert run(capsys, "fit", "--csv", str(f), "--candidate", "Bogus")[0] == 2


# ---------------------------------------------------------------- surgery

def test_surgery_graft_and_pump(capsys, tmp_path, trees):
    out = tmp_path / "g.json"
    code, text, _ = run(capsys, "surgery", "graft", "--tree", trees["p6"], "--uv", "3,4", "--tree2", trees["star"],
                        "--u2v2", "1,0", "--out", str(out))
    assert code == 0 and json.loads(text)["n"] == read_trees(str(out))[0].n == 8
    code, text, _ = run(capsys, "surgery", "pump", "--tree", trees["p6"], "--i", "3", "--d", "1",
                        "--out", str(out))
    info = json.loads(text)
    assert code == 0 and info["n_out"] == info["n_in"] + 2 * info["c2"]
    assert run(capsys, "surgery", "pump", "--tree", trees["p6"])[0] == 2
    assert run(capsys, "surgery", "graft", "--tree", trees["p6"], "--uv", "0,3", "--u2v2", "0,1",
               "--out", str(out))[0] == 2


def test_surgery_duplicate_and_order(capsys, tmp_path, trees):
    cyc = ColoredGraph((1,) * 6, tuple((i, (i + 1) % 6) for i in range(6)), 1)
    f = tmp_path / "c6.json"
    f.write_text(json.dumps(cyc.to_json()))
    out = tmp_path / "c12.json"
    code, text, _ = run(capsys, "surgery", "duplicate", "--tree", str(f), "--uv", "0,1", "--out", str(out))
    assert code == 0 and json.loads(text) == {"n": 12}
    rakes = tmp_path / "rakes.json"
    write_trees(str(rakes), [gen_k_rake(2, ell) for ell in range(2, 6)])
    code, text, _ = run(capsys, "surgery", "order", "--tree", str(rakes))
    assert code == 0 and json.loads(text)["strict"] is True


# ---------------------------------------------------------------- enumerate, count-heights, config

def test_enumerate(capsys, tmp_path):
    assert run(capsys, "enumerate", "--n", "8")[1].strip() == "23"
    f = tmp_path / "bin.json"
    code, out, _ = run(capsys, "enumerate", "--n", "10", "--checker", "binary", "--out", str(f))
    assert code == 0 and int(out) == len(read_trees(str(f))) == 2
    # 2-colored free trees on 6 vertices, checked against networkx
    assert run(capsys, "enumerate", "--n", "6", "--c", "2")[1].strip() == "189"


def test_enumerate_cap(capsys, monkeypatch):
    monkeypatch.setenv("TREECHK_CAP", "5")
    code, _, err = run(capsys, "enumerate", "--n", "9")
    assert code == 2 and "treechk: error:" in err


def test_count_heights(capsys):
    assert run(capsys, "count-heights", "--d", "2", "--k", "6")[1].strip() == "6"
    assert run(capsys, "count-heights", "--d", "2", "--k", "6", "--at-most")[1].strip() == "7"
    assert run(capsys, "count-heights", "--d", "2", "--k", "0")[0] == 2


def test_config_file(capsys, tmp_path, trees):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# defaults\nchecker = paths\n")
    assert run(capsys, "--config", str(cfg), "check", trees["p6"])[0] == 0
    # flags override the file
    assert run(capsys, "--config", str(cfg), "check", trees["p6"], "--checker", "binary")[0] == 1
    jcfg = tmp_path / "cfg.json"
    jcfg.write_text(json.dumps({"nmax": "5", "checker": "paths"}))
    code, out, _ = run(capsys, "--config", str(jcfg), "landscape")
    assert code == 0 and out.strip().splitlines()[-1].startswith("5,")


def test_module_entry_point(trees):
    proc = subprocess.run([sys.executable, "-m", "treechk", "check", trees["p6"], "--checker", "paths"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and '"accept": true' in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "treechk", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "count-heights" in proc.stdout
