import json
import subprocess
import sys

from sboxevo.cli import main
from sboxevo.sbox import inverse_map, read_sbox, write_sbox

SMALL = ["--budget", "200", "--pop", "20", "--runs", "2"]


def last_json(out: str) -> dict:
    return json.loads(out.strip().splitlines()[-1])


def test_reference_stdout(capsys):
    assert main(["reference", "--n", "4"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("n=4\n")
    assert last_json(out) == {"n": 4, "delta": 4, "beta": 6, "bal": 0, "degree": 3}


def test_reference_gold_to_file(tmp_path, capsys):
    path = tmp_path / "gold.txt"
    assert main(["reference", "--n", "5", "--map", "gold:1", "--out", str(path)]) == 0
    rep = last_json(capsys.readouterr().out)
    assert (rep["delta"], rep["beta"], rep["degree"]) == (2, 2, 2)
    assert read_sbox(path).n == 5


def test_reference_bad_map(capsys):
    assert main(["reference", "--n", "4", "--map", "cube"]) == 2
    assert "unknown map" in capsys.readouterr().err


def test_evaluate(tmp_path, capsys):
    path = tmp_path / "inv.txt"
    write_sbox(inverse_map(6), path)
    ddt_path, bct_path = tmp_path / "ddt.csv", tmp_path / "bct.csv"
    assert main(["evaluate", "--sbox", str(path), "--ddt", str(ddt_path),
                 "--bct", str(bct_path)]) == 0
    assert last_json(capsys.readouterr().out)["beta"] == 4
    assert len(ddt_path.read_text().splitlines()) == 64
    assert bct_path.read_text().splitlines()[0] == ",".join(["64"] * 64)


def test_evaluate_unbalanced(tmp_path, capsys):
    path = tmp_path / "z.txt"
    path.write_text("n=3\n" + " ".join(["0"] * 8) + "\n")
    assert main(["evaluate", "--sbox", str(path), "--bct", str(tmp_path / "b.csv")]) == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_evaluate_missing_file(tmp_path):
    assert main(["evaluate", "--sbox", str(tmp_path / "nope")]) == 2


def test_evolve_and_summarize(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["evolve", "--encoding", "perm", "ca", "--n", "4", "--algo", "ea", "rs",
                 "--out", str(out), *SMALL]) == 0
    printed = capsys.readouterr().out
    assert printed.splitlines()[0] == "size,encoding,algorithm,min,avg,std,balanced_runs"
    assert len(printed.splitlines()) == 5
    assert len(list((out / "runs").glob("*.json"))) == 8
    assert (out / "summary.csv").read_text() == printed

    assert main(["summarize", "--dir", str(out)]) == 0
    assert capsys.readouterr().out == printed
    assert main(["summarize", "--dir", str(out), "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {r["encoding"] for r in rows} == {"permutation", "ca"}


def test_nsga2(tmp_path, capsys):
    out = tmp_path / "mo"
    assert main(["nsga2", "--encoding", "perm", "--n", "4", "--out", str(out), *SMALL]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "beta,delta,encoding"
    assert (out / "pareto_union.csv").read_text().splitlines() == lines


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("sizes = 4\nencodings = int\nruns = 3\nbudget = 100\npop_size = 10\n")
    out = tmp_path / "o"
    assert main(["evolve", "--config", str(cfg), "--runs", "1", "--out", str(out)]) == 0
    assert capsys.readouterr().out.splitlines()[1].startswith("4,integer,ea,")
    [rec] = (out / "runs").glob("*.json")
    d = json.loads(rec.read_text())
    assert (d["evaluations"], d["config"]["pop_size"]) == (100, 10)


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("speed = fast\n")
    assert main(["evolve", "--config", str(cfg)]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sboxevo", "reference", "--n", "6"],
                          capture_output=True, text=True, check=True)
    assert last_json(proc.stdout)["beta"] == 4
