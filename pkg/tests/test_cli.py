import json
import os
import subprocess
import sys

import pytest

from trigen.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_classify_json_schema(capsys):
    code, doc = run_json(capsys, "classify", "--rank", "2", "--triple", "2,3,7")
    assert code == 0
    assert doc["schema"] == "v1" and doc["command"] == "classify" and doc["seed"] == 0
    assert doc["version"].startswith("0.1.0")
    res = doc["result"]
    assert res["verdict"] == "rigid" and res["S"] == 8 and res["d_u"] == {"2": 4, "3": 2, "7": 2}


def test_classify_table_groups(capsys):
    code, doc = run_json(capsys, "classify", "--family", "C", "--rank", "2", "--isogeny",
                         "simply_connected", "--p", "5", "--triple", "3,3,4")
    assert code == 0 and doc["result"]["verdict"] == "reducible"
    code, _, err = run(capsys, "classify", "--family", "C", "--rank", "2", "--isogeny",
                       "simply_connected", "--triple", "3,3,4")
    assert code == 2 and "characteristic" in err


def test_classify_rejects_non_hyperbolic(capsys):
    code, _, err = run(capsys, "classify", "--rank", "2", "--triple", "2,3,6")
    assert code == 2 and "hyperbolic" in err


def test_bad_arguments_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--rank", "2", "--triple", "2,3"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["nonsense"])
    assert exc.value.code == 2


def test_tables_csv(capsys):
    code, out, _ = run(capsys, "tables", "--which", "4", "--csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# trigen ")
    assert lines[1] == "table,group,p,verdict,triples"
    assert any(line.startswith("4,C2,p!=2,rigid") for line in lines)


def test_cyclo(capsys):
    code, out, _ = run(capsys, "cyclo", "theta", "--c", "2")
    assert code == 0 and out.splitlines()[-1] == "T^3 - 16T"
    code, doc = run_json(capsys, "cyclo", "delta", "--c", "1")
    assert code == 0 and doc["result"]["coeffs"] == ["-6", "1"]


def test_certificate_json(capsys):
    code, doc = run_json(capsys, "certificate", "--p", "2", "--c", "7")
    assert code == 0
    assert doc["result"]["candidate_rs"] == [1, 3]


def test_certificate_exit_codes(capsys):
    code, _, err = run(capsys, "certificate", "--p", "2", "--c", "70")
    assert code == 2 and "error" in err
    code, _, err = run(capsys, "certificate", "--p", "2", "--c", "13", "--max-degree", "4")
    assert code == 3 and "resource limit" in err
    code, _, err = run(capsys, "certificate", "--p", "2", "--c", "5", "--psp")
    assert code == 2 and "isomorphic" in err


def test_census(capsys):
    code, doc = run_json(capsys, "census", "--q", "7", "--triple", "3,3,7", "--samples", "1500")
    assert code == 0 and doc["result"]["found"]
    assert len(doc["result"]["witness"]) == 2
    code, doc = run_json(capsys, "census", "--q", "2", "--triple", "3,3,7")
    assert code == 0 and not doc["result"]["found"] and doc["result"]["exhaustive"]


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "procesi", "--samples", "50", "--p", "7")
    assert code == 0 and "PASS" in out and "FAIL" not in out
    code, doc = run_json(capsys, "verify", "--suite", "rho", "--samples", "10", "--p", "13")
    assert code == 0 and doc["result"]["suites"][0]["ok"]


def test_classdim(capsys):
    code, doc = run_json(capsys, "classdim", "--n", "7", "--jordan", "3,3,1")
    assert code == 0 and doc["result"]["dim"] == 32
    code, doc = run_json(capsys, "classdim", "--n", "6", "--mults", "2,2,1,1")
    assert doc["result"]["dim"] == 26
    code, _, _ = run(capsys, "classdim", "--n", "6", "--mults", "2,2")
    assert code == 2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("RIGIDITY_SEED", "42")
    code, doc = run_json(capsys, "classify", "--rank", "1", "--triple", "2,3,7", "--seed", "3")
    assert doc["seed"] == 42
    monkeypatch.setenv("RIGIDITY_SEED", "x")
    with pytest.raises(SystemExit):
        main(["classify", "--rank", "1", "--triple", "2,3,7"])


def _cli(*argv):
    env = dict(os.environ)
    env.pop("RIGIDITY_SEED", None)
    return subprocess.run([sys.executable, "-m", "trigen.cli", *argv], capture_output=True,
                          text=True, env=env, timeout=300)


def test_outputs_are_byte_identical_across_runs():
    argv = ("verify", "--suite", "reduce", "--samples", "20", "--p", "13", "--seed", "5", "--json")
    a, b = _cli(*argv), _cli(*argv)
    assert a.returncode == 0
    assert a.stdout == b.stdout


def test_threads_give_same_results():
    base = ("verify", "--suite", "all", "--samples", "20", "--p", "7", "--json")
    a = json.loads(_cli(*base).stdout)["result"]
    b = json.loads(_cli(*base, "--threads", "2").stdout)["result"]
    assert a == b
