import csv
import io
import json
import math
import shutil
import subprocess
import sys
from importlib import resources

import numpy as np
import pytest

from eprgames import cli, measurement

PD_TEXT = resources.files("eprgames").joinpath("data/pd.json").read_text()


@pytest.fixture
def pd_file(tmp_path):
    path = tmp_path / "pd.json"
    path.write_text(PD_TEXT)
    return str(path)


@pytest.fixture
def write_json(tmp_path):
    def write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs(capsys, pd_file):
    code, out, _ = run(capsys, "coeffs", pd_file)
    assert code == 0
    a = json.loads(out)["a"]
    assert a == {"000": 4, "001": 1.75, "010": 1.75, "011": 0, "100": -1, "101": -0.25, "110": -0.25, "111": 0}
    code, out2, _ = run(capsys, "coeffs", "--game", pd_file)
    assert out2 == out


def test_coeffs_constant_game(capsys, write_json):
    path = write_json("c.json", {"players": 3, "payoffs": {f"{i:03b}": [2, 2, 2] for i in range(8)}})
    code, out, _ = run(capsys, "coeffs", path)
    doc = json.loads(out)
    assert code == 0
    for table in doc.values():
        assert table["000"] == 2
        assert all(v == 0 for k, v in table.items() if k != "000")


def test_coeffs_input_errors(capsys, write_json, tmp_path):
    doc = json.loads(PD_TEXT)
    del doc["payoffs"]["101"]
    code, _, err = run(capsys, "coeffs", write_json("bad.json", doc))
    assert code == 2 and "101" in err
    code, _, err = run(capsys, "coeffs", write_json("broken.json", "{oops"))
    assert code == 2 and "malformed" in err
    code, _, _ = run(capsys, "coeffs", str(tmp_path / "missing.json"))
    assert code == 2
    code, _, _ = run(capsys, "coeffs")
    assert code == 2


def ne_list(capsys, pd_file, write_json, state):
    code, out, err = run(capsys, "ne", pd_file, "--state", write_json("s.json", state))
    assert code == 0, err
    return json.loads(out)


def test_ne_classical(capsys, pd_file, write_json):
    res = ne_list(capsys, pd_file, write_json, {"family": "ghz", "cos_gamma": 1})
    assert [r["ne"] for r in res] == ["(0,0,0)"]
    assert res[0]["payoffs"] == [1, 1, 1]
    res = ne_list(capsys, pd_file, write_json, {"family": "ghz", "gamma": 0})
    assert res[0]["payoffs"] == [1, 1, 1]


def test_ne_maximal_entanglement(capsys, pd_file, write_json):
    res = ne_list(capsys, pd_file, write_json, {"family": "ghz", "cos_gamma": 0})
    names = [r["ne"] for r in res]
    assert {"(1,0,0)", "(0,1,0)", "(0,0,1)"} <= set(names)
    assert names == sorted(names, key=lambda n: (n == "continuum", n))


def test_ne_high_phi(capsys, pd_file, write_json):
    res = ne_list(capsys, pd_file, write_json, {"family": "symmetric", "phi": math.pi, "delta": 0, "cos_gamma": 1})
    hit = [r for r in res if r["ne"] == "(1,1,1)"]
    assert hit and hit[0]["payoffs"] == [3.33333333333] * 3


def test_ne_w_state(capsys, pd_file, write_json):
    res = ne_list(capsys, pd_file, write_json, {"family": "w"})
    assert all(r["kind"] in ("pure-corner", "interior-mixed", "continuum") for r in res)


def test_ne_preconditions(capsys, pd_file, write_json):
    asym = {"players": 3, "payoffs": {f"{i:03b}": [i, 0, 1] for i in range(8)}}
    game = write_json("asym.json", asym)
    state = write_json("sym.json", {"family": "symmetric", "phi": 1.0})
    code, _, err = run(capsys, "ne", game, "--state", state)
    assert code == 3 and "precondition" in err
    # GHZ with an asymmetric game is fine (probability sums)
    code, _, _ = run(capsys, "ne", game, "--state", write_json("g.json", {"family": "ghz", "gamma": 0.3}))
    assert code == 0
    # rotors that break the classical embedding
    tilt = write_json("tilt.json", {"family": "ghz", "rotors": {"A": [0.5, 0, 0]}})
    code, _, _ = run(capsys, "ne", pd_file, "--state", tilt)
    assert code == 3


@pytest.mark.parametrize(
    "state",
    [
        {"family": "qqq"},
        {"family": "ghz", "gamma": 4.0},
        {"family": "ghz", "cos_gamma": 1.5},
        {"family": "ghz", "gamma": 1, "cos_gamma": 0.5},
        {"family": "ghz", "gamma": "x"},
        {"family": "ghz", "rotors": {"D": [0, 0, 0]}},
        {"family": "ghz", "rotors": {"A": [0, 0]}},
        {"family": "ghz", "colour": 1},
        [1, 2],
    ],
)
def test_bad_state_files(capsys, pd_file, write_json, state):
    code, _, _ = run(capsys, "ne", pd_file, "--state", write_json("s.json", state))
    assert code == 2


def sweep_rows(capsys, pd_file, *axes, family="ghz"):
    args = ["sweep", pd_file, "--family", family]
    for a in axes:
        args += ["--axis", a]
    code, out, err = run(capsys, *args)
    assert code == 0, err
    return out, list(csv.reader(io.StringIO(out)))


def test_sweep_csv(capsys, pd_file):
    out, rows = sweep_rows(capsys, pd_file, "cos_gamma=-1:1:0.01")
    assert rows[0] == ["cos_gamma", "ne_set", "pi_A", "pi_B", "pi_C"]
    assert ["0", "(1,0,0)", "4.5", "4", "4"] in rows
    branch = [r for r in rows[1:] if r[1] == "(0,0,0)"]
    assert branch
    for c, _, pa, pb, pc in branch:
        assert float(pa) == pytest.approx(3.5 - 2.5 * float(c), abs=1e-11)
        assert pa == pb == pc
    assert "\r\n" not in out and out.endswith("\n")


def test_sweep_byte_stable(capsys, pd_file, tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("EPRGAMES_THREADS", threads)
        target = tmp_path / f"out{threads}.csv"
        code, _, _ = run(capsys, "sweep", pd_file, "--axis", "cos_gamma=-1:1:0.05", "--out", str(target))
        assert code == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    assert b"\r" not in outs[0]


def test_sweep_single_row(capsys, pd_file):
    _, rows = sweep_rows(capsys, pd_file, "cos_gamma=1:1:5")
    assert len(rows) == 2


def test_sweep_symmetric_json(capsys, pd_file):
    code, out, _ = run(
        capsys, "sweep", pd_file, "--family", "symmetric", "--axis", "cos_gamma=0.6:0.7:0.01", "--axis", "phi=1.5707963267949", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["family"] == "symmetric"
    with_000 = [p["params"]["cos_gamma"] for p in doc["points"] if any(e["ne"] == "(0,0,0)" for e in p["equilibria"])]
    assert min(with_000) == pytest.approx(0.67)


@pytest.mark.parametrize("axis", ["cos_gamma", "cos_gamma=1:0:0.1", "cos_gamma=a:b:c", "theta=0:1:0.1", "cos_gamma=0:1:-1"])
def test_sweep_bad_axis(capsys, pd_file, axis):
    code, _, _ = run(capsys, "sweep", pd_file, "--axis", axis)
    assert code == 2


def test_sweep_needs_axis_and_symmetric_game(capsys, pd_file, write_json):
    assert run(capsys, "sweep", pd_file)[0] == 2
    asym = write_json("asym.json", {"players": 3, "payoffs": {f"{i:03b}": [i, 0, 1] for i in range(8)}})
    assert run(capsys, "sweep", asym, "--axis", "cos_gamma=0:1:0.5")[0] == 3


def test_dist(capsys, write_json):
    code, out, _ = run(capsys, "dist", "--state", write_json("s.json", {"family": "w"}))
    assert code == 0
    assert json.loads(out)["100"] == pytest.approx(1 / 3, abs=1e-11)
    assert run(capsys, "dist", "--state", write_json("s.json", {"family": "w"}), "--choices", "13")[0] == 2


def test_verify_ok(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "42", "--trials", "1000")
    doc = json.loads(out)
    assert code == 0 and doc["status"] == "ok"
    assert doc["max_deviation"] <= 1e-10


def test_verify_rejects_zero_trials(capsys):
    assert run(capsys, "verify", "--trials", "0")[0] == 2


def test_verify_detects_corrupted_engine(capsys, monkeypatch):
    real = measurement.distribution

    def corrupted(spec, cfg):
        p = real(spec, cfg).probs.copy()
        p[0, 0, 0] += 1e-6
        p[1, 1, 1] -= 1e-6
        return measurement.OutcomeDistribution(p)

    monkeypatch.setattr(measurement, "distribution", corrupted)
    code, out, _ = run(capsys, "verify", "--seed", "3", "--trials", "5")
    doc = json.loads(out)
    assert code == 1 and doc["status"] == "FAILED"
    assert "offending_config" in doc and len(doc["offending_config"]["rotors"]) == 3


def test_deterministic_json(capsys, pd_file):
    first = run(capsys, "coeffs", pd_file)[1]
    assert run(capsys, "coeffs", pd_file)[1] == first


def test_number_formatting():
    assert cli._num(-0.0) == 0 and str(cli._num(-1e-17 * 0)) == "0"
    assert cli._num(1 / 3) == 0.333333333333
    assert cli._num(np.float64(4.0)) == 4 and isinstance(cli._num(4.0), int)


@pytest.mark.skipif(shutil.which("eprgames") is None, reason="console script not on PATH")
def test_console_script(pd_file):
    proc = subprocess.run(["eprgames", "coeffs", pd_file], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["a"]["100"] == -1


def test_module_entry(pd_file):
    proc = subprocess.run([sys.executable, "-m", "eprgames.cli", "coeffs", pd_file], capture_output=True, text=True)
    assert proc.returncode == 0
