import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from gconc import cli
from gconc.core import dm_from_pure, isotropic, max_entangled, random_density


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def state_file(tmp_path):
    def make(rho, name="rho.json"):
        p = tmp_path / name
        cli.write_state(str(p), np.asarray(rho))
        return str(p)

    return make


def test_bound_phi_json(state_file, capsys):
    code, out, _ = run(["bound", state_file(dm_from_pure(max_entangled(3)))], capsys)
    assert code == cli.EXIT_OK
    rep = json.loads(out)
    assert rep["final_bound"] == pytest.approx(1.0, abs=1e-10)
    assert rep["d"] == 3 and len(rep["input_digest"]) == 64
    assert rep["timings"] == {}


def test_bound_inconclusive_exit(state_file, capsys):
    code, out, _ = run(["bound", state_file(np.eye(9) / 9)], capsys)
    assert code == cli.EXIT_INCONCLUSIVE
    assert json.loads(out)["final_bound"] == 0.0


def test_bound_byte_identical(state_file, capsys):
    path = state_file(random_density(3, np.random.default_rng(4)))
    _, a, _ = run(["bound", path, "--seed", "3"], capsys)
    _, b, _ = run(["bound", path, "--seed", "3"], capsys)
    assert a == b


def test_bound_text_and_options(state_file, capsys):
    path = state_file(isotropic(3, 0.7))
    code, out, _ = run(["bound", path, "--text", "--no-nf", "--no-lu-opt", "--no-phases", "--timings"], capsys)
    assert code == cli.EXIT_OK
    assert "final bound      0.2" in out
    assert "direct_ms" in out


def test_bound_with_upper(state_file, capsys):
    code, out, _ = run(["bound", state_file(isotropic(3, 0.7)), "--upper-trials", "2"], capsys)
    rep = json.loads(out)
    assert rep["upper_bound"] >= rep["final_bound"] - 1e-6


def test_pure_input_layout(tmp_path, capsys):
    p = tmp_path / "pure.json"
    c = np.eye(2) / math.sqrt(2)
    p.write_text(json.dumps({"pure": {"d": 2, "re": c.tolist()}}))
    code, out, _ = run(["bound", str(p)], capsys)
    assert code == 0 and json.loads(out)["final_bound"] == pytest.approx(1.0)


@pytest.mark.parametrize(
    "content",
    [
        "not json",
        "[1, 2]",
        json.dumps({"d": 2, "re": np.eye(4).tolist()}),  # trace 4
        json.dumps({"d": 3, "re": (np.eye(4) / 4).tolist()}),  # shape mismatch
        json.dumps({"d": 2, "im": np.eye(4).tolist()}),  # missing re
        json.dumps({"pure": {"re": np.ones((2, 2)).tolist()}}),  # unnormalized
        json.dumps({"d": 2, "re": [["a"] * 4] * 4}),
    ],
)
def test_input_errors(tmp_path, capsys, content):
    p = tmp_path / "bad.json"
    p.write_text(content)
    code, _, err = run(["bound", str(p)], capsys)
    assert code == cli.EXIT_INPUT
    assert "error" in err


def test_missing_file(capsys):
    assert run(["bound", "/nonexistent/x.json"], capsys)[0] == cli.EXIT_INPUT


def test_max_dim_rejects(state_file, capsys):
    assert run(["bound", state_file(np.eye(16) / 16), "--max-dim", "3"], capsys)[0] == cli.EXIT_INPUT


def test_curve_csv(capsys):
    code, out, _ = run(["curve", "--d", "4", "--samples", "5"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == list(cli.CURVE_COLUMNS)
    last = rows[-1]
    assert float(last["F"]) == 1.0
    assert float(last["cg_axisym"]) == 1.0 and float(last["c2_normalized"]) == 1.0
    assert float(last["cg_of_F"]) == pytest.approx(1.0)
    mid = rows[3]  # F = 3/4
    assert float(mid["cg_axisym"]) == pytest.approx(0.0, abs=1e-15)
    assert float(mid["c2_axisym"]) == pytest.approx(math.sqrt(8 / 3) / 2)
    assert rows[0]["cg_of_F"] == ""


def test_curve_to_file(tmp_path, capsys):
    p = tmp_path / "c.csv"
    assert run(["curve", "--out", str(p)], capsys)[0] == 0
    assert len(p.read_text().splitlines()) == 102
    assert run(["curve", "--d", "1"], capsys)[0] == cli.EXIT_INPUT


def test_cluster_formats(capsys):
    code, out, _ = run(["cluster", "--qubits", "4"], capsys)
    assert code == 0
    assert "n/a" in out and "0.266667" in out
    code, out, _ = run(["cluster", "--qubits", "4", "--json"], capsys)
    rows = {r["partition"]: r for r in json.loads(out)["rows"]}
    assert rows["(AC)(BD)"]["w_star"] == pytest.approx(4 / 15, abs=1e-9)
    assert rows["(AB)(CD)"]["schmidt_rank"] == 2 and not rows["(AB)(CD)"]["applicable"]
    code, out, _ = run(["cluster", "--qubits", "4", "--csv"], capsys)
    assert len(out.strip().splitlines()) == 4
    assert run(["cluster", "--qubits", "5"], capsys)[0] == cli.EXIT_INPUT


def test_distance(state_file, capsys):
    path = state_file(dm_from_pure(max_entangled(3)))
    code, out, _ = run(["distance", path, "--schmidt-number", "2"], capsys)
    assert code == 0 and float(out) == pytest.approx(1 / math.sqrt(8))
    assert run(["distance", path, "--schmidt-number", "3"], capsys)[0] == cli.EXIT_INPUT


def test_verify_curve(capsys):
    code, out, _ = run(["verify", "--suite", "curve"], capsys)
    assert code == 0 and out.startswith("PASS curve")


def test_bad_option_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["bound"])
    assert exc.value.code == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "gconc", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "0.1.0" in out.stdout
