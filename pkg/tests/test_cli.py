import csv
import io
import json
import subprocess
import sys

import pytest

from cesolve import cli, spectrum
from cesolve.model import PhysicalParams


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    body = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def header(text):
    first = text.splitlines()[0]
    assert first.startswith("# cesolve ")
    return json.loads(first[len("# cesolve "):])


def test_spectrum_rows_match_library(capsys):
    code, out, _ = run(capsys, "spectrum", "--v1", "-1.5", "--v2", "0.2", "--n-max", "4")
    assert code == 0
    rows = table(out)
    assert [int(r["n"]) for r in rows] == [1, 2, 3, 4]
    ref = spectrum.bound_states(PhysicalParams(v1=-1.5, v2=0.2), 4)
    for r, lev in zip(rows, ref):
        assert float(r["E"]) == lev.energy  # 17 significant digits round-trip
        assert r["method"] == "exact"
    cfg = header(out)
    assert cfg["params"]["v2"] == 0.2 and cfg["n_max"] == 4


@pytest.mark.parametrize("method", ["approx10", "iteration"])
def test_spectrum_methods(capsys, method):
    code, out, _ = run(capsys, "spectrum", "--v2", "0.3", "--method", method)
    assert code == 0
    assert all(r["method"].startswith(method) for r in table(out))


@pytest.mark.parametrize("argv", [
    ["spectrum", "--v1", "1.0"],
    ["spectrum", "--n-max", "0"],
    ["spectrum", "--mass", "-1"],
    ["spectrum", "--method", "bogus"],
    ["nonsense"],
    ["spectrum", "--preset", "fig2"],
    ["curves", "--w-min", "2", "--w-max", "1"],
    ["verify", "--override", "1=abc"],
])
def test_invalid_input_exit_code(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_no_partial_file_on_failure(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _, _ = run(capsys, "spectrum", "--v1", "2.0", "--output", str(target))
    assert code == 2
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_output_file(tmp_path, capsys):
    target = tmp_path / "levels.csv"
    assert run(capsys, "spectrum", "--output", str(target))[0] == 0
    assert len(table(target.read_text())) == 3


def test_curves_counts_and_single_branch(capsys):
    code, out, _ = run(capsys, "curves", "--preset", "fig2")
    assert code == 0
    rows = table(out)
    assert len(rows) == 8 * 25
    assert out.rstrip().splitlines()[-1].startswith("# max_rel_error=")
    code, out, _ = run(capsys, "curves", "--n", "3", "--w-min", "-1", "--w-max", "1",
                       "--step", "0.5")
    rows = table(out)
    assert code == 0 and len(rows) == 5 and {r["n"] for r in rows} == {"3"}


def test_potential_preset(capsys):
    code, out, _ = run(capsys, "potential", "--preset", "fig1b")
    assert code == 0
    rows = table(out)
    assert sorted({float(r["V2"]) for r in rows}) == [-1.0, -0.85, -0.7, 0.0]
    assert len(rows) == 4 * 250


def test_iterations_preset(capsys):
    code, out, _ = run(capsys, "iterations", "--preset", "fig3")
    assert code == 0
    rows = table(out)
    assert {int(r["k"]) for r in rows} == {1, 2, 3}
    assert len(rows) == 21 * 3
    v2_zero = [r for r in rows if float(r["V2"]) == 0.0]
    # with V2 = 0 the iteration sits at its fixed point from the first step
    assert len({r["E_iter"] for r in v2_zero}) == 1


def test_verify_json_and_override(capsys):
    code, out, _ = run(capsys, "verify", "--criteria", "1,2", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["all_passed"] and [c["id"] for c in rep["criteria"]] == [1, 2]
    code, out, _ = run(capsys, "verify", "--criteria", "1", "--override", "1=1e-30")
    assert code == 1
    assert out.startswith("[FAIL] criterion  1")


def test_deterministic_output(capsys):
    a = run(capsys, "curves", "--n", "2", "--step", "0.5")[1]
    b = run(capsys, "curves", "--n", "2", "--step", "0.5")[1]
    assert a == b


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cesolve", "spectrum", "--n-max", "1"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert float(table(res.stdout)[0]["E"]) == pytest.approx(-0.5518973814, abs=1e-9)
