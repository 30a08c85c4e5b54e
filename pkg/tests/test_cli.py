import json
import math
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from betakw import cli
from betakw.cli import DataFileSpec, dumps, ingest, main
from betakw.errors import ConvergenceError, InputError

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"
REGEN = os.environ.get("BETAKW_REGEN_GOLDEN") == "1"


@pytest.fixture
def in_tests(monkeypatch):
    monkeypatch.chdir(HERE)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -------------------------------------------------------------------- ingest

def test_ingest_pass_through(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("0.2\n0.5\n0.9\n")
    s = ingest(DataFileSpec(str(f)))
    assert s.n == 3 and list(s.values) == [0.2, 0.5, 0.9]


def test_ingest_names_bad_row(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("0.2\n0.0\n0.9\n")
    with pytest.raises(InputError, match="line 2"):
        ingest(DataFileSpec(str(f)))


def test_ingest_rescale(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("6\n3\n")
    s = ingest(DataFileSpec(str(f), rescale=(2.0, 10.0)))
    assert s.values[0] == 0.5 and s.values[1] == 0.125


def test_ingest_empty_and_comments(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("# nothing here\n\n")
    with pytest.raises(InputError):
        ingest(DataFileSpec(str(f)))


def test_ingest_header_and_column_name():
    s = ingest(DataFileSpec(str(HERE / "fixtures" / "proportions.csv"), column="share"))
    t = ingest(DataFileSpec(str(HERE / "fixtures" / "proportions.csv"), column=1))
    assert s.n == 60 and np.array_equal(s.values, t.values)


def test_ingest_whitespace_and_tab(tmp_path):
    f = tmp_path / "d.tsv"
    f.write_text("1\t0.25\n2\t0.75\n")
    assert list(ingest(DataFileSpec(str(f), column=1)).values) == [0.25, 0.75]
    g = tmp_path / "d.txt"
    g.write_text("a  0.1\nb 0.3\n")
    assert list(ingest(DataFileSpec(str(g), column=1)).values) == [0.1, 0.3]


def test_serialise_round_trip(tmp_path):
    x = np.random.default_rng(0).uniform(size=200)
    text = dumps({"x": x.tolist()})
    f = tmp_path / "rt.txt"
    f.write_text("\n".join(json.dumps(v) for v in json.loads(text)["x"]))
    assert np.array_equal(ingest(DataFileSpec(str(f))).values, x)


def test_json_numbers_use_17_digits():
    v = 0.1 + 0.2
    assert dumps(v) == format(v, ".17g")
    assert float(dumps(v)) == v
    assert dumps({"nan": math.nan}) == '{\n  "nan": null\n}'


# ------------------------------------------------------------------ commands

def test_samplesize_example(capsys):
    code, out, err = run(capsys, "samplesize", "--null", "beta", "--a", "0.2", "--b", "3",
                         "--p", "0.6", "--format", "json")
    assert code == 0
    assert json.loads(out)["results"]["n_required"] == 15
    assert "betakw" in err


def test_samplesize_printed_example(capsys):
    code, out, _ = run(capsys, "samplesize", "--null", "beta", "--a", "0.2", "--b", "3",
                       "--p", "0.6", "--format", "json")
    assert json.loads(out)["results"]["n_required"] == 14


def test_pcs_intersection_warns(capsys):
    code, out, _ = run(capsys, "pcs", "--null", "beta", "--a", "1", "--b", "4", "--n", "100",
                       "--format", "json")
    env = json.loads(out)
    assert code == 0
    assert env["results"]["pcs"] == 0.5
    assert any("indistinguishable" in w for w in env["warnings"])


def test_select_is_byte_identical(capsys, in_tests):
    args = ("select", "fixtures/proportions.csv", "--column", "share", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    env = json.loads(a)
    assert set(env) == {"command", "inputs", "results", "tool_version", "seed", "warnings"}


def test_select_with_simulation(capsys, in_tests):
    code, out, _ = run(capsys, "select", "fixtures/beta_20.txt", "--simulate", "200",
                       "--seed", "5", "--workers", "1", "--format", "json")
    env = json.loads(out)
    assert code == 0 and env["seed"] == 5
    assert len(env["results"]["simulated_pcs"]) == 2


def test_text_format(capsys):
    code, out, _ = run(capsys, "moments", "--null", "kumaraswamy", "--alpha", "0.5",
                       "--beta", "2.5")
    assert code == 0 and "am" in out and not out.lstrip().startswith("{")


def test_tables_csv(capsys):
    code, out, _ = run(capsys, "tables", "--which", "3")
    lines = [ln for ln in out.strip().splitlines() if not ln.startswith("#")]
    assert code == 0
    assert lines[0].startswith("shape,")
    assert len(lines) == 7


def test_curve_grid_forms(capsys):
    _, a, _ = run(capsys, "curve", "--null", "beta", "--fixed", "3", "--grid", "0.5:2:4",
                  "--format", "json")
    _, b, _ = run(capsys, "curve", "--null", "beta", "--fixed", "3", "--grid", "0.5,1,1.5,2",
                  "--format", "json")
    assert json.loads(a)["results"] == json.loads(b)["results"]


# ----------------------------------------------------------------- exit codes

def test_exit_input_error(capsys, tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("0.3\n1.5\n")
    code, out, err = run(capsys, "fit", "beta", str(f))
    assert code == 2 and "line 2" in err and out == ""


def test_exit_domain_error(capsys):
    code, _, _ = run(capsys, "samplesize", "--null", "beta", "--a", "1", "--b", "3", "--p", "0.8")
    assert code == 2


def test_exit_convergence_error(capsys, monkeypatch, in_tests):
    def boom(*_a, **_k):
        raise ConvergenceError("no convergence")
    monkeypatch.setattr(cli, "fit", boom)
    code, _, err = run(capsys, "fit", "beta", "fixtures/beta_20.txt")
    assert code == 3 and "no convergence" in err


def test_exit_usage_error():
    proc = subprocess.run([sys.executable, "-m", "betakw.cli", "pcs", "--bogus"],
                          capture_output=True, text=True)
    assert proc.returncode == 64
    proc = subprocess.run([sys.executable, "-m", "betakw.cli", "pcs", "--null", "beta",
                           "--a", "0.5", "--n", "10"], capture_output=True, text=True)
    assert proc.returncode == 64


# ------------------------------------------------------------------- goldens

GOLDEN_CASES = {
    "fit": ["fit", "kumaraswamy", "fixtures/kw_20.txt"],
    "select": ["select", "fixtures/proportions.csv", "--column", "share"],
    "pcs": ["pcs", "--null", "beta", "--a", "0.5", "--b", "2.5", "--n", "100"],
    "pseudo": ["pseudo", "--from", "kumaraswamy", "--alpha", "0.5", "--beta", "2.5"],
    "moments": ["moments", "--null", "beta", "--a", "0.2", "--b", "2.5"],
    "samplesize": ["samplesize", "--null", "beta", "--a", "0.2", "--b", "3", "--p", "0.7"],
    "distance": ["distance", "--a", "2", "--b", "3", "--alpha", "2", "--beta", "3"],
    "curve": ["curve", "--null", "kumaraswamy", "--fixed", "2", "--grid", "0.5,1.5"],
    "simulate": ["simulate", "--null", "beta", "--a", "0.2", "--b", "2.5", "--n", "50",
                 "--reps", "300", "--seed", "7", "--workers", "1"],
    "tables": ["tables", "--which", "5", "--override-b", "2.5", "--reps", "0"],
}


def assert_same_shape(got, want, path="$"):
    assert type(got) is type(want) or {type(got), type(want)} <= {int, float}, path
    if isinstance(want, dict):
        assert list(got) == list(want), path
        for k in want:
            assert_same_shape(got[k], want[k], f"{path}.{k}")
    elif isinstance(want, list):
        assert len(got) == len(want), path
        for i, (g, w) in enumerate(zip(got, want)):
            assert_same_shape(g, w, f"{path}[{i}]")
    elif isinstance(want, float) and path.endswith("argmax"):
        # a maximiser is only determined to about sqrt(machine epsilon)
        assert got == pytest.approx(want, abs=1e-6), path
    elif isinstance(want, float):
        assert got == pytest.approx(want, rel=1e-9, abs=1e-12), path
    else:
        assert got == want, path


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_json(name, capsys, in_tests):
    code, out, _ = run(capsys, *GOLDEN_CASES[name], "--format", "json")
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_text(out)
    want = json.loads(path.read_text())
    assert_same_shape(json.loads(out), want)
