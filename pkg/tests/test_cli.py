import subprocess
import sys

import pytest

from ordsec.cli import main
from ordsec.instances import load_instance


def test_gen_writes_instance(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "--problem", "general", "--n", "6", "--seed", "2", "--out", str(out)]) == 0
    assert load_instance(out).n == 6


def test_run_from_config(tmp_path, capsys):
    cfg = tmp_path / "c.txt"
    cfg.write_text("ordsec v1 config\nproblem: bipartite\nn: 5\ntrials: 20\nseed: 4\n")
    assert main(["run", str(cfg), "--format", "csv"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("experiment_id,instance_id")
    assert len(out) == 21


def test_run_overrides_and_summary(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["run", "--problem", "indepset", "--n", "8", "--trials", "10", "--p", "0.5",
                 "--out", str(out)]) == 0
    assert out.exists() and (tmp_path / "r.csv.summary").exists()
    assert "p: 0.5" in capsys.readouterr().out


@pytest.mark.parametrize("argv, code", [
    (["run", "--problem", "nonsense", "--n", "4"], 2),
    (["run", "--problem", "general", "--n", "20", "--trials", "1"], 4),
    (["run", "/no/such/config"], 2),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code


def test_feasibility_exit_code(monkeypatch):
    from ordsec.harness import PROBLEMS

    monkeypatch.setattr(type(PROBLEMS["general"]), "feasible", lambda self, i, s: False)
    assert main(["run", "--problem", "general", "--n", "5", "--trials", "1"]) == 3


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    assert capsys.readouterr().out.count("[PASS]") == 5


def test_lower_bound_small(capsys):
    assert main(["lower-bound", "--n", "16", "--trials", "20", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("n,k,threshold")
    assert lines[1].startswith("16,4,")


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "ordsec.cli", "gen", "--problem", "matroid", "--n", "4"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("ordsec v1 matroid")
