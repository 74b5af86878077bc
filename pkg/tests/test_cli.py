import io
import json
import subprocess
import sys

import pytest

from dhtf.cli import main


@pytest.fixture
def run(capsys, monkeypatch):
    def _run(*argv, stdin=None):
        if stdin is not None:
            monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err
    return _run


def test_translate_prints_program(run):
    code, out, _ = run("translate", "<(p? ; step)*> q")
    assert code == 0
    assert "global: l0 -> q | l1" in out.splitlines()
    assert out.splitlines()[0] == "initial: -> l0"


def test_translate_formats(run):
    code, out, _ = run("translate", "--format", "formulas", "[(step ; step)*] p")
    assert code == 0 and len(out.splitlines()) > 5
    code, out, _ = run("translate", "--format", "telingo", "<(p? ; step)*> q")
    assert out.strip() == "&del{ * (?p ;; &true) . >? q }"
    code, out, err = run("translate", "--format", "telingo", "<step^-> p")
    assert code == 2 and "error" in err
    code, out, _ = run("translate", "--as-constraint", "<step> p")
    assert out.splitlines()[0] == "initial: l0 ->"


def test_eval_until(run, tmp_path):
    trace = tmp_path / "t.txt"
    trace.write_text("p\np\nq\n")
    code, out, _ = run("eval", "--trace", str(trace), "--k", "0", "p until q")
    assert code == 0
    assert out.strip() == "true / 2"


def test_eval_reads_stdin(run):
    code, out, _ = run("eval", "--trace", "-", "--k", "0", "!p", stdin="H: | T: p\n")
    assert out.strip() == "false / 0"
    code, _, err = run("eval", "--trace", "-", "--k", "3", "p", stdin="p\n")
    assert code == 2


def test_check_equiv_counterexample(run):
    code, out, _ = run("check-equiv", "prev true", "false", "--lambda-max", "2")
    assert code == 1
    assert "k=1" in out
    code, out, _ = run("check-equiv", "p until q", "<(p? ; step)*> q", "--lambda-max", "3")
    assert code == 0


def test_json_shape_is_stable(run):
    for argv in (["parse", "p until q"], ["cnf", "<(step;step)^-> p"], ["closure", "p until q"],
                 ["translate", "p until q"], ["check-equiv", "prev true", "false", "--lambda-max", "2"],
                 ["check-nf", "p until q", "--lambda-max", "2"],
                 ["check-faithful", "p until q", "true", "--lambda", "2"]):
        code, out, _ = run(*argv, "--json")
        doc = json.loads(out)
        assert set(doc) == {"command", "status", "data"}
        assert doc["command"] == argv[0]
        assert doc["status"] == ("ok" if code == 0 else "fail")


def test_models_file_and_stdin(run, tmp_path):
    theory = tmp_path / "sos.txt"
    theory.write_text("# keep sending an sos\nalw [(!h)*] (!h -> s)\n")
    code, out, _ = run("models", str(theory), "--lambda", "3", "--equilibrium")
    assert code == 0
    assert out.startswith("# 1 stable models")
    code, out, _ = run("models", "-", "--lambda", "1", "--alphabet", "p", "--json", stdin="")
    assert json.loads(out)["data"]["count"] == 3


def test_check_nf(run):
    code, out, _ = run("check-nf", "[(step ; step)*] p", "--lambda-max", "2", "--full")
    assert code == 0
    assert out.splitlines() == [line for line in out.splitlines() if "pass" in line]
    code, out, _ = run("check-nf", "once p", "--lambda-max", "2")
    assert code == 1
    assert "missing" in out


def test_closure_lines(run):
    code, out, _ = run("closure", "<(p? ; step)*> q")
    assert out.splitlines() == ["<(p? ; step)*> q", "q", "<p? ; step> <(p? ; step)*> q",
                                "<p?> <step> <(p? ; step)*> q", "p", "<step> <(p? ; step)*> q"]


def test_parse_error_exit_code(run):
    code, out, err = run("parse", "p ->")
    assert code == 2
    assert "end of input" in err and "^" in err
    code, out, err = run("parse", "p ->", "--json")
    assert json.loads(out)["status"] == "error"


def test_usage_errors(run):
    assert run()[0] == 2
    assert run("models", "x.txt")[0] == 2
    assert run("models", "missing-file.txt", "--lambda", "1")[0] == 2
    assert run("check-equiv", "p", "q", "--lambda-max", "0")[0] == 2


def test_budget_exceeded(run, monkeypatch):
    code, _, err = run("models", "-", "--lambda", "20", "--alphabet", "a,b", stdin="a\n")
    assert code == 3 and "budget" in err
    monkeypatch.setenv("DHTF_BUDGET", "10")
    code, _, _ = run("check-equiv", "p", "p", "--lambda-max", "3")
    assert code == 3
    code, _, _ = run("check-equiv", "p", "p", "--lambda-max", "3", "--budget", "1000")
    assert code == 0


def test_output_is_deterministic(run):
    outputs = {run("translate", "[(step + p?)*] <step^-> q", "--json", "--seed", "3")[1] for _ in range(3)}
    assert len(outputs) == 1


def test_console_script_entry_point():
    done = subprocess.run([sys.executable, "-m", "dhtf.cli", "parse", "p until q"],
                          capture_output=True, text=True, check=False)
    assert done.returncode == 0
    assert done.stdout.strip() == "<(p? ; step)*> q"
