import json
import subprocess
import sys
from fractions import Fraction

from wheelworks.cli import EXIT_CAPACITY, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fpl_count(capsys, tmp_path):
    code, out, _ = run(capsys, "fpl", "count", "--n", "3")
    data = json.loads(out)
    assert code == EXIT_OK and len(data["counts"]) == 5
    assert sum(r["count"] for r in data["counts"]) == 7
    code, out, _ = run(capsys, "fpl", "count", "--n", "1")
    assert json.loads(out)["counts"] == [{"pattern": "()", "count": 1}]
    code, _, err = run(capsys, "fpl", "count", "--n", "9")
    assert code == EXIT_CAPACITY and "cap" in err
    target = tmp_path / "c.csv"
    code, _, _ = run(capsys, "--format", "csv", "fpl", "count", "--n", "2", "--out", str(target))
    assert target.read_text() == "pattern,count\n()(),1\n(()),1\n"


def test_wheel_psi(capsys):
    code, out, _ = run(capsys, "wheel", "psi", "--matching", "()()", "--q", "omega", "--eval-at-one")
    assert code == EXIT_OK and json.loads(out)["value"] == "1"
    code, out, _ = run(capsys, "wheel", "psi", "--matching", "(())")
    poly = json.loads(out)["polynomial"]
    assert poly["nvars"] == 4 and len(poly["terms"]) == 4
    code, out, _ = run(capsys, "--format", "pretty", "wheel", "psi", "--matching", "(())")
    assert out.startswith("# nvars=4")
    code, _, _ = run(capsys, "wheel", "psi", "--matching", "(()")
    assert code == EXIT_USAGE


def test_loop_stationary(capsys):
    code, out, _ = run(capsys, "loop", "stationary", "--n", "4")
    data = json.loads(out)
    assert code == EXIT_OK and data["source"] == "hamiltonian"
    assert len(data["counts"]) == 14 and sum(int(r["count"]) for r in data["counts"]) == 42
    code, out, _ = run(capsys, "loop", "stationary", "--n", "3", "--method", "markov", "--p", "1/2")
    data = json.loads(out)
    assert data["source"] == "markov"
    assert sum(Fraction(r["count"]) for r in data["counts"]) == 1
    code, _, _ = run(capsys, "loop", "stationary", "--n", "13")
    assert code == EXIT_CAPACITY


def test_bad_rational_is_usage_error(capsys):
    assert main(["loop", "stationary", "--n", "3", "--method", "markov", "--p", "x"]) == EXIT_USAGE
    assert main(["loop", "stationary", "--n", "3", "--method", "markov", "--p", "2"]) == EXIT_USAGE


def test_zuber_verify(capsys):
    code, out, _ = run(capsys, "zuber", "verify", "--pi1", "()()", "--pi2", "(())")
    data = json.loads(out)
    assert code == EXIT_OK and data["pass"]["all"] and data["observed_degree"] == 1
    code, out, _ = run(capsys, "zuber", "verify", "--pi1", "(())", "--pi2", "(())")
    data = json.loads(out)
    assert code == EXIT_OK and data["observed_degree"] == 0 and data["coefficients"] == ["1"]
    code, _, _ = run(capsys, "zuber", "verify", "--pi1", "(", "--pi2", "()")
    assert code == EXIT_USAGE
    # two samples cannot show degree 2: the report says so and the exit code is 1
    code, out, _ = run(capsys, "zuber", "verify", "--pi1", "()()", "--pi2", "()()", "--mmax", "1")
    assert code == EXIT_VERIFY and not json.loads(out)["pass"]["degree"]


def test_usage_errors(capsys):
    assert main(["selftest", "--level", "bogus"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


def test_cache_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("WHEELWORKS_CACHE", str(tmp_path))
    code, out1, _ = run(capsys, "fpl", "count", "--n", "4")
    code, out2, _ = run(capsys, "fpl", "count", "--n", "4")
    assert out1 == out2 and (tmp_path / "fpl-counts-n4-ccw.json").exists()


def test_selftest_smoke(capsys):
    code, out, err = run(capsys, "selftest", "--level", "smoke")
    data = json.loads(out)
    assert code == EXIT_OK and data["passed"] and len(data["criteria"]) == 12
    assert err.count("[PASS]") == 12


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wheelworks", "fpl", "count", "--n", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["n"] == 2
