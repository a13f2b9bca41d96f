import csv
import io
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from lierf.cli.config import ConfigError, RunConfig, Tolerances, load_config, thread_count
from lierf.cli.main import main
from lierf.cli.report import check, emit_table, make_report
from lierf.cli.suites import SUITES, UnknownSuiteError, parallel_map, run_suite
from lierf.kernels.io import save_kernel
from lierf.kernels.library import shell_kernel
from lierf.kernels.grid import MomentumGrid


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# exit codes

def test_table1_passes(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    assert "3*(Y1,Y2;X1,X2)" in out
    assert "FAIL" not in out


def test_broken_kernel_fails(capsys):
    code, out, _ = run(capsys, "kernel", "--kernel", "broken", "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert rep["pass"] is False
    assert rep["metadata"]["hbar"] == 1


@pytest.mark.parametrize("argv", [["bogus"], [], ["table1", "--format", "xml"],
                                  ["table1", "--grid", "7"], ["kernel", "--kernel", "/no/such.json"],
                                  ["table1", "--seed", "-1"], ["eval", "a[X"], ["eval"]])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == 0


def test_unknown_suite_in_library():
    with pytest.raises(UnknownSuiteError):
        run_suite("nope", RunConfig())


# reports

def test_json_report_reparses(capsys):
    code, out, _ = run(capsys, "jacobi", "--format", "json", "--seed", "3")
    assert code == 0
    rep = json.loads(out)
    assert rep == run_suite("jacobi", load_config(None, {"seed": 3}))
    assert rep["seed"] == 3 and len(rep["checks"]) == 50
    for c in rep["checks"]:
        assert set(c) == {"check", "parameters", "residual", "tolerance", "pass"}
    assert json.dumps(rep, sort_keys=True, indent=2) + "\n" == out


@pytest.mark.parametrize("suite", ["moments", "gram"])
def test_reports_are_bit_reproducible(capsys, suite):
    _, a, _ = run(capsys, suite, "--format", "json", "--seed", "5")
    _, b, _ = run(capsys, suite, "--format", "json", "--seed", "5")
    assert a == b


def test_seed_changes_fixtures(capsys):
    _, a, _ = run(capsys, "jacobi", "--format", "json", "--seed", "1")
    _, b, _ = run(capsys, "jacobi", "--format", "json", "--seed", "2")
    assert a != b


def test_moments_csv_columns(capsys):
    code, out, _ = run(capsys, "moments", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 9
    m2 = [float(r["m2"]) for r in rows]
    m4 = [float(r["m4"]) for r in rows]
    assert max(m2) - min(m2) <= 1e-12 * max(m2)
    assert max(m4) - min(m4) > 1e-6 * max(m4)
    cc = [float(r["connected_coefficient"]) for r in rows]
    assert max(cc) == pytest.approx(6.0) and min(cc) == pytest.approx(2.0)


def test_out_file(tmp_path, capsys):
    path = tmp_path / "t.txt"
    assert main(["table1", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    assert path.read_text().startswith("suite: table1")


def test_unwritable_out(tmp_path, capsys):
    assert main(["table1", "--out", str(tmp_path / "missing" / "t.txt")]) == 2


def test_emit_table_formats():
    rep = make_report("demo", 0, {"n": 1}, [check("c", 0.5, 1.0, True, a=1)])
    text = emit_table(rep, "text")
    assert "PASS" in text and "suite: demo" in text
    assert emit_table(rep, "csv").splitlines()[0] == "check,parameters,residual,tolerance,pass"
    assert json.loads(emit_table(rep, "json")) == rep
    with pytest.raises(ValueError):
        emit_table(rep, "xml")


# configuration

def test_config_file_and_flags(tmp_path, capsys):
    cfg_path = tmp_path / "run.ini"
    cfg_path.write_text("[run]\nseed = 9\nlambda = 0.4\n[grid]\nn = 16\n[output]\nformat = json\n"
                        "[tolerances]\nmoment = 1e-9\n")
    cfg = load_config(str(cfg_path))
    assert (cfg.seed, cfg.lam, cfg.n, cfg.format) == (9, 0.4, 16, "json")
    assert cfg.tolerances.moment == 1e-9
    cfg = load_config(str(cfg_path), {"seed": 2, "lam": None})
    assert cfg.seed == 2 and cfg.lam == 0.4
    code, out, _ = run(capsys, "moments", "--config", str(cfg_path), "--seed", "4")
    rep = json.loads(out)
    assert code == 0 and rep["seed"] == 4
    assert rep["parameters"]["config"]["n"] == 16


@pytest.mark.parametrize("body", ["[run]\nbogus = 1\n", "[run]\nseed = x\n",
                                  "[tolerances]\npsd = -1\n", "[tolerances]\nother = 1\n",
                                  "not an ini"])
def test_bad_config(tmp_path, body):
    p = tmp_path / "bad.ini"
    p.write_text(body)
    with pytest.raises(ConfigError):
        load_config(str(p))


def test_defaults_validate():
    cfg = RunConfig().validate()
    assert cfg.tolerances == Tolerances()
    assert "format" not in cfg.parameters()


def test_thread_env(monkeypatch):
    monkeypatch.setenv("LIERF_THREADS", "4")
    assert thread_count() == 4
    assert parallel_map(lambda x: x * x, range(10)) == [x * x for x in range(10)]
    monkeypatch.setenv("LIERF_THREADS", "zero")
    with pytest.raises(ConfigError):
        thread_count()


def test_threads_do_not_change_output(monkeypatch, capsys):
    monkeypatch.setenv("LIERF_THREADS", "1")
    _, a, _ = run(capsys, "jacobi", "--format", "json")
    monkeypatch.setenv("LIERF_THREADS", "3")
    _, b, _ = run(capsys, "jacobi", "--format", "json")
    assert a == b


# kernels from files and flags

def test_kernel_file(tmp_path, capsys):
    path = tmp_path / "k.json"
    save_kernel(shell_kernel(MomentumGrid(2, 16, 0.25), 1j, 0.7), path, binary=True)
    code, out, _ = run(capsys, "kernel", "--kernel", str(path), "--grid", "16", "--format", "json")
    assert code == 0
    assert json.loads(out)["pass"] is True


def test_kernel_file_grid_mismatch(tmp_path, capsys):
    path = tmp_path / "k.json"
    save_kernel(shell_kernel(MomentumGrid(2, 16, 0.25)), path)
    assert main(["kernel", "--kernel", str(path)]) == 2


def test_c_phase_flag(capsys):
    code, out, _ = run(capsys, "moments", "--c-phase", "0.3", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    assert any(abs(r[0] - 0.3) < 1e-12 for r in rep["rows"])


# expression evaluation

def test_eval_fourth_moment(capsys):
    code, out, _ = run(capsys, "eval", "vev(phi[f]^4)")
    assert code == 0
    assert out.strip() == "ip(f;f,f,f) + 4 ip(f,f;f,f) + ip(f,f,f;f) + 3 ip(f;f)^2"


def test_eval_normal_order_json(capsys):
    code, out, _ = run(capsys, "eval", "a[X] adag[Y]", "--normal-order", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "OpPoly" and doc["input"] == "a[X] adag[Y]"
    assert len(doc["value"]) == 4


def test_eval_parse_error_reports_position(capsys):
    code, _, err = run(capsys, "eval", "vev(a[X] + )")
    assert code == 2
    assert "line 1, column 12" in err


@pytest.mark.skipif(shutil.which("lierf") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["lierf", "table1", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["suite"] == "table1"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lierf.cli.main", "bogus"], capture_output=True)
    assert proc.returncode == 2
