import csv
import importlib
import io
import json
import subprocess
import sys

import pytest

from gmeander import cli
from gmeander.differint import ConvergenceError

KERNEL_ARGS = ["kernel", "--mode", "finite", "--nu", "0.5", "--kappa", "1", "--N", "2",
               "--times", "0.5", "--grid-x", "0.4,1", "--grid-y", "1.2"]


def run(capsys, argv):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_kernel_csv(capsys):
    code, out, _ = run(capsys, KERNEL_ARGS)
    assert code == 0
    r = rows(out)
    assert r[0] == ["m", "x", "n", "y", "D", "S_fwd", "S_bwd", "I"]
    assert len(r) == 1 + 2 * 2 * 2 * 1
    # 17 significant digits round-trip
    from gmeander import ModelParams, TimeGrid
    from gmeander.kernels import FiniteKernel

    fk = FiniteKernel(ModelParams(0.5, 1.0), TimeGrid(1.0, [0.5]))
    m, x, n, y = int(r[1][0]), float(r[1][1]), int(r[1][2]), float(r[1][3])
    assert float(r[1][5]) == fk.S_tilde(m, x, n, y)


def test_kernel_independent_of_threads(capsys):
    a = run(capsys, KERNEL_ARGS + ["--threads", "1"])[1]
    b = run(capsys, KERNEL_ARGS + ["--threads", "4"])[1]
    assert a == b


def test_homogeneous_kernel_negative_times(capsys):
    code, out, _ = run(capsys, ["kernel", "--mode", "homogeneous", "--nu", "0", "--times", "-1,0",
                                "--grid-x", "0.5", "--grid-y", "0.5"])
    assert code == 0
    r = rows(out)[1:]
    assert len(r) == 4
    assert all(float(row[4]) == 0 and float(row[7]) == 0 for row in r)


def test_infinite_mode_needs_negative_shifts(capsys):
    code, _, err = run(capsys, ["kernel", "--mode", "infinite", "--times", "-1,0", "--grid-x", "1", "--grid-y", "1"])
    assert code == 2 and "s < 0" in err


def test_inadmissible_kappa(capsys):
    code, _, err = run(capsys, KERNEL_ARGS[:5] + ["--kappa", "3"] + KERNEL_ARGS[7:])
    assert code == 2 and "kappa" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["kernel", "--bogus"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main([])
    assert e.value.code == 2
    capsys.readouterr()
    assert run(capsys, ["kernel", "--mode", "sideways", "--grid-x", "1", "--grid-y", "1"])[0] == 2
    assert run(capsys, ["validate", "--suites", "nope"])[0] == 2


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# basis dump\nnu = 1.0   # trailing comment\nkappa = 0.5\n\nK = 4\n")
    code, out, _ = run(capsys, ["dump-basis", "--config", str(cfg)])
    assert code == 0
    assert sum(1 for r in rows(out)[1:] if r[0] == "alpha") == 15
    code, out2, _ = run(capsys, ["dump-basis", "--config", str(cfg), "--K", "2"])
    assert sum(1 for r in rows(out2)[1:] if r[0] == "alpha") == 6


@pytest.mark.parametrize("text", ["nu 1.0\n", "bogus = 1\n", "nu = abc\n", "= 3\n"])
def test_bad_config(tmp_path, capsys, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text)
    assert run(capsys, ["dump-basis", "--config", str(cfg)])[0] == 2


def test_missing_config(capsys):
    assert run(capsys, ["dump-basis", "--config", "/nonexistent/x.cfg"])[0] == 2


def test_thread_resolution(monkeypatch):
    monkeypatch.setenv("MEANDER_THREADS", "3")
    assert cli.resolve_threads(None) == 3
    assert cli.resolve_threads(5) == 5
    monkeypatch.setenv("MEANDER_THREADS", "zero")
    with pytest.raises(cli.ConfigError):
        cli.resolve_threads(None)
    monkeypatch.delenv("MEANDER_THREADS")
    assert cli.resolve_threads(None) >= 1


def test_bad_env_threads_exit_2(monkeypatch, capsys):
    monkeypatch.setenv("MEANDER_THREADS", "-2")
    assert run(capsys, KERNEL_ARGS)[0] == 2


def test_correlate_json(tmp_path, capsys):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, ["correlate", "--nu", "0.5", "--kappa", "1", "--N", "2", "--times", "0.5",
                              "--points", "0.4,1.1;0.9", "--out", str(out)])
    assert code == 0
    d = json.loads(out.read_text())
    assert set(d) == {"value", "blocks", "condition_estimate"}
    assert len(d["blocks"]) == 6 and d["value"] > 0


def test_convergence_failure_exit_3(monkeypatch, capsys):
    # the package re-exports the function pfaffian, which shadows the submodule attribute
    pf = importlib.import_module("gmeander.pfaffian")

    def boom(*a, **k):
        raise ConvergenceError("series did not converge")

    monkeypatch.setattr(pf, "correlation", boom)
    code, _, err = run(capsys, ["correlate", "--N", "2", "--points", "0.4"])
    assert code == 3 and "convergence" in err


def test_simulate_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert run(capsys, ["simulate", "--nu", "0.5", "--kappa", "0", "--paths", "200", "--seed", "7",
                            "--out", str(f)])[0] == 0
    assert a.read_bytes() == b.read_bytes()
    r = rows(a.read_text())
    assert r[0] == ["path_id", "step", "t", "x_1"] and len(r) == 1 + 200 * 10


def test_converge_csv(capsys):
    code, out, _ = run(capsys, ["converge", "--mode", "R_even", "--N", "50,100,200", "--nu", "0.5", "--kappa", "1"])
    assert code == 0
    r = rows(out)
    assert r[0] == ["N", "finite", "limit", "rel_error"] and [x[0] for x in r[1:]] == ["50", "100", "200"]
    errs = [float(x[3]) for x in r[1:]]
    assert errs[0] > errs[1] > errs[2]


def test_converge_failed_report_exit_1(monkeypatch, capsys):
    from gmeander.kernels import ConvergenceReport
    import gmeander.kernels as k

    monkeypatch.setattr(k, "asymptotic_validate",
                        lambda *a, **kw: ConvergenceReport("R_even", [1, 2], [1, 1], [1, 1], [0.1, 0.2]))
    assert run(capsys, ["converge", "--N", "1,2"])[0] == 1


def test_validate_report(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(capsys, ["validate", "--suites", "specfun,pfaffian", "--out", str(out)])
    assert code == 0
    d = json.loads(out.read_text())
    assert d["all_pass"] and d["suites"] == ["specfun", "pfaffian"]
    assert {"name", "paper_ref", "measured", "expected", "tolerance", "pass"} <= set(d["checks"][0])


def test_validate_failure_exit_1(monkeypatch, capsys):
    import gmeander.validation as v

    monkeypatch.setitem(v.SUITES, "specfun", lambda: [v.Check("bad", "x", 1.0, 0.0, 0.1, False)])
    assert run(capsys, ["validate", "--suites", "specfun"])[0] == 1


def test_validate_parameter_checks(capsys):
    code, out, _ = run(capsys, ["validate", "--suites", "specfun", "--nu", "1", "--kappa", "1"])
    assert code == 0
    assert any(c["suite"] == "params" for c in json.loads(out)["checks"])
    assert run(capsys, ["validate", "--suites", "specfun", "--nu", "0.5", "--kappa", "3"])[0] == 2


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gmeander", "dump-basis", "--K", "2"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("table,i,j,value")
