import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from sardquad import cli
from sardquad.coefficients import Interval
from sardquad.quadrature import INTEGRANDS, apply, optimal_coefficients


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs_zero_csv(capsys):
    code, out, err = run(capsys, "coeffs", "--a", "0", "--b", "1", "--N", "10", "--omega", "0", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 11
    assert sum(float(r["re"]) for r in rows) == pytest.approx(1.0, abs=1e-12)
    assert "regime=zero" in err


@pytest.mark.parametrize(
    "argv, regime",
    [
        (["--a", "-1", "--b", "1", "--N", "10", "--omega", "1.01"], "generic"),
        (["--N", "10", "--omega", "10", "--a", "0", "--b", "1"], "resonant"),
        (["--N", "1", "--omega", "1.01"], "generic"),
    ],
)
def test_coeffs_json_schema(capsys, argv, regime):
    code, out, _ = run(capsys, "coeffs", *argv)
    assert code == 0
    data = json.loads(out)
    assert data["regime"] == regime
    assert set(data) >= {"a", "b", "N", "omega", "regime", "lambda1", "weights", "aux"}
    assert set(data["aux"]) == {"K_re", "K_im", "a1_re", "a1_im", "b1_re", "b1_im"}
    assert [w["beta"] for w in data["weights"]] == list(range(data["N"] + 1))


def test_round_trip(capsys, tmp_path):
    path = tmp_path / "c.json"
    assert cli.main(["coeffs", "--N", "37", "--omega", "3.3", "--out", str(path)]) == 0
    capsys.readouterr()
    w = cli.weights_from_dict(json.loads(path.read_text()))
    cs = optimal_coefficients(3.3, Interval(-1.0, 1.0, 37))
    np.testing.assert_array_equal(w, cs.weights)
    x = cs.interval.nodes
    assert abs(w @ np.exp(x) - apply(cs, np.exp)) <= 1e-15


def test_byte_identical(capsys, tmp_path):
    outs = []
    for k in range(2):
        p = tmp_path / f"o{k}.json"
        cli.main(["coeffs", "--N", "12", "--omega", "0.77", "--out", str(p)])
        outs.append(p.read_bytes())
    capsys.readouterr()
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["coeffs", "--N", "10", "--omega", "1", "--a", "1", "--b", "0"],
        ["coeffs", "--N", "0", "--omega", "1"],
        ["coeffs", "--N", "ten", "--omega", "1"],
        ["coeffs", "--omega", "1"],
        ["coeffs", "--N", "5", "--omega", "1", "--eps-res", "1e-3"],
        ["integrate", "--N", "5", "--omega", "1", "--integrand", "sin"],
        ["tables", "--integrand", "sin"],
    ],
)
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 1
    capsys.readouterr()


def test_argparse_usage_exit(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["coeffs", "--format", "xml"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_verify_default(capsys):
    code, out, err = run(capsys, "verify")
    assert code == 0
    data = json.loads(out)
    oracle = [r for r in data["results"] if r["check"] == "oracle"]
    assert len(oracle) == 5 * 7
    assert max(r["max_dev"] for r in oracle) <= 1e-8
    assert data["failures"] == []


def test_verify_perturbed(capsys):
    code, _, err = run(capsys, "verify", "--N", "5", "--perturb", "1e-3")
    assert code == 2
    assert "N=5" in err


def test_verify_resonant(capsys):
    code, out, _ = run(capsys, "verify", "--N", "10", "--omega", "10", "--a", "0", "--b", "1")
    assert code == 0
    (row,) = [r for r in json.loads(out)["results"] if r["check"] == "oracle"]
    assert row["regime"] == "resonant" and row["max_dev"] <= 1e-9


def test_integrate_x(capsys):
    code, out, _ = run(capsys, "integrate", "--integrand", "x", "--omega", "1.01", "--N", "10")
    assert code == 0
    rec = json.loads(out)
    assert rec["R"] == pytest.approx(2.04411e-4, rel=1e-4)


def test_integrate_constant(capsys):
    code, out, _ = run(capsys, "integrate", "--integrand", "one", "--omega", "0", "--N", "10")
    rec = json.loads(out)
    assert rec["approx_re"] == pytest.approx(2.0, abs=1e-12)
    assert rec["R"] <= 1e-12


def test_integrate_exp_exact(capsys):
    _, out, _ = run(capsys, "integrate", "--integrand", "exp_x", "--omega", "0", "--N", "10")
    assert json.loads(out)["exact_re"] == pytest.approx((math.e**2 - 1) / math.e, rel=1e-15)


def _write_samples(path, xs, f):
    with open(path, "w") as fh:
        fh.write("x,re,im\n")
        for x in xs:
            x = float(x)
            v = complex(f(x))
            fh.write(f"{x!r},{v.real!r},{v.imag!r}\n")


def test_integrate_samples(capsys, tmp_path):
    iv = Interval(-1.0, 1.0, 8)
    p = tmp_path / "s.csv"
    _write_samples(p, iv.nodes[::-1], math.exp)
    code, out, _ = run(capsys, "integrate", "--samples", str(p), "--N", "8", "--omega", "2.2")
    assert code == 0
    cs = optimal_coefficients(2.2, iv)
    rec = json.loads(out)
    assert complex(rec["approx_re"], rec["approx_im"]) == pytest.approx(apply(cs, INTEGRANDS["exp_x"]), abs=1e-15)
    assert rec["R"] is None


@pytest.mark.parametrize("shift, count", [(1e-6, 9), (0.0, 8)])
def test_integrate_samples_rejected(capsys, tmp_path, shift, count):
    iv = Interval(-1.0, 1.0, 8)
    p = tmp_path / "s.csv"
    xs = iv.nodes[:count] + shift
    _write_samples(p, xs, math.exp)
    assert cli.main(["integrate", "--samples", str(p), "--N", "8", "--omega", "2.2"]) == 1
    capsys.readouterr()


@pytest.mark.parametrize("text", ["t,re,im\n0,1,0\n", "x,re,im\n0,one,0\n1,1,0\n"])
def test_samples_malformed(tmp_path, text):
    p = tmp_path / "s.csv"
    p.write_text(text)
    with pytest.raises(cli.UsageError):
        cli.read_samples(str(p), Interval(0.0, 1.0, 1))


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\na = 0\nb = 2\nN = 4\nomega = 0\nformat = csv\n")
    code, out, _ = run(capsys, "coeffs", "--config", str(cfg), "--N", "6")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 7
    assert sum(float(r["re"]) for r in rows) == pytest.approx(2.0, abs=1e-12)


def test_config_malformed(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("N 4\n")
    assert cli.main(["coeffs", "--config", str(cfg)]) == 1
    capsys.readouterr()


def test_tables(capsys):
    code, out, err = run(capsys, "tables")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["integrand", "omega", "N", "R_computed", "R_paper", "rel_dev", "pass"]
    assert len(rows) == 45
    cell = {(r["integrand"], float(r["omega"]), int(r["N"])): r for r in rows}
    assert float(cell["x", 1000.01, 100]["R_computed"]) == pytest.approx(1.457e-10, rel=0.05)
    assert float(cell["exp_x", 1.01, 1]["R_computed"]) == pytest.approx(8.473e-2, rel=0.01)
    assert cell["exp_x", 1.01, 1]["pass"] == "true"
    # optimal value; the tabulated 1.554e-4 is 5% lower
    t3 = cell["x_exp_x", 10.01, 10]
    assert float(t3["R_computed"]) == pytest.approx(1.6335832e-4, rel=1e-5)
    assert t3["pass"] == "false"
    # any failing cell must give the numeric exit status
    assert code == (0 if all(r["pass"] == "true" for r in rows) else 2)


def test_tables_mantissa_style(capsys):
    code, out, _ = run(capsys, "tables", "--integrand", "exp_x", "--paper-style", "--format", "json")
    rows = json.loads(out)
    assert len(rows) == 15
    assert rows[0]["R_paper"] == "8.473(-2)"


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "sardquad", "coeffs", "--N", "3", "--omega", "0", "--format", "csv"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert res.stdout.splitlines()[0] == "beta,re,im"
