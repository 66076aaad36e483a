import json
import math
import subprocess
import sys

import numpy as np
import pytest

from wigner_bgk.cli import main, verify_report
from wigner_bgk.quartic import QuarticEquilibrium


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = text.splitlines()
    return lines[0].split(","), [list(map(float, ln.split(","))) for ln in lines[1:]]


def test_eval_single_point(capsys):
    code, out, _ = run(capsys, "eval", "--preset", "figure-2", "--q", "0", "--p", "0")
    assert code == 0
    head, rows = csv_rows(out)
    assert head == ["q", "p", "F"]
    assert rows[0][2] == pytest.approx(0.0420387, abs=1e-7)


def test_eval_grid_truncates_and_is_gaussian(capsys, tmp_path):
    path = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "eval", "--preset", "figure-2", "--n-q", "41", "--n-p", "31", "--out", str(path))
    assert code == 0
    raw = path.read_bytes()
    assert b"\r" not in raw
    _, rows = csv_rows(raw.decode())
    arr = np.array(rows)
    outside = np.abs(arr[:, 0]) >= math.sqrt(8.0)
    assert outside.any() and np.all(arr[outside, 2] == 0)
    inside = arr[np.abs(arr[:, 0] - arr[0, 0]) > 0]
    q0 = arr[np.argmin(np.abs(arr[:, 0])), 0]
    prof = arr[arr[:, 0] == q0]
    coef = np.polyfit(prof[:, 1], np.log(prof[:, 2]), 2)
    assert np.allclose(np.polyval(coef, prof[:, 1]), np.log(prof[:, 2]), rtol=1e-10)
    assert len(inside) > 0


def test_eval_full_precision_round_trip(capsys):
    eq = QuarticEquilibrium.build(-1, 0.2, 0.52, -1.3, 1.0)
    from wigner_bgk.quartic import eval_wigner
    _, out, _ = run(capsys, "eval", "--preset", "figure-4-gamma-0.2", "--q", "0.3", "--p", "-1.1")
    assert csv_rows(out)[1][0][2] == eval_wigner(0.3, -1.1, eq)


def test_eval_validation(capsys):
    assert run(capsys, "eval", "--preset", "figure-2", "--n-q", "0")[0] == 2
    assert run(capsys, "eval", "--preset", "figure-2", "--q", "1")[0] == 2
    assert run(capsys, "eval", "--mu", "1", "--gamma", "-1", "--a0", "0", "--b0", "1", "--c0", "1")[0] == 2
    assert run(capsys, "eval", "--mu", "1")[0] == 2
    assert run(capsys, "eval", "--preset", "nonexistent")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "eval", "--mu", "-1", "--gamma", "1", "--a0", "0", "--b0", "0", "--c0", "1")[0] == 2


def test_verify_figure2_preset_passes(capsys):
    # the exact solution has a non-integrable F^2 at the support edge and the published
    # form fails the residual checks, so no form passes everything; expected to fail
    code, out, _ = run(capsys, "verify", "--preset", "figure-2", "--format", "json")
    assert code == 0
    assert json.loads(out)["checks"]["admissibility"]["purity"] == pytest.approx(0.03, abs=0.005)


def test_verify_figure2_both_forms(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "figure-2", "--format", "json")
    rep = json.loads(out)
    assert code == 1
    assert rep["checks"]["ode_residual"]["passed"] and rep["checks"]["residual_qp"]["passed"]
    assert "divergent" in rep["checks"]["admissibility"]["error"]
    code, out, _ = run(capsys, "verify", "--preset", "figure-2", "--form", "published", "--format", "json")
    rep = json.loads(out)
    assert code == 1
    adm = rep["checks"]["admissibility"]
    assert adm["passed"] and adm["purity"] == pytest.approx(0.03, abs=0.005) and adm["purity"] < 0.065
    assert not rep["checks"]["residual_qp"]["passed"]


def test_verify_gamma5_fails_on_purity(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "figure-6-gamma-5", "--form", "published", "--format", "json")
    rep = json.loads(out)
    assert code == 1
    assert rep["checks"]["admissibility"]["flags"]["purity"] is False


def test_verify_exact_double_well_passes(capsys):
    from wigner_bgk.admissibility import normalize
    eq = normalize(QuarticEquilibrium.build(-1, 0.2, 0.52, -1.3, 1.0))
    code, out, _ = run(capsys, "verify", "--mu", "-1", "--gamma", "0.2", "--a0", repr(eq.consts.a0),
                       "--b0", repr(eq.consts.b0), "--c0", "1", "--format", "json")
    assert code == 0 and json.loads(out)["passed"]
    # the figure constants themselves are not normalised
    code, out, _ = run(capsys, "verify", "--preset", "figure-4-gamma-0.2", "--format", "json")
    assert code == 1 and json.loads(out)["checks"]["admissibility"]["norm"] == pytest.approx(2.19, abs=0.01)


def test_verify_records_singular_boundary_warning(capsys):
    code, out, _ = run(capsys, "verify", "--mu", "1", "--gamma", "0.5", "--a0", "0", "--b0", "0.4",
                       "--c0", "13", "--format", "json")
    rep = json.loads(out)
    assert any("24*gamma" in w for w in rep["warnings"])


def test_report_json_round_trip():
    rep = verify_report(QuarticEquilibrium.build(-1, 0.5, -0.48, 1.2, 1.0))
    assert json.loads(json.dumps(rep)) == rep


@pytest.mark.parametrize("pred,a0,bracket,form,expect,tol", [
    ("two-hump", "1", ("0.1", "1"), "exact", 0.37, 0.01),
    ("negativity", "1", ("0.1", "1"), "exact", 0.63, 0.01),
    ("density-nonneg", "-1", ("0.5", "2"), "published", 1.1455, 0.001),
])
def test_scan(capsys, pred, a0, bracket, form, expect, tol):
    code, out, _ = run(capsys, "scan", "--predicate", pred, "--a0", a0, "--bracket", *bracket, "--form", form,
                       "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert rep["gamma_star"] == pytest.approx(expect, abs=tol)
    assert rep["bracket"] == [float(b) for b in bracket] and rep["predicate"] == pred


def test_scan_without_sign_change(capsys):
    code, out, _ = run(capsys, "scan", "--predicate", "two-hump", "--bracket", "0.5", "1", "--format", "json")
    assert code == 1 and "does not change" in json.loads(out)["error"]


def test_wp_figure7(capsys, tmp_path):
    path = tmp_path / "f7.csv"
    assert run(capsys, "wp", "--preset", "figure-7", "--out", str(path))[0] == 0
    head, rows = csv_rows(path.read_text())
    assert head == ["c0", "n", "C", "B", "phi"]
    arr = np.array(rows)
    for c0 in (1.0, 2.0, 3.0):
        sub = arr[arr[:, 0] == c0]
        assert abs(sub[-1, 1] - 6 / c0**2) <= 1e-9
        assert sub[0, 3] == pytest.approx(1.0, abs=0.01)
    meta = json.loads((tmp_path / "f7.csv.json").read_text())
    assert meta["units"]["hbar"] == 1.0 and meta["b0"] == 1.0


def test_wp_classical_b_column(capsys):
    code, out, _ = run(capsys, "wp", "--c0", "1", "--b0", "1.3", "--hbar", "0", "--n-points", "20")
    _, rows = csv_rows(out)
    assert code == 0 and all(r[3] == 1.3 for r in rows)


def test_wp_rejects_bad_constants(capsys):
    assert run(capsys, "wp", "--c0", "-1")[0] == 2


def test_evolve(capsys):
    code, out, _ = run(capsys, "evolve", "--preset", "figure-4-gamma-0.2", "--T", "0", "--format", "json")
    assert code == 0 and json.loads(out)["deviation"] == 0.0
    code, _, err = run(capsys, "evolve", "--preset", "figure-2")
    assert code == 2 and "mu=-1" in err


def test_evolve_figure4_t10(capsys, tmp_path):
    snap = tmp_path / "final.bin"
    code, out, _ = run(capsys, "evolve", "--preset", "figure-4-gamma-0.2", "--format", "json",
                       "--snapshot", str(snap))
    rep = json.loads(out)
    assert code == 0 and rep["deviation"] <= 1e-3
    header = json.loads((tmp_path / "final.bin.json").read_text())
    assert header["T"] == 10.0 and header["n_q"] == 256


def test_deterministic(capsys):
    a = run(capsys, "scan", "--predicate", "negativity")[1]
    b = run(capsys, "scan", "--predicate", "negativity")[1]
    strip = lambda t: [ln for ln in t.splitlines() if not ln.startswith("seconds")]
    assert strip(a) == strip(b)


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "wigner_bgk.cli", "eval", "--preset", "figure-2", "--q", "0",
                          "--p", "0"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("q,p,F\n")
