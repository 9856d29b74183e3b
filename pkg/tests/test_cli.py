import json
import subprocess
import sys

import pytest

from freudskew.cli import COEFF_COLUMNS, FIGURE_COLUMNS, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_coeffs_header_and_beta_zero(capsys):
    code, out, _ = run(capsys, "coeffs", "--t", "0", "--nmax", "5", "--digits-out", "15")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(COEFF_COLUMNS)
    assert len(lines) == 7
    row0 = dict(zip(COEFF_COLUMNS, lines[1].split(",")))
    assert row0["n"] == "0" and row0["beta"] == "0"
    assert row0["xi"] == "0.0515801399019033"
    assert lines[2].split(",")[1] == "0.238994398743062"


def test_coeffs_single_row(capsys):
    code, out, _ = run(capsys, "coeffs", "--t", "2", "--nmax", "0")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("n,beta") and len(lines) == 2


def test_coeffs_json_and_multi_t(capsys):
    code, out, _ = run(capsys, "coeffs", "--t", "0,2", "--nmax", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert [d["t"] for d in data] == ["0", "2"]
    assert data[0]["rows"][0]["n"] == 0 and data[0]["rows"][0]["beta"] == "0"
    code, out, _ = run(capsys, "coeffs", "--t", "0,2", "--nmax", "1")
    blocks = out.split("\n\n")
    assert len(blocks) == 2 and all(b.startswith("n,beta") for b in blocks)


def test_coeffs_r_beyond_cap_is_empty(capsys):
    code, out, _ = run(capsys, "coeffs", "--t", "2", "--nmax", "13", "--digits-out", "8")
    assert code == 0
    last = out.splitlines()[-1].split(",")
    assert last[0] == "13" and last[-1] == ""


def test_byte_identical_reruns(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["coeffs", "--t", "6.5", "--nmax", "4", "--out", str(p)]) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b and b"\r" not in a


def test_poly_dumps(capsys):
    code, out, _ = run(capsys, "poly", "--family", "O", "--n", "3")
    assert code == 0 and out.split() == ["0", "-3/2", "0", "1"]
    code, out, _ = run(capsys, "poly", "--family", "S", "--n", "3")
    assert out.split() == ["0", "-5/2", "0", "1"]
    code, out, _ = run(capsys, "poly", "--family", "P", "--n", "0", "--t", "0")
    assert out.split() == ["1"]
    code, out, _ = run(capsys, "poly", "--family", "Q", "--n", "2", "--t", "0", "--digits-out", "15")
    # xi_0 - beta_1 at t = 0
    assert out.split() == ["-0.187414258841159", "0", "1"]
    code, out, _ = run(capsys, "poly", "--family", "P_hat", "--n", "1", "--t", "0", "--digits-out", "15")
    assert out.split() == ["-0.238994398743062", "1"]


def test_verify_hermite_only(capsys):
    code, out, _ = run(capsys, "verify", "--checks", "hermite_exact")
    assert code == 0
    data = json.loads(out)
    assert len(data["records"]) == 1 and data["all_pass"]
    assert data["records"][0]["t"] is None


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--t", "2", "--nmax", "14",
                       "--checks", "dP1_residual,closed_even")
    assert code == 0
    data = json.loads(out)
    assert [r["check_id"] for r in data["records"]] == ["dP1_residual", "closed_even"]
    assert data["config"]["checks"] == ["dP1_residual", "closed_even"]


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--t", "2", "--nmax", "14",
                       "--checks", "structure_relation", "--tol-exact", "1e-300")
    assert code == 4 and json.loads(out)["all_pass"] is False


@pytest.mark.parametrize("argv", [
    ["verify", "--checks", "no_such_check"],
    ["coeffs", "--t", "abc"],
    ["coeffs", "--t", "1,,2"],
    ["coeffs"],
    ["coeffs", "--t", "0", "--prec-bits", "16"],
    ["coeffs", "--t", "0", "--quad-tol", "-1"],
    ["poly", "--family", "Z", "--n", "1"],
    ["poly", "--family", "P", "--n", "-1", "--t", "0"],
    ["poly", "--family", "P", "--n", "2", "--t", "0,1"],
    ["figure"],
    ["nonsense"],
])
def test_usage_errors_exit_2(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 2


def test_figure_rows_and_order(capsys):
    code, out, _ = run(capsys, "figure", "--t", "6.5", "--nmax", "30", "--digits-out", "12")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(FIGURE_COLUMNS) == "n,beta,xi,zeta,psi"
    assert len(lines) == 32


def test_figure_warns_when_digits_exceed_accuracy(capsys):
    code, _, err = run(capsys, "figure", "--t", "-2.5", "--nmax", "30", "--digits-out", "40")
    assert code == 0 and "warning" in err


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "freudskew.cli", "poly", "--family", "O", "--n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.split() == ["-1/2", "0", "1"]
