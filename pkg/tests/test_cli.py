import json

import pytest

from dworkzeta.cli import format_poly, main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_teich(capsys):
    code, out, _ = _run(capsys, "teich", "--p", "5", "--precision", "3", "--a", "2")
    assert code == 0 and out.strip() == "57"


def test_count_modes(capsys):
    args = ["count", "--p", "5", "--poly", "x1^3+x2^3+x3^3"]
    assert _run(capsys, *args)[1].strip() == "6"
    assert _run(capsys, *args, "--s", "2")[1].strip() == "36"
    code, out, _ = _run(capsys, *args, "--mode", "affine", "--json")
    assert json.loads(out)["count"] == 1 + 4 * 6


def test_zeta_direct_elliptic_curve(capsys):
    code, out, _ = _run(capsys, "zeta-direct", "--p", "5", "--poly", "x1^3+x2^3+x3^3", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["numerator"] == [1, 0, 5]
    assert data["verify"]["weil_abs_ok"] and data["checks"]["oracle_N1"]


def test_zeta_direct_text_output(capsys):
    code, out, _ = _run(capsys, "zeta-direct", "--p", "3", "--poly", "x1^2+x2^2+x3^2", "--s-max", "1")
    assert code == 0
    assert "Z(T) = 1 / ((1 - T)(1 - 3T))" in out


def test_zeta_diagonal_and_dwork(capsys):
    code, out, _ = _run(capsys, "zeta-diagonal", "--p", "11", "--family", "cubic", "--coeffs", "1,2,3", "--check-n2")
    assert code == 0 and "P(T) = 1 + 11T^2" in out
    code, out, _ = _run(capsys, "zeta-dwork4", "--p", "13", "--gamma", "2", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["residual_a"] == -6 and len(data["reciprocal_roots"]) == 21


def test_gamma_routes_agree(capsys):
    code, out, _ = _run(capsys, "gamma", "--p", "13", "--precision", "5", "--z", "1/4", "--method", "both", "--json")
    assert code == 0 and json.loads(out)["checks"]["routes_agree"]


def test_newton_polygon(capsys):
    code, out, _ = _run(capsys, "newton-polygon", "--coeffs", "1,0,5", "--p", "5")
    assert code == 0 and out.strip() == "slope 1/2 length 2"
    code, out, _ = _run(capsys, "newton-polygon", "--points", "0:0,1:inf,2:1", "--json")
    assert json.loads(out)["slopes"] == [["1/2", 2]]


def test_selftest_subset(capsys):
    code, out, _ = _run(capsys, "selftest", "--only", "1,3")
    assert code == 0
    assert out.count("[PASS]") == 2


def test_exit_codes(capsys):
    assert _run(capsys, "zeta-dwork4", "--p", "13", "--gamma", "5")[0] == 1
    assert _run(capsys, "teich", "--p", "4", "--precision", "3", "--a", "1")[0] == 2
    assert _run(capsys, "newton-polygon", "--coeffs", "1,2")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["teich", "--p", "5"])
    assert exc.value.code == 2


def test_format_poly():
    assert format_poly([1, 0, 5]) == "1 + 5T^2"
    assert format_poly([1, -1]) == "1 - T"
    assert format_poly([0]) == "0"
