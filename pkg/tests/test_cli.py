"""Command-line interface: output formats, exit codes, and the series cache."""

import json
import os

import mpmath
import pytest

from merohecke.cli import EXIT_GUARD, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


# -- expand ----------------------------------------------------------------

def test_expand_text(capsys):
    code, out, err = run(capsys, ["expand", "G", "--prec", "6"])
    assert code == EXIT_OK
    assert out.strip() == ("q^2 - 4143*q^3 + 16868385*q^4 "
                           "- 68686682635*q^5 + O(q^6)")


def test_expand_json(capsys):
    code, out, _ = run(capsys, ["expand", "f6iinfty", "--prec", "3", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["name"] == "f6iinfty"
    assert obj["weight"] == 6
    assert obj["window"] == [-1, 3]
    assert obj["series"]["valuation"] == -1
    assert obj["series"]["coefficients"] == ["1", "0", "-73764", "-86241280"]


def test_expand_expression(capsys):
    code, out, _ = run(capsys, ["expand", "E4^3 - E6^2", "--prec", "4", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["weight"] == 12
    # the difference keeps the weight-12 window start, with a provable zero
    assert obj["series"]["valuation"] == 0
    assert obj["series"]["coefficients"] == ["0", "1728", "-41472", "435456"]


def test_expand_bad_expression(capsys):
    code, out, err = run(capsys, ["expand", "E4 + zebra"])
    assert code == EXIT_USAGE
    assert "unknown name" in err


# -- hecke -----------------------------------------------------------------

def test_hecke_name_route(capsys):
    code, out, _ = run(capsys, ["hecke", "j", "--m", "2", "--prec", "12", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["weight"] == 0
    assert obj["series"]["valuation"] == -2
    # the divisor sum contributes r^(w-1) = 1/2 at the leading index
    assert obj["series"]["coefficients"][0] == "1/2"


def test_hecke_file_route_matches_name_route(capsys, tmp_path):
    code, by_name, _ = run(capsys, ["hecke", "j", "--m", "2", "--prec", "12", "--json"])
    assert code == EXIT_OK
    code, expanded, _ = run(capsys, ["expand", "j", "--prec", "12", "--json"])
    assert code == EXIT_OK
    obj = json.loads(expanded)
    path = tmp_path / "j.json"
    path.write_text(json.dumps({"series": obj["series"], "weight": 0}))
    code, by_file, _ = run(capsys, ["hecke", str(path), "--m", "2", "--json"])
    assert code == EXIT_OK
    assert json.loads(by_file) == json.loads(by_name)


def test_hecke_bare_series_file_needs_weight(capsys, tmp_path):
    code, out, _ = run(capsys, ["expand", "delta", "--prec", "8", "--json"])
    obj = json.loads(out)
    path = tmp_path / "d.json"
    path.write_text(json.dumps(obj["series"]))
    code, _, err = run(capsys, ["hecke", str(path), "--m", "2"])
    assert code == EXIT_USAGE
    assert "--weight" in err
    code, out, _ = run(capsys, ["hecke", str(path), "--m", "2", "--weight", "12",
                                "--json"])
    assert code == EXIT_OK
    assert json.loads(out)["series"]["coefficients"][0] == "-24"


# -- solve-pp ----------------------------------------------------------------

def test_solve_pp_success(capsys):
    code, out, _ = run(capsys, ["solve-pp", "--weight", "0", "--pp", "1:1",
                                "--prec", "4", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["weight"] == 0
    assert obj["series"]["valuation"] == -1
    # j - 744: constant pinned to zero
    assert obj["series"]["coefficients"][:4] == ["1", "0", "196884", "21493760"]


def test_solve_pp_obstructed(capsys):
    code, out, _ = run(capsys, ["solve-pp", "--weight", "-10", "--pp", "1:1"])
    assert code == EXIT_MISMATCH
    assert out.strip() == ("obstructed: pairing vector ['1'] against the "
                           "weight-12 cusp basis")


def test_solve_pp_bad_syntax(capsys):
    code, _, err = run(capsys, ["solve-pp", "--weight", "0", "--pp", "1;1"])
    assert code == EXIT_USAGE
    assert "r:coeff" in err


def test_solve_pp_rational_coeff(capsys):
    code, out, _ = run(capsys, ["solve-pp", "--weight", "-10", "--pp",
                                "2:1/2048,1:3/256", "--prec", "3", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    # window opens one slot below the top pole order with a provable zero
    assert obj["series"]["valuation"] == -3
    assert obj["series"]["coefficients"][:3] == ["0", "1/2048", "3/256"]


def test_solve_pp_nonunique(capsys):
    code, _, err = run(capsys, ["solve-pp", "--weight", "12", "--pp", "1:1"])
    assert code == EXIT_USAGE
    assert "unique" in err.lower()


# -- quotient ------------------------------------------------------------------

def test_quotient_matrix(capsys):
    code, out, _ = run(capsys, ["quotient", "--weight2k", "12", "--kind", "modM!",
                                "--m", "2", "--charpoly", "--check", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["matrix"] == [["-3/256"]]
    assert obj["scaled_charpoly"] == ["24", "1"]
    assert obj["check"] is True


def test_quotient_text(capsys):
    code, out, _ = run(capsys, ["quotient", "--weight2k", "24", "--kind", "modS!",
                                "--m", "2"])
    assert code == EXIT_OK
    assert "3 x 3 matrix" in out


def test_quotient_kind_validation(capsys):
    code, _, _ = run(capsys, ["quotient", "--weight2k", "12", "--kind", "modX",
                              "--m", "2"])
    assert code == EXIT_USAGE


# -- verify ----------------------------------------------------------------------

def test_verify_single(capsys):
    code, out, _ = run(capsys, ["verify", "gT2"])
    assert code == EXIT_OK
    assert out.split() == ["gT2", "pass"]


def test_verify_single_json(capsys):
    code, out, _ = run(capsys, ["verify", "F-over-Delta", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["pass"] is True
    assert obj["reports"][0]["id"] == "F-over-Delta"
    assert obj["reports"][0]["mismatch"] is None


def test_verify_unknown_id(capsys):
    code, _, err = run(capsys, ["verify", "infty-eigen-2"])
    assert code == EXIT_USAGE
    assert "unknown identity" in err
    # the error names the valid ids
    assert "infty-eigen(2)" in err


# -- numeric subcommands ------------------------------------------------------------

def test_eval_json(capsys):
    code, out, _ = run(capsys, ["eval", "delta", "--at", "0,1", "--bits", "120",
                                "--prec", "40", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    with mpmath.workprec(140):
        truth = mpmath.gamma(mpmath.mpf(1) / 4) ** 24 / (2 ** 24 * mpmath.pi ** 18)
        assert abs(mpmath.mpf(obj["value_re"]) - truth) / truth < 1e-25
    assert abs(mpmath.mpf(obj["value_im"])) < 1e-25


def test_eval_region_guard(capsys):
    code, _, err = run(capsys, ["eval", "f6i", "--at", "0,0.5"])
    assert code == EXIT_GUARD
    assert "numeric guard" in err


def test_eval_bad_point(capsys):
    code, _, err = run(capsys, ["eval", "delta", "--at", "1"])
    assert code == EXIT_USAGE


def test_cm_check(capsys):
    code, out, _ = run(capsys, ["cm-check", "--bits", "150", "--prec", "30",
                                "--tol", "1e-15"])
    assert code == EXIT_OK
    assert "pass" in out


def test_eigen_num(capsys):
    code, out, _ = run(capsys, ["eigen-num", "--m", "5", "--nmax", "1",
                                "--bits", "120"])
    assert code == EXIT_OK
    assert "pass" in out


def test_eigen_num_rejects_other_indices(capsys):
    code, _, _ = run(capsys, ["eigen-num", "--m", "6"])
    assert code == EXIT_USAGE


def test_psi_sum_vanishing(capsys):
    code, out, _ = run(capsys, ["psi-sum", "--k", "3", "--ell", "0",
                                "--zz", "0,1", "--at", "0,2", "--bound", "4"])
    assert code == EXIT_OK
    assert "VanishingSeries" in out


def test_psi_sum_pole_guard(capsys):
    code, _, err = run(capsys, ["psi-sum", "--k", "3", "--ell", "-1",
                                "--zz", "0,1", "--at", "0,1", "--bound", "4"])
    assert code == EXIT_GUARD
    assert "pole" in err


def test_psi_prop_check(capsys):
    code, out, _ = run(capsys, ["psi-prop-check", "--k", "3", "--ell", "-1",
                                "--zz", "0,1", "--at", "0,1.5", "--n", "2",
                                "--bound", "8", "--json"])
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["pass"] is True


# -- argparse behavior ----------------------------------------------------------

def test_no_subcommand(capsys):
    assert main([]) == 2
    assert main(["--help"]) == 0


# -- cache -------------------------------------------------------------------------

def test_cache_roundtrip(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MEROHECKE_CACHE_DIR", str(tmp_path / "cache"))
    code, first, _ = run(capsys, ["expand", "g", "--prec", "10", "--json"])
    assert code == EXIT_OK
    files = list((tmp_path / "cache").iterdir())
    assert len(files) == 1 and files[0].suffix == ".json"
    stored = json.loads(files[0].read_text())
    assert stored["format"] == 1
    assert stored["construction"] == "E4^2*E6/delta^2"
    code, second, _ = run(capsys, ["expand", "g", "--prec", "10", "--json"])
    assert code == EXIT_OK
    assert second == first


def test_cache_corruption_is_ignored(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MEROHECKE_CACHE_DIR", str(tmp_path))
    code, first, _ = run(capsys, ["expand", "F7", "--prec", "6", "--json"])
    assert code == EXIT_OK
    (path,) = list(tmp_path.glob("*.json"))
    path.write_text("{ not json")
    code, second, _ = run(capsys, ["expand", "F7", "--prec", "6", "--json"])
    assert code == EXIT_OK
    assert second == first
    # the rerun repaired the entry
    assert json.loads(path.read_text())["format"] == 1


def test_cache_format_version_gate(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MEROHECKE_CACHE_DIR", str(tmp_path))
    code, first, _ = run(capsys, ["expand", "f6i", "--prec", "6", "--json"])
    (path,) = list(tmp_path.glob("*.json"))
    stored = json.loads(path.read_text())
    stored["format"] = 0
    # a poisoned payload with a stale version must not be served
    stored["series"]["coefficients"][0] = "999"
    path.write_text(json.dumps(stored))
    code, second, _ = run(capsys, ["expand", "f6i", "--prec", "6", "--json"])
    assert code == EXIT_OK
    assert second == first


def test_cache_distinguishes_precision(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MEROHECKE_CACHE_DIR", str(tmp_path))
    run(capsys, ["expand", "G", "--prec", "6", "--json"])
    run(capsys, ["expand", "G", "--prec", "8", "--json"])
    assert len(list(tmp_path.glob("*.json"))) == 2


def test_cache_disabled_without_env(capsys, tmp_path, monkeypatch):
    monkeypatch.delenv("MEROHECKE_CACHE_DIR", raising=False)
    code, out, _ = run(capsys, ["expand", "G", "--prec", "6"])
    assert code == EXIT_OK
    assert list(tmp_path.iterdir()) == []
