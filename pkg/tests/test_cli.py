import json

import numpy as np
import pytest

from oblique.cli import EXIT_ERROR, EXIT_FALSE, EXIT_OK, EXIT_USAGE, run_command
from oblique.services.matrix_io import parse_matrix
from oblique.services.subspace import friedrichs_cos, from_spanning

from conftest import FIXTURES, assert_matches, load_golden


def run(capsys, *argv):
    code = run_command([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize(
    "command, first, second, exit_code",
    [
        ("compat", "A_swap.mat", "S_e1.mat", EXIT_FALSE),
        ("pas", "I2.mat", "S_e1.mat", EXIT_OK),
        ("shorted", "A_shorted.mat", "S_e1.mat", EXIT_OK),
        ("twoproj", "Q_line60.mat", "P_e1.mat", EXIT_OK),
        ("angle", "S_e1.mat", "T_line60.mat", EXIT_OK),
    ],
)
def test_golden_reports(capsys, command, first, second, exit_code):
    code, out, _ = run(capsys, command, FIXTURES / first, FIXTURES / second)
    assert code == exit_code
    assert_matches(json.loads(out), load_golden(command))


def test_reports_are_deterministic(capsys):
    _, first, _ = run(capsys, "twoproj", FIXTURES / "Q_line60.mat", FIXTURES / "P_e1.mat")
    _, second, _ = run(capsys, "twoproj", FIXTURES / "Q_line60.mat", FIXTURES / "P_e1.mat")
    assert first == second


def test_floats_read_back_to_the_computed_doubles(capsys):
    _, out, _ = run(capsys, "angle", FIXTURES / "S_e1.mat", FIXTURES / "T_line60.mat")
    result = json.loads(out)["result"]
    S = from_spanning(parse_matrix(FIXTURES / "S_e1.mat").matrix)
    T = from_spanning(parse_matrix(FIXTURES / "T_line60.mat").matrix)
    cosine = friedrichs_cos(S, T)
    assert result["cosine"] == cosine
    assert result["angle"] == float(np.arccos(cosine))
    assert float(format(result["angle"], ".17g")) == result["angle"]


def test_complex_input_keeps_imaginary_parts(capsys):
    code, out, _ = run(capsys, "pas", FIXTURES / "A_complex.mat", FIXTURES / "S_e1.mat")
    assert code == EXIT_OK
    projection = json.loads(out)["result"]["projection"]
    assert projection["field"] == "complex"
    assert projection["imag"] is not None


def test_tolerance_overrides_reach_the_report(capsys):
    code, out, _ = run(
        capsys, "--tol-eq", "1e-6", "angle", FIXTURES / "S_e1.mat", FIXTURES / "T_line60.mat"
    )
    assert code == EXIT_OK
    assert json.loads(out)["tolerance"]["tol_eq"] == 1e-6


def test_tolerance_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("OBLIQUE_TOL_NORM", "1e-7")
    _, out, _ = run(capsys, "angle", FIXTURES / "S_e1.mat", FIXTURES / "T_line60.mat")
    assert json.loads(out)["tolerance"]["tol_norm"] == 1e-7


def test_verbose_prints_verdicts_to_stderr(capsys):
    code, out, err = run(
        capsys, "angle", "--verbose", FIXTURES / "S_e1.mat", FIXTURES / "T_line60.mat"
    )
    assert code == EXIT_OK
    assert "strictly_below_one" in err
    assert json.loads(out)["command"] == "angle"


def test_missing_file_is_an_error(capsys, tmp_path):
    code, out, err = run(capsys, "pas", tmp_path / "absent.mat", FIXTURES / "S_e1.mat")
    assert code == EXIT_ERROR
    assert out == ""
    assert err.startswith("error:")


def test_parse_error_is_an_error(capsys):
    code, _, err = run(capsys, "pas", FIXTURES / "bad_count.mat", FIXTURES / "S_e1.mat")
    assert code == EXIT_ERROR
    assert "bad_count.mat:3:" in err


def test_non_hermitian_operator_is_an_error(capsys):
    code, _, err = run(capsys, "compat", FIXTURES / "A_nonhermitian.mat", FIXTURES / "S_e1.mat")
    assert code == EXIT_ERROR
    assert "not Hermitian" in err


def test_shorted_rejects_indefinite_operator(capsys):
    code, _, err = run(capsys, "shorted", FIXTURES / "A_swap.mat", FIXTURES / "S_e1.mat")
    assert code == EXIT_ERROR
    assert "positive semidefinite" in err


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["pas"],
        ["--tol-eq", "-1", "pas", "a.mat", "b.mat"],
        ["suite", "--dim", "1"],
        ["suite", "--cases", "many"],
    ],
)
def test_usage_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_USAGE
    assert out == ""


def test_small_suite_run(capsys):
    code, out, _ = run(capsys, "suite", "--seed", "7", "--cases", "2", "--dim", "4")
    report = json.loads(out)
    assert report["command"] == "suite"
    assert report["result"]["seed"] == 7
    assert len(report["result"]["families"]) == 10
    assert code == (EXIT_OK if report["ok"] else EXIT_FALSE)


def test_suite_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("OBLIQUE_SEED", "11")
    _, out, _ = run(capsys, "suite", "--cases", "1", "--dim", "3")
    assert json.loads(out)["result"]["seed"] == 11
