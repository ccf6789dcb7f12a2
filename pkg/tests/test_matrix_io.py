import numpy as np
import pytest

from oblique.models import FieldEnum
from oblique.services import sampling
from oblique.services.errors import ParseError
from oblique.services.matrix_io import (
    MatrixCodec,
    format_matrix,
    parse_matrix,
    write_matrix,
)

from conftest import FIXTURES


def test_parse_real_identity():
    field, M = MatrixCodec.parse("real 2 2\n1 0\n0 1\n")
    assert field is FieldEnum.REAL
    assert np.array_equal(M, np.eye(2))
    assert M.dtype == np.complex128


def test_parse_complex_row():
    field, M = MatrixCodec.parse("complex 1 2\n1,0 0,1\n")
    assert field is FieldEnum.COMPLEX
    assert np.array_equal(M, [[1.0, 1j]])


def test_comments_and_free_layout():
    text = "# leading comment\n\nreal 2 3\n# inside\n1 2\n3 4 5 6\n"
    _, M = MatrixCodec.parse(text)
    assert np.array_equal(M.real, [[1, 2, 3], [4, 5, 6]])


def test_entry_count_mismatch_names_the_line():
    with pytest.raises(ParseError) as info:
        MatrixCodec.parse("real 2 2\n1 2\n3\n", source="short.mat")
    assert info.value.line == 3
    assert str(info.value).startswith("short.mat:3:")


def test_too_many_entries_points_at_the_extra_token():
    with pytest.raises(ParseError) as info:
        MatrixCodec.parse("real 1 2\n1 2 3\n")
    assert (info.value.line, info.value.column) == (2, 5)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("matrix 2 2\n1 0 0 1\n", 1),
        ("real two 2\n", 1),
        ("real 0 2\n", 1),
        ("real 1 1\nnan\n", 2),
        ("real 1 1\n1e999\n", 2),
        ("real 1 1\n1,2\n", 2),
        ("complex 1 1\n1\n", 2),
        ("complex 1 1\n1,2,3\n", 2),
    ],
)
def test_malformed_input(text, line):
    with pytest.raises(ParseError) as info:
        MatrixCodec.parse(text)
    assert info.value.line == line


def test_column_of_bad_imaginary_part():
    with pytest.raises(ParseError) as info:
        MatrixCodec.parse("complex 1 1\n1.5,x\n")
    assert info.value.column == 5


def test_parse_matrix_file():
    loaded = parse_matrix(FIXTURES / "A_shorted.mat")
    assert (loaded.rows, loaded.cols) == (2, 2)
    assert np.array_equal(loaded.matrix.real, [[2.0, 1.0], [1.0, 1.0]])
    assert np.all(loaded.matrix.imag == 0)
    assert len(loaded.sha256) == 64


def test_parse_matrix_reports_count_mismatch():
    with pytest.raises(ParseError, match="expected 4 entries"):
        parse_matrix(FIXTURES / "bad_count.mat")


def test_parse_matrix_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_matrix(tmp_path / "absent.mat")


def test_parse_matrix_rejects_binary(tmp_path):
    path = tmp_path / "binary.mat"
    path.write_bytes(b"\xff\xfe real 1 1")
    with pytest.raises(ParseError):
        parse_matrix(path)


def test_written_matrix_parses_to_identical_values(tmp_path, rng):
    M = sampling.random_matrix(rng, 3, 4) / 7.0
    path = tmp_path / "m.mat"
    write_matrix(path, M, FieldEnum.COMPLEX)
    loaded = parse_matrix(path)
    assert np.array_equal(loaded.matrix, M)


def test_real_format_drops_imaginary_parts():
    text = format_matrix(np.array([[0.1, 2.0]]), FieldEnum.REAL)
    assert text == "real 1 2\n0.1 2.0\n"
