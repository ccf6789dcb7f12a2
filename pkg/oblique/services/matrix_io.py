"""
Reading and writing the plain-text matrix format.

    # optional comment lines
    <real|complex> <rows> <cols>
    entries, whitespace separated, row-major

A complex entry is written `re,im` with no interior spaces. Floats are written
with `repr`, which reproduces every double exactly on re-parse.
"""

import hashlib
import logging
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import numpy.typing as npt

from ..models import FieldEnum
from .errors import ParseError
from .numcore import Matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixFile:
    field: FieldEnum
    rows: int
    cols: int
    matrix: Matrix
    sha256: str


class MatrixCodec:
    """Parser and formatter for matrix files."""

    HEADER = re.compile(r"^(?P<field>\S+)\s+(?P<rows>\S+)\s+(?P<cols>\S+)$")

    # Decimal literals only: no nan/inf, no underscores
    NUMBER = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")

    TOKEN = re.compile(r"\S+")

    COMMENT = "#"

    @classmethod
    def _number(cls, token: str, source: str, line: int, column: int) -> float:
        if not cls.NUMBER.match(token):
            raise ParseError(f"invalid number {token!r}", source, line, column)
        value = float(token)
        if not np.isfinite(value):
            raise ParseError(f"number {token!r} is not finite", source, line, column)
        return value

    @classmethod
    def _entry(
        cls, token: str, field: FieldEnum, source: str, line: int, column: int
    ) -> complex:
        if field is FieldEnum.REAL:
            if "," in token:
                raise ParseError(
                    f"complex entry {token!r} in a real matrix", source, line, column
                )
            return complex(cls._number(token, source, line, column), 0.0)
        parts = token.split(",")
        if len(parts) != 2:
            raise ParseError(
                f"complex entry must be 're,im', got {token!r}", source, line, column
            )
        re_part = cls._number(parts[0], source, line, column)
        im_part = cls._number(parts[1], source, line, column + len(parts[0]) + 1)
        return complex(re_part, im_part)

    @classmethod
    def _header(cls, text: str, source: str, line: int) -> tuple[FieldEnum, int, int]:
        match = cls.HEADER.match(text.strip())
        if not match:
            raise ParseError(
                "header must be '<real|complex> <rows> <cols>'", source, line
            )
        try:
            field = FieldEnum(match["field"])
        except ValueError:
            raise ParseError(
                f"unknown field {match['field']!r}, expected real or complex",
                source,
                line,
            )
        dims = []
        for name in ("rows", "cols"):
            raw = match[name]
            if not raw.isdigit() or int(raw) < 1:
                raise ParseError(
                    f"{name} must be a positive integer, got {raw!r}",
                    source,
                    line,
                    match.start(name) + 1,
                )
            dims.append(int(raw))
        return field, dims[0], dims[1]

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> tuple[FieldEnum, Matrix]:
        """Parse matrix text into its field tag and a complex matrix.

        Raises:
            ParseError: With the source name, line and column of the problem.
        """
        header = None
        entries: list[complex] = []
        expected = 0
        last_line = 0

        for number, raw in enumerate(text.splitlines(), start=1):
            last_line = number
            stripped = raw.strip()
            if not stripped or stripped.startswith(cls.COMMENT):
                continue
            if header is None:
                header = cls._header(raw, source, number)
                expected = header[1] * header[2]
                continue
            field = header[0]
            for token in cls.TOKEN.finditer(raw):
                if len(entries) == expected:
                    raise ParseError(
                        f"too many entries, expected {expected}",
                        source,
                        number,
                        token.start() + 1,
                    )
                entries.append(
                    cls._entry(token.group(), field, source, number, token.start() + 1)
                )

        if header is None:
            raise ParseError("missing header", source, max(last_line, 1))
        if len(entries) != expected:
            raise ParseError(
                f"expected {expected} entries, found {len(entries)}",
                source,
                max(last_line, 1),
            )
        field, rows, cols = header
        matrix = np.array(entries, dtype=np.complex128).reshape(rows, cols)
        return field, matrix

    @staticmethod
    def _float(value: float) -> str:
        return repr(float(value))

    @classmethod
    def format(cls, M: npt.ArrayLike, field: FieldEnum) -> str:
        M = np.asarray(M, dtype=np.complex128)
        rows, cols = M.shape
        lines = [f"{field.value} {rows} {cols}"]
        for row in M:
            if field is FieldEnum.REAL:
                tokens = [cls._float(x.real) for x in row]
            else:
                tokens = [f"{cls._float(x.real)},{cls._float(x.imag)}" for x in row]
            lines.append(" ".join(tokens))
        return "\n".join(lines) + "\n"


def parse_matrix(path: str | Path) -> MatrixFile:
    """Load a matrix file; real files get zero imaginary parts.

    Raises:
        ParseError: If the content is malformed.
        OSError: If the file cannot be read.
    """
    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"file is not UTF-8: {exc.reason}", path.name, 1)
    field, matrix = MatrixCodec.parse(text, source=str(path))
    logger.debug(f"parsed {path}: {field.value} {matrix.shape}")
    return MatrixFile(
        field=field,
        rows=matrix.shape[0],
        cols=matrix.shape[1],
        matrix=matrix,
        sha256=hashlib.sha256(data).hexdigest(),
    )


def format_matrix(M: npt.ArrayLike, field: FieldEnum = FieldEnum.COMPLEX) -> str:
    return MatrixCodec.format(M, field)


def write_matrix(path: str | Path, M: npt.ArrayLike, field: FieldEnum = FieldEnum.COMPLEX) -> None:
    Path(path).write_text(format_matrix(M, field), encoding="utf-8")
