"""Conversions between numpy matrices, API payloads and database rows."""

import hashlib

import numpy as np
import numpy.typing as npt

from ..models import (
    FieldEnum,
    MatrixPayload,
    ReportDocument,
    ReportRecordDB,
    StoredReport,
)
from .numcore import Matrix, as_matrix


def matrix_to_payload(M: npt.ArrayLike, field: FieldEnum) -> MatrixPayload:
    """Serialize a matrix; real-field payloads drop the imaginary parts.

    Args:
        M: Matrix to serialize.
        field: Field tag of the inputs the matrix was computed from.

    Returns:
        MatrixPayload: Row-major real (and imaginary) parts.
    """
    M = np.asarray(M, dtype=np.complex128)
    rows, cols = M.shape
    return MatrixPayload(
        field=field,
        rows=rows,
        cols=cols,
        real=M.real.tolist(),
        imag=None if field is FieldEnum.REAL else M.imag.tolist(),
    )


def optional_payload(M: npt.ArrayLike | None, field: FieldEnum) -> MatrixPayload | None:
    if M is None or np.asarray(M).size == 0:
        return None
    return matrix_to_payload(M, field)


def payload_to_matrix(payload: MatrixPayload) -> Matrix:
    """Rebuild a validated complex matrix from a payload."""
    real = np.asarray(payload.real, dtype=np.float64)
    imag = (
        np.zeros_like(real)
        if payload.imag is None
        else np.asarray(payload.imag, dtype=np.float64)
    )
    return as_matrix(real + 1j * imag)


def payload_sha256(payload: MatrixPayload) -> str:
    return hashlib.sha256(payload.model_dump_json().encode("utf-8")).hexdigest()


def convert_db_to_response(record: ReportRecordDB) -> StoredReport:
    """Convert a stored report row to its API response model.

    Args:
        record: Database row holding the serialized ReportDocument.

    Returns:
        StoredReport: The report with its id and timestamp.
    """
    return StoredReport(
        id=record.id,
        created_at=record.created_at,
        report=ReportDocument.model_validate_json(record.document),
    )
