"""
Analysis Router

Runs the two-operand analyses over HTTP and keeps every report in the database.

Endpoints:
    POST /analysis/{command}    - Run an analysis and store its report
    GET /analysis/{report_id}   - Retrieve a stored report by ID
    GET /analysis/              - List stored reports, most recent first
"""

from datetime import datetime, timezone
from typing import Annotated

from fastapi import APIRouter, Body, Depends, HTTPException, Path, Query, status
from sqlalchemy.exc import NoResultFound
from sqlmodel import desc, select

from ..models import (
    AnalysisCommand,
    AnalysisRequest,
    FieldEnum,
    InputDigest,
    ReportRecordDB,
    StoredReport,
)
from ..services.analysis import run_analysis
from ..services.config import get_settings
from ..services.converters import convert_db_to_response, payload_sha256, payload_to_matrix
from ..services.database import SessionDep
from ..services.security import verify_api_key

router = APIRouter(
    prefix="/analysis",
    tags=["Operator Analysis"],
    dependencies=[Depends(verify_api_key)],
    responses={
        status.HTTP_401_UNAUTHORIZED: {
            "description": "Authentication failed - invalid or missing API key",
            "content": {"application/json": {"example": {"detail": "Invalid API key"}}},
        },
        status.HTTP_500_INTERNAL_SERVER_ERROR: {
            "description": "Internal server error",
            "content": {
                "application/json": {"example": {"detail": "Internal server error"}}
            },
        },
    },
)


# $ POST: /analysis/{command}
@router.post(
    "/{command}",
    summary="Run an analysis",
    description="Analyze a pair of matrices and store the resulting report",
    response_description="The stored report with its id",
    status_code=status.HTTP_201_CREATED,
    responses={
        status.HTTP_201_CREATED: {"description": "Analysis completed"},
        status.HTTP_422_UNPROCESSABLE_ENTITY: {
            "description": "Malformed operands or an analysis error"
        },
    },
)
def analyze(
    command: Annotated[
        AnalysisCommand,
        Path(title="Analysis", description="compat, pas, shorted, twoproj or angle"),
    ],
    request: Annotated[AnalysisRequest, Body()],
    session: SessionDep,
) -> StoredReport:
    """
    Run one analysis on the submitted operands.

    The report is the same document the command line prints; `ok` holds the
    principal verdict. Analysis errors (for instance a non-Hermitian A) come
    back as 422 with the error message.
    """
    tol = request.tolerance or get_settings().tolerance
    first = payload_to_matrix(request.first)
    second = payload_to_matrix(request.second)
    field = (
        FieldEnum.COMPLEX
        if FieldEnum.COMPLEX in (request.first.field, request.second.field)
        else FieldEnum.REAL
    )
    inputs = [
        InputDigest(name="first", sha256=payload_sha256(request.first)),
        InputDigest(name="second", sha256=payload_sha256(request.second)),
    ]
    report = run_analysis(command, first, second, tol, inputs, field)

    try:
        record = ReportRecordDB(
            command=command,
            ok=report.ok,
            document=report.model_dump_json(),
            created_at=datetime.now(timezone.utc),
        )
        session.add(record)
        session.commit()
        session.refresh(record)  # Refresh to get the assigned ID
    except Exception:
        session.rollback()
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Database error occurred while storing the report",
        )
    return convert_db_to_response(record)


# $ GET: /analysis/{report_id}
@router.get(
    "/{report_id}",
    summary="Retrieve a stored report",
    responses={
        status.HTTP_200_OK: {"description": "Report retrieved successfully"},
        status.HTTP_404_NOT_FOUND: {"description": "Report not found"},
    },
)
def get_report(
    report_id: Annotated[
        int,
        Path(title="Report ID", description="Identifier of the stored report", ge=1),
    ],
    session: SessionDep,
) -> StoredReport:
    statement = select(ReportRecordDB).where(ReportRecordDB.id == report_id)
    try:
        record = session.exec(statement).one()
    except NoResultFound:
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail=f"Report with ID {report_id} not found",
        )
    return convert_db_to_response(record)


# $ GET: /analysis
@router.get(
    "/",
    summary="List stored reports",
    response_description="Reports ordered by most recent first",
)
def list_reports(
    session: SessionDep,
    limit: Annotated[
        int,
        Query(title="Result Limit", description="Maximum number of reports", ge=1, le=1000),
    ] = 100,
) -> list[StoredReport]:
    statement = select(ReportRecordDB).order_by(desc(ReportRecordDB.id)).limit(limit)
    return [convert_db_to_response(record) for record in session.exec(statement).all()]
