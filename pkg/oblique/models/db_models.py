from datetime import datetime

from sqlmodel import Field, SQLModel

from .api_models import AnalysisCommand


class ReportRecordDB(SQLModel, table=True):
    """Database model for storing analysis reports submitted over HTTP."""

    id: int | None = Field(default=None, primary_key=True)

    command: AnalysisCommand
    ok: bool
    document: str
    created_at: datetime
