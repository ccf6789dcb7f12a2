from .api_models import (
    DEFAULT_TOLERANCE,
    AnalysisCommand,
    AnalysisRequest,
    AnglePayload,
    BatteryItemPayload,
    CompatibilityPayload,
    FailureRecord,
    FamilySummary,
    FieldEnum,
    InputDigest,
    MatrixPayload,
    ProjectionPayload,
    ReportDocument,
    ShortedPayload,
    StoredReport,
    SuitePayload,
    ToleranceProfile,
    TwoProjPayload,
    Verdict,
)
from .db_models import ReportRecordDB

__all__ = [
    "DEFAULT_TOLERANCE",
    "AnalysisCommand",
    "AnalysisRequest",
    "AnglePayload",
    "BatteryItemPayload",
    "CompatibilityPayload",
    "FailureRecord",
    "FamilySummary",
    "FieldEnum",
    "InputDigest",
    "MatrixPayload",
    "ProjectionPayload",
    "ReportDocument",
    "ShortedPayload",
    "StoredReport",
    "SuitePayload",
    "ToleranceProfile",
    "TwoProjPayload",
    "Verdict",
    "ReportRecordDB",
]
