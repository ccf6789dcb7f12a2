import logging
from datetime import datetime
from enum import Enum
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

logger = logging.getLogger(__name__)


class FieldEnum(str, Enum):
    """Scalar field of a matrix file; used for output formatting only."""

    REAL = "real"
    COMPLEX = "complex"


class AnalysisCommand(str, Enum):
    """Analyses that take two matrix inputs."""

    COMPAT = "compat"
    PAS = "pas"
    SHORTED = "shorted"
    TWOPROJ = "twoproj"
    ANGLE = "angle"


class ToleranceProfile(BaseModel):
    """Relative tolerances shared by every rank and equality decision."""

    model_config = ConfigDict(frozen=True)

    tol_rank: Annotated[
        float, Field(gt=0, description="Relative singular-value cutoff")
    ] = 1e-10
    tol_eq: Annotated[
        float, Field(gt=0, description="Relative matrix-equality tolerance")
    ] = 1e-8
    tol_norm: Annotated[
        float, Field(gt=0, description="Tolerance for scalar comparisons")
    ] = 1e-8

    @model_validator(mode="after")
    def _warn_on_order(self) -> "ToleranceProfile":
        if self.tol_rank > self.tol_eq:
            logger.warning(
                f"tol_rank={self.tol_rank} exceeds tol_eq={self.tol_eq}; rank decisions may be looser than equality checks"
            )
        return self


DEFAULT_TOLERANCE = ToleranceProfile()


class MatrixPayload(BaseModel):
    """Dense matrix in row-major nested lists; `imag` is omitted for real matrices."""

    field: Annotated[FieldEnum, Field(description="Scalar field tag")]
    rows: Annotated[int, Field(ge=1)]
    cols: Annotated[int, Field(ge=1)]
    real: Annotated[list[list[float]], Field(description="Real parts, row-major")]
    imag: Annotated[
        list[list[float]] | None, Field(description="Imaginary parts, row-major")
    ] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "MatrixPayload":
        parts = [self.real] if self.imag is None else [self.real, self.imag]
        for part in parts:
            if len(part) != self.rows or any(len(row) != self.cols for row in part):
                raise ValueError(
                    f"payload entries do not match the declared shape {self.rows}x{self.cols}"
                )
        return self


class InputDigest(BaseModel):
    name: Annotated[str, Field(description="Input file name or request slot")]
    sha256: Annotated[str, Field(description="SHA-256 of the input bytes")]


class Verdict(BaseModel):
    name: str
    value: bool


class CompatibilityPayload(BaseModel):
    """Independent verdicts for the equivalent compatibility conditions."""

    kind: Literal["compat"] = "compat"
    compatible: bool
    cond_range_pa: Annotated[bool, Field(description="R(PA) = R(PAP)")]
    cond_block: Annotated[bool, Field(description="R(b) ⊆ R(a)")]
    cond_sum: Annotated[bool, Field(description="S + A^-1(S^⊥) = H")]
    unique: Annotated[bool, Field(description="S ⊕ A^-1(S^⊥) = H")]
    n_dim: Annotated[int, Field(ge=0, description="dim of S ∩ A^-1(S^⊥)")]
    cond_angle: Annotated[
        bool | None, Field(description="c(S, ker A) < 1; PSD operators only")
    ] = None
    pap_closure: Annotated[
        bool | None, Field(description="R(PAP) = S ⊖ (S ∩ ker A); PSD operators only")
    ] = None
    a: MatrixPayload | None = None
    b: MatrixPayload | None = None
    d: MatrixPayload | None = None


class ProjectionPayload(BaseModel):
    kind: Literal["pas"] = "pas"
    compatible: bool
    unique: bool
    n_dim: Annotated[int, Field(ge=0)]
    projection: MatrixPayload | None = None
    norm: Annotated[float | None, Field(ge=0)] = None


class ShortedPayload(BaseModel):
    """The shorted operator by all three routes with pairwise residuals."""

    kind: Literal["shorted"] = "shorted"
    block: MatrixPayload
    projection: MatrixPayload
    compatible: MatrixPayload
    residuals: Annotated[
        dict[str, float], Field(description="Pairwise operator-norm residuals")
    ]
    routes_agree: bool
    admissible: bool
    range_identity: bool


class BatteryItemPayload(BaseModel):
    name: str
    holds: bool | None
    value: float | None = None


class TwoProjPayload(BaseModel):
    kind: Literal["twoproj"] = "twoproj"
    p_qp: MatrixPayload
    norm: Annotated[float, Field(ge=0)]
    norm_via_inverse: float | None = None
    norm_via_defect: float | None = None
    norm_via_restriction: float | None = None
    kernel_ok: bool
    generic: bool
    p_n: MatrixPayload
    p_qp0: MatrixPayload
    battery: list[BatteryItemPayload]


class AnglePayload(BaseModel):
    kind: Literal["angle"] = "angle"
    cosine: Annotated[float, Field(ge=0, le=1)]
    angle: Annotated[float, Field(ge=0, description="Friedrichs angle in radians")]
    dim_s: Annotated[int, Field(ge=0)]
    dim_t: Annotated[int, Field(ge=0)]
    dim_intersection: Annotated[int, Field(ge=0)]


class FamilySummary(BaseModel):
    name: str
    cases: Annotated[int, Field(ge=0)]
    checks: Annotated[int, Field(ge=0)]
    failures: Annotated[int, Field(ge=0)]


class FailureRecord(BaseModel):
    family: str
    case: int
    check: str
    detail: str = ""


class SuitePayload(BaseModel):
    kind: Literal["suite"] = "suite"
    seed: int
    cases: Annotated[int, Field(ge=0)]
    dim: Annotated[int, Field(ge=2)]
    families: list[FamilySummary]
    failures: Annotated[
        list[FailureRecord], Field(description="First failures, in family/case order")
    ]
    total_checks: Annotated[int, Field(ge=0)]
    total_failures: Annotated[int, Field(ge=0)]


ResultPayload = Annotated[
    CompatibilityPayload
    | ProjectionPayload
    | ShortedPayload
    | TwoProjPayload
    | AnglePayload
    | SuitePayload,
    Field(discriminator="kind"),
]


class ReportDocument(BaseModel):
    """Machine-readable outcome of one command."""

    schema_version: Literal["1"] = "1"
    command: str
    inputs: list[InputDigest]
    tolerance: ToleranceProfile
    ok: Annotated[bool, Field(description="Principal verdict; drives exit code 0/2")]
    result: ResultPayload
    verdicts: list[Verdict]


class AnalysisRequest(BaseModel):
    """Two matrix operands for an HTTP analysis request."""

    first: Annotated[
        MatrixPayload, Field(description="A (or Q, or S spanning set for `angle`)")
    ]
    second: Annotated[
        MatrixPayload, Field(description="Spanning set of S (or P, or T for `angle`)")
    ]
    tolerance: ToleranceProfile | None = None


class StoredReport(BaseModel):
    """A report as persisted by the HTTP surface."""

    id: Annotated[int, Field(ge=1)]
    created_at: Annotated[datetime, Field(description="Timestamp of the analysis")]
    report: ReportDocument
