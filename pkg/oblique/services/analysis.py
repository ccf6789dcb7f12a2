"""
Two-operand analyses shared by the command line and the HTTP router.

Each analysis turns its operands into a ReportDocument whose `ok` field is
the principal verdict of the command.
"""

import logging

import numpy as np

from ..models import (
    AnalysisCommand,
    AnglePayload,
    BatteryItemPayload,
    CompatibilityPayload,
    FieldEnum,
    InputDigest,
    ProjectionPayload,
    ReportDocument,
    ShortedPayload,
    ToleranceProfile,
    TwoProjPayload,
    Verdict,
)
from .converters import matrix_to_payload, optional_payload
from .numcore import Matrix, as_hermitian, field_of, operator_norm
from .projector import compatibility, is_a_selfadjoint, p_as
from .shorted import (
    is_admissible,
    range_identity,
    shorted,
    shorted_compatible,
    shorted_via_projection,
)
from .subspace import from_spanning, friedrichs_cos
from .twoproj import as_orthogonal_projection, decompose, equivalence_battery, norm_report

logger = logging.getLogger(__name__)


def _compat(A: Matrix, spanning: Matrix, tol: ToleranceProfile, field: FieldEnum):
    S = from_spanning(spanning, tol)
    report = compatibility(A, S, tol)
    payload = CompatibilityPayload(
        compatible=report.compatible,
        cond_range_pa=report.cond_range_pa,
        cond_block=report.cond_block,
        cond_sum=report.cond_sum,
        unique=report.unique,
        n_dim=report.n_dim,
        cond_angle=report.cond_angle,
        pap_closure=report.pap_closure,
        a=optional_payload(report.a, field),
        b=optional_payload(report.b, field),
        d=optional_payload(report.d, field),
    )
    verdicts = [
        Verdict(name="compatible", value=report.compatible),
        Verdict(name="cond_range_pa", value=report.cond_range_pa),
        Verdict(name="cond_block", value=report.cond_block),
        Verdict(name="cond_sum", value=report.cond_sum),
        Verdict(name="unique", value=report.unique),
    ]
    for name in ("cond_angle", "pap_closure"):
        value = getattr(report, name)
        if value is not None:
            verdicts.append(Verdict(name=name, value=value))
    return report.compatible, payload, verdicts


def _pas(A: Matrix, spanning: Matrix, tol: ToleranceProfile, field: FieldEnum):
    hermitian = as_hermitian(A, tol)
    S = from_spanning(spanning, tol)
    report = compatibility(hermitian, S, tol)
    verdicts = [
        Verdict(name="compatible", value=report.compatible),
        Verdict(name="unique", value=report.unique),
    ]
    if not report.compatible:
        payload = ProjectionPayload(
            compatible=False, unique=report.unique, n_dim=report.n_dim
        )
        return False, payload, verdicts

    projection = p_as(hermitian, S, tol)
    verdicts.append(
        Verdict(name="a_selfadjoint", value=is_a_selfadjoint(hermitian, projection, tol))
    )
    payload = ProjectionPayload(
        compatible=True,
        unique=report.unique,
        n_dim=report.n_dim,
        projection=matrix_to_payload(projection.matrix, field),
        norm=projection.norm,
    )
    return True, payload, verdicts


def _shorted(A: Matrix, spanning: Matrix, tol: ToleranceProfile, field: FieldEnum):
    hermitian = as_hermitian(A, tol).require_psd(tol)
    S = from_spanning(spanning, tol)
    routes = {
        "block": shorted(hermitian, S, tol).sigma.matrix,
        "projection": shorted_via_projection(hermitian, S, tol, check=False).sigma.matrix,
        "compatible": shorted_compatible(hermitian, S, tol, check=False).sigma.matrix,
    }
    residuals = {
        "block_projection": operator_norm(routes["block"] - routes["projection"]),
        "block_compatible": operator_norm(routes["block"] - routes["compatible"]),
        "projection_compatible": operator_norm(routes["projection"] - routes["compatible"]),
    }
    bound = tol.tol_eq * max(1.0, hermitian.norm)
    routes_agree = all(r <= bound for r in residuals.values())
    identity = range_identity(hermitian, S, tol)
    admissible = is_admissible(hermitian, S, tol)
    payload = ShortedPayload(
        block=matrix_to_payload(routes["block"], field),
        projection=matrix_to_payload(routes["projection"], field),
        compatible=matrix_to_payload(routes["compatible"], field),
        residuals=residuals,
        routes_agree=routes_agree,
        admissible=admissible,
        range_identity=identity.equal,
    )
    verdicts = [
        Verdict(name="routes_agree", value=routes_agree),
        Verdict(name="range_identity", value=identity.equal),
        Verdict(name="range_chain", value=identity.chain),
        Verdict(name="admissible", value=admissible),
    ]
    return routes_agree and identity.equal, payload, verdicts


def _twoproj(Q: Matrix, P: Matrix, tol: ToleranceProfile, field: FieldEnum):
    Q = as_orthogonal_projection(Q, tol)
    P = as_orthogonal_projection(P, tol)
    report = norm_report(Q, P, tol)
    p_n, p_qp0 = decompose(Q, P, tol)
    battery = equivalence_battery(Q, P, tol)
    payload = TwoProjPayload(
        p_qp=matrix_to_payload(report.p_qp.matrix, field),
        norm=report.norm,
        norm_via_inverse=report.norm_via_inverse,
        norm_via_defect=report.norm_via_defect,
        norm_via_restriction=report.norm_via_restriction,
        kernel_ok=report.kernel_ok,
        generic=report.generic,
        p_n=matrix_to_payload(p_n.matrix, field),
        p_qp0=matrix_to_payload(p_qp0.matrix, field),
        battery=[
            BatteryItemPayload(name=item.name, holds=item.holds, value=item.value)
            for item in battery
        ],
    )
    battery_ok = all(item.holds is not False for item in battery)
    verdicts = [
        Verdict(name="kernel_ok", value=report.kernel_ok),
        Verdict(name="generic", value=report.generic),
        Verdict(name="battery", value=battery_ok),
    ]
    return report.kernel_ok and battery_ok, payload, verdicts


def _angle(first: Matrix, second: Matrix, tol: ToleranceProfile, field: FieldEnum):
    S = from_spanning(first, tol)
    T = from_spanning(second, tol)
    cosine = friedrichs_cos(S, T)
    payload = AnglePayload(
        cosine=cosine,
        angle=float(np.arccos(cosine)),
        dim_s=S.dim,
        dim_t=T.dim,
        dim_intersection=S.dim + T.dim - from_spanning(np.hstack([S.basis, T.basis]), tol).dim,
    )
    return True, payload, [Verdict(name="strictly_below_one", value=cosine < 1.0)]


_DISPATCH = {
    AnalysisCommand.COMPAT: _compat,
    AnalysisCommand.PAS: _pas,
    AnalysisCommand.SHORTED: _shorted,
    AnalysisCommand.TWOPROJ: _twoproj,
    AnalysisCommand.ANGLE: _angle,
}


def run_analysis(
    command: AnalysisCommand,
    first: Matrix,
    second: Matrix,
    tol: ToleranceProfile,
    inputs: list[InputDigest],
    field: FieldEnum | None = None,
) -> ReportDocument:
    """Run one two-operand analysis and wrap it in a ReportDocument.

    Args:
        command: Which analysis to run.
        first: A (or Q for `twoproj`, or a spanning set of S for `angle`).
        second: Spanning set of S (or P for `twoproj`, or of T for `angle`).
        tol: Tolerance profile for every decision.
        inputs: Digests of the operands, copied into the report.
        field: Output field; inferred from the operands when omitted.

    Raises:
        ObliqueError: Any analysis error, unchanged.
    """
    field = field or field_of(first, second)
    logger.info(f"running {command.value} on {first.shape} and {second.shape}")
    ok, payload, verdicts = _DISPATCH[command](first, second, tol, field)
    return ReportDocument(
        command=command.value,
        inputs=inputs,
        tolerance=tol,
        ok=ok,
        result=payload,
        verdicts=verdicts,
    )
