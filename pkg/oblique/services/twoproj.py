"""
Pairs of orthogonal projections Q, P and the oblique projection P_{Q,P}.

P_{Q,P} is P_{A,S} with A = Q and S = R(P). In finite dimension it always
exists; with N = ker Q ∩ R(P) it splits as P_N + P_{Q,P₀} where P₀ projects
onto R(P) ⊖ N.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .errors import (
    NotCompatible,
    NotHermitianProjection,
    NotIdempotent,
    ShapeMismatch,
    VerificationFailure,
)
from .numcore import adjoint, close, operator_norm, singular_values
from .projection import Projection
from .projector import compatibility, p_as
from .subspace import (
    Subspace,
    column_space,
    complement,
    equal,
    friedrichs_cos,
    intersect,
    orth_projector,
    orthogonal_difference,
    preimage,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TwoProjReport:
    p_qp: Projection
    norm: float
    norm_via_inverse: float | None
    norm_via_defect: float | None
    norm_via_restriction: float | None
    kernel_ok: bool
    generic: bool


@dataclass(frozen=True)
class BatteryItem:
    name: str
    holds: bool | None
    value: float | None = None
    note: str = ""


def as_orthogonal_projection(
    M: npt.ArrayLike | Projection, tol: ToleranceProfile = DEFAULT_TOLERANCE
) -> Projection:
    """Validate an orthogonal projection (Q = Q² = Q*).

    Raises:
        NotHermitianProjection: If M is not idempotent or not Hermitian.
    """
    try:
        proj = M if isinstance(M, Projection) else Projection.from_matrix(M, tol)
    except NotIdempotent as exc:
        raise NotHermitianProjection(str(exc))
    if not proj.is_orthogonal():
        raise NotHermitianProjection("projection is not Hermitian")
    return proj


def _pair(Q, P, tol: ToleranceProfile) -> tuple[Projection, Projection]:
    Q = as_orthogonal_projection(Q, tol)
    P = as_orthogonal_projection(P, tol)
    if Q.n != P.n:
        raise ShapeMismatch(f"Q is {Q.n}x{Q.n} but P is {P.n}x{P.n}")
    return Q, P


def _p_qp(Q: Projection, S: Subspace, tol: ToleranceProfile) -> Projection:
    try:
        return p_as(Q.matrix, S, tol)
    except NotCompatible as exc:
        logger.error(f"orthogonal pair reported incompatible: {exc}")
        raise VerificationFailure(f"P_(Q,P) does not exist: {exc}")


def p_qp(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> Projection:
    """P_{Q,P}: the Q-selfadjoint projection onto R(P) of minimal norm."""
    Q, P = _pair(Q, P, tol)
    return _p_qp(Q, P.range, tol)


def _split(Q: Projection, P: Projection) -> tuple[Subspace, Subspace]:
    """N = ker Q ∩ R(P) and M = R(P) ⊖ N."""
    N = intersect(Q.kernel, P.range)
    return N, orthogonal_difference(P.range, N)


def _norm_paths(Q: Projection, M: Subspace) -> tuple[float, float, float]:
    """‖(PQP)⁻¹‖^{1/2}, (1 − ‖(I−Q)P₀‖²)^{−1/2} and ‖(Q|_M)⁻¹‖ for P₀ = P_M."""
    basis = M.basis
    compressed = adjoint(basis) @ Q.matrix @ basis
    lowest = float(np.min(np.linalg.eigvalsh((compressed + adjoint(compressed)) / 2)))
    via_inverse = 1.0 / np.sqrt(lowest)

    defect = operator_norm((np.eye(Q.n) - Q.matrix) @ M.projector)
    via_defect = 1.0 / np.sqrt(1.0 - defect**2)

    image = column_space(Q.matrix @ basis, M.tol)
    restriction = adjoint(image.basis) @ Q.matrix @ basis
    via_restriction = 1.0 / float(singular_values(restriction)[-1])
    return via_inverse, via_defect, via_restriction


def norm_report(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> TwoProjReport:
    """‖P_{Q,P}‖ by SVD and by three independent formulas.

    The formulas are evaluated on P₀ = proj(R(P) ⊖ (ker Q ∩ R(P))), which is
    R(P) itself when that intersection is trivial. They are None when P₀ = 0.

    Raises:
        VerificationFailure: If the norms disagree beyond tol_norm.
    """
    Q, P = _pair(Q, P, tol)
    E = _p_qp(Q, P.range, tol)
    norm = E.norm
    _, M = _split(Q, P)

    via_inverse = via_defect = via_restriction = None
    if M.dim > 0:
        via_inverse, via_defect, via_restriction = _norm_paths(Q, M)
        for label, value in (
            ("inverse", via_inverse),
            ("defect", via_defect),
            ("restriction", via_restriction),
        ):
            if abs(norm - value) > tol.tol_norm * max(1.0, norm):
                logger.error(f"‖P_(Q,P)‖ = {norm!r} but the {label} formula gives {value!r}")
                raise VerificationFailure(f"norm formulas disagree ({label}: {value!r} vs {norm!r})")

    return TwoProjReport(
        p_qp=E,
        norm=norm,
        norm_via_inverse=via_inverse,
        norm_via_defect=via_defect,
        norm_via_restriction=via_restriction,
        kernel_ok=kernel_characterization(Q, P, tol),
        generic=generic_position(Q, P, tol),
    )


def kernel_characterization(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """ker P_{Q,P} = Q⁻¹(ker P) ⊖ (ker Q ∩ R(P))."""
    Q, P = _pair(Q, P, tol)
    lhs = _p_qp(Q, P.range, tol).kernel
    rhs = orthogonal_difference(
        preimage(Q.matrix, P.kernel, tol), intersect(Q.kernel, P.range)
    )
    return equal(lhs, rhs, tol)


def generic_position(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """R(Q) ∩ ker P = {0} = ker Q ∩ R(P).

    When true, P_{Q,P} is checked to project onto R(P) along ker Q.
    """
    Q, P = _pair(Q, P, tol)
    generic = (
        intersect(Q.range, P.kernel).dim == 0 and intersect(Q.kernel, P.range).dim == 0
    )
    if generic:
        E = _p_qp(Q, P.range, tol)
        if not (equal(E.range, P.range, tol) and equal(E.kernel, Q.kernel, tol)):
            logger.error("generic pair: P_(Q,P) does not project onto R(P) along ker Q")
            raise VerificationFailure("generic position check failed")
    return generic


def decompose(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> tuple[Projection, Projection]:
    """(P_N, P_{Q,P₀}) with P_{Q,P} = P_N + P_{Q,P₀}.

    Raises:
        VerificationFailure: If the sum or the norm identity fails.
    """
    Q, P = _pair(Q, P, tol)
    N, M = _split(Q, P)
    p_n = orth_projector(N)
    if M.dim == 0:
        p_qp0 = Projection(np.zeros((Q.n, Q.n), dtype=np.complex128), tol)
    else:
        p_qp0 = _p_qp(Q, M, tol)

    whole = _p_qp(Q, P.range, tol)
    if not close(p_n.matrix + p_qp0.matrix, whole.matrix, tol, scale=whole.norm):
        gap = operator_norm(p_n.matrix + p_qp0.matrix - whole.matrix)
        logger.error(f"P_N + P_(Q,P0) differs from P_(Q,P) by {gap:.3e}")
        raise VerificationFailure(f"decomposition residual {gap:.3e}")
    if M.dim > 0 and abs(whole.norm - p_qp0.norm) > tol.tol_norm * max(1.0, whole.norm):
        logger.error(f"‖P_(Q,P)‖ = {whole.norm!r} but ‖P_(Q,P0)‖ = {p_qp0.norm!r}")
        raise VerificationFailure("decomposition changed the norm")
    logger.debug(f"decompose: dim N = {N.dim}, dim M = {M.dim}")
    return p_n, p_qp0


_CLOSED_IN_FINITE_DIMENSION = (
    "ker Q + R(P) closed",
    "ker P + R(Q) closed",
    "R(PQ) closed",
    "R(QP) closed",
    "R(I − P + Q) closed",
    "R(I − Q + P) closed",
)


def equivalence_battery(
    Q: npt.ArrayLike | Projection,
    P: npt.ArrayLike | Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> list[BatteryItem]:
    """Conditions equivalent to the existence of P_{Q,P}, evaluated one by one.

    The closedness conditions hold trivially in finite dimension and are
    reported as such. The defect bound ‖(I−Q)P‖ < 1 is gated on
    ker Q ∩ R(P) = {0}; otherwise it is reported with `holds=None`.
    """
    Q, P = _pair(Q, P, tol)
    S, T = P.range, Q.range
    items = [
        BatteryItem("(Q, R(P)) compatible", compatibility(Q.matrix, S, tol).compatible),
        BatteryItem("(P, R(Q)) compatible", compatibility(P.matrix, T, tol).compatible),
    ]
    items.extend(
        BatteryItem(name, True, note="finite-dimensional") for name in _CLOSED_IN_FINITE_DIMENSION
    )

    c_left = friedrichs_cos(S, complement(T))
    c_right = friedrichs_cos(T, complement(S))
    symmetric = abs(c_left - c_right) <= tol.tol_norm
    items.append(
        BatteryItem(
            "c(S, T⊥) = c(T, S⊥) < 1",
            symmetric and c_left < 1.0 - tol.tol_rank,
            value=c_left,
        )
    )

    if intersect(Q.kernel, S).dim == 0:
        defect = operator_norm((np.eye(Q.n) - Q.matrix) @ P.matrix)
        items.append(BatteryItem("‖(I − Q)P‖ < 1", defect < 1.0 - tol.tol_rank, value=defect))
    else:
        items.append(BatteryItem("‖(I − Q)P‖ < 1", None, note="ker Q ∩ R(P) ≠ {0}"))
    return items
