"""
Range inclusion and reduced solutions of A·X = B.

For matrices the reduced solution is D = A†·B: the unique solution with
ker D = ker B and R(D) ⊆ R(A*). Its squared norm equals the Douglas bound
inf{λ : BB* ≤ λ·AA*}, which `lambda_star` computes by bisection on the PSD
order without going through D.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .errors import RangeNotIncluded, ShapeMismatch, VerificationFailure
from .numcore import Matrix, adjoint, operator_norm, psd_leq, rank_cutoff, svd
from .projection import Projection

logger = logging.getLogger(__name__)

BISECTION_STEPS = 60


@dataclass(frozen=True, eq=False)
class ReducedSolutionResult:
    D: Matrix
    norm_sq: float
    lambda_star: float | None


def _check_rows(A: npt.NDArray, B: npt.NDArray) -> None:
    if A.ndim != 2 or B.ndim != 2 or A.shape[0] != B.shape[0]:
        raise ShapeMismatch(
            f"A{A.shape} and B{B.shape} must have the same number of rows"
        )


def _range_basis(A: npt.NDArray, tol: ToleranceProfile, scale: float | None):
    U, sigma, V = svd(A)
    r = int(np.count_nonzero(sigma > rank_cutoff(sigma, tol, scale)))
    return U[:, :r], sigma[:r], V[:, :r]


def inclusion_residual(
    B: npt.NDArray,
    A: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> tuple[float, float]:
    """Return (‖(I − P_R(A))·B‖, tol_eq·max(1, ‖B‖))."""
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    _check_rows(A, B)
    U_r, _, _ = _range_basis(A, tol, scale)
    residual = operator_norm(B - U_r @ (adjoint(U_r) @ B))
    return residual, tol.tol_eq * max(1.0, operator_norm(B))


def range_included(
    B: npt.NDArray,
    A: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> bool:
    """R(B) ⊆ R(A) under the rank policy.

    `scale` enters the rank cutoff for A, for blocks cut out of a larger
    operator.
    """
    residual, threshold = inclusion_residual(B, A, tol, scale)
    logger.debug(f"range inclusion residual {residual:.3e} (threshold {threshold:.3e})")
    return residual <= threshold


def lambda_star(
    A: npt.NDArray,
    B: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> float:
    """inf{λ ≥ 0 : BB* ≤ λ·AA*} by bisection.

    With A = U_r·Σ_r·V_r* and R(B) ⊆ R(A), the order BB* ≤ λ·AA* is congruent
    to W·W* ≤ λ·I with W = Σ_r⁻¹·U_r*·B, so each step is one PSD test.

    Raises:
        RangeNotIncluded: If R(B) ⊄ R(A); then no finite λ exists.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    residual, threshold = inclusion_residual(B, A, tol, scale)
    if residual > threshold:
        raise RangeNotIncluded(residual, threshold)
    U_r, sigma_r, _ = _range_basis(A, tol, scale)
    if sigma_r.size == 0:
        return 0.0
    W = (adjoint(U_r) @ B) / sigma_r[:, None]
    G = W @ adjoint(W)
    identity = np.eye(G.shape[0], dtype=np.complex128)

    lo, hi = 0.0, (operator_norm(B) / sigma_r[-1]) ** 2 + 1.0
    for _ in range(BISECTION_STEPS):
        mid = (lo + hi) / 2
        if psd_leq(G, mid * identity, tol):
            hi = mid
        else:
            lo = mid
    return hi


def reduced_solution(
    A: npt.NDArray,
    B: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    bound: bool = True,
    scale: float | None = None,
) -> ReducedSolutionResult:
    """Reduced solution D = A†·B of A·X = B.

    Args:
        A: Coefficient matrix.
        B: Right-hand side with the same number of rows as A.
        tol: Tolerance profile.
        bound: Also compute `lambda_star` and check it against ‖D‖².
        scale: Operator norm used for the rank cutoff of A.

    Raises:
        RangeNotIncluded: If R(B) ⊄ R(A).
        ShapeMismatch: If the row counts differ.
        VerificationFailure: If ‖AD − B‖ or, with `bound`, ‖D‖² against the
            Douglas bound fails its tolerance.
    """
    A = np.asarray(A, dtype=np.complex128)
    B = np.asarray(B, dtype=np.complex128)
    residual, threshold = inclusion_residual(B, A, tol, scale)
    if residual > threshold:
        raise RangeNotIncluded(residual, threshold)

    U_r, sigma_r, V_r = _range_basis(A, tol, scale)
    D = (V_r / sigma_r) @ (adjoint(U_r) @ B)
    norm_sq = operator_norm(D) ** 2

    fit = operator_norm(A @ D - B)
    fit_bound = tol.tol_eq * max(1.0, operator_norm(B))
    if fit > fit_bound:
        logger.error(f"reduced solution residual ‖AD − B‖ = {fit:.3e} exceeds {fit_bound:.3e}")
        raise VerificationFailure(f"‖AD − B‖ = {fit:.3e} exceeds {fit_bound:.3e}")

    lam = None
    if bound:
        lam = lambda_star(A, B, tol, scale)
        if abs(norm_sq - lam) > tol.tol_norm * max(1.0, lam):
            logger.error(f"‖D‖² = {norm_sq!r} and the Douglas bound {lam!r} disagree")
            raise VerificationFailure(
                f"‖D‖² = {norm_sq!r} differs from the Douglas bound {lam!r}"
            )
    return ReducedSolutionResult(D=D, norm_sq=norm_sq, lambda_star=lam)


def reduced_idempotent(
    A: npt.NDArray, Q: Projection, tol: ToleranceProfile = DEFAULT_TOLERANCE
) -> Projection:
    """Reduced solution of A·X = Q·A, which is again idempotent.

    Raises:
        RangeNotIncluded: If R(Q·A) ⊄ R(A).
        NotIdempotent: If the result fails the idempotency check.
    """
    A = np.asarray(A, dtype=np.complex128)
    result = reduced_solution(A, Q.matrix @ A, tol, bound=False)
    return Projection.from_matrix(result.D, tol)
