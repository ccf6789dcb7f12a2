"""
The shorted operator Σ(P,A) of a PSD A to S⊥.

Σ(P,A) is the largest PSD X with X ≤ A and R(X) ⊆ S⊥. It is computed three
ways (block Schur complement, A^{1/2}·P_M·A^{1/2}, and A·Q_{A,S}) and the
routes check each other.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .douglas import reduced_solution
from .errors import NotInvertible, RangeNotIncluded, VerificationFailure
from .numcore import (
    HermitianMatrix,
    Matrix,
    adjoint,
    as_hermitian,
    close,
    hermitian_part,
    operator_norm,
    psd_leq,
    psd_sqrt,
)
from .projection import Projection
from .projector import block_form, q_as
from .sampling import random_idempotent_with_kernel
from .subspace import (
    Subspace,
    column_space,
    complement,
    contains,
    equal,
    intersect,
    kernel,
    orth_projector,
    preimage,
)

logger = logging.getLogger(__name__)


class ShortedRoute(str, Enum):
    BLOCK = "block"
    PROJECTION = "projection"
    COMPATIBLE = "compatible"


@dataclass(frozen=True, eq=False)
class ShortedResult:
    """Σ(P,A) with the route that produced it.

    `d_witness` is the reduced solution of a^{1/2}·x = b (block route only);
    `auxiliary` is P_M for the projection route and Q_{A,S} for the
    compatible route.
    """

    sigma: HermitianMatrix
    route: ShortedRoute
    d_witness: Matrix | None = None
    auxiliary: Projection | None = None


@dataclass(frozen=True)
class RangeIdentity:
    equal: bool
    chain: bool


def _psd(A: npt.ArrayLike | HermitianMatrix, tol: ToleranceProfile) -> HermitianMatrix:
    return as_hermitian(A, tol).require_psd(tol)


def _verify_minorant(
    sigma: HermitianMatrix, A: HermitianMatrix, S: Subspace, tol: ToleranceProfile
) -> None:
    zero = np.zeros_like(A.matrix)
    if not psd_leq(zero, sigma.matrix, tol, scale=A.norm):
        logger.error(f"shorted operator has eigenvalue {sigma.min_eigenvalue:.3e}")
        raise VerificationFailure("shorted operator is not PSD")
    if not psd_leq(sigma.matrix, A.matrix, tol, scale=A.norm):
        logger.error("shorted operator is not dominated by A")
        raise VerificationFailure("shorted operator exceeds A")
    leak = operator_norm(S.projector @ sigma.matrix)
    if leak > tol.tol_eq * max(1.0, A.norm):
        logger.error(f"shorted operator leaks into S (‖P_S·Σ‖ = {leak:.3e})")
        raise VerificationFailure("range of the shorted operator is not inside S⊥")


def shorted(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> ShortedResult:
    """Block route: Σ = (0 0; 0 c − d*·d) with d the reduced solution of a^{1/2}·x = b.

    Raises:
        NotPositive: If A is not PSD.
        VerificationFailure: If the result is not a minorant of A.
    """
    A = _psd(A, tol)
    n, k = A.n, S.dim
    if k == 0:
        return ShortedResult(sigma=A, route=ShortedRoute.BLOCK)
    if k == n:
        return ShortedResult(
            sigma=HermitianMatrix(np.zeros((n, n), dtype=np.complex128)),
            route=ShortedRoute.BLOCK,
        )

    blocks = block_form(A, S)
    a_half = psd_sqrt(hermitian_part(blocks.a), tol)
    try:
        d = reduced_solution(
            a_half.matrix, blocks.b, tol, bound=False, scale=np.sqrt(A.norm)
        ).D
    except RangeNotIncluded as exc:
        logger.error(f"R(b) ⊄ R(a^1/2) for a PSD operator: {exc}")
        raise VerificationFailure(f"block route failed for a PSD operator: {exc}")

    block = np.zeros((n, n), dtype=np.complex128)
    block[k:, k:] = blocks.c - adjoint(d) @ d
    sigma = hermitian_part(blocks.embed(block))
    _verify_minorant(sigma, A, S, tol)
    return ShortedResult(sigma=sigma, route=ShortedRoute.BLOCK, d_witness=d)


def _check_against(
    candidate: HermitianMatrix,
    reference: HermitianMatrix,
    A: HermitianMatrix,
    tol: ToleranceProfile,
    label: str,
) -> None:
    if not close(candidate.matrix, reference.matrix, tol, scale=A.norm):
        gap = operator_norm(candidate.matrix - reference.matrix)
        logger.error(f"{label}: routes differ by {gap:.3e}")
        raise VerificationFailure(f"{label}: shorted routes disagree by {gap:.3e}")


def shorted_via_projection(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    check: bool = True,
) -> ShortedResult:
    """Σ = A^{1/2}·P_M·A^{1/2} with M = (A^{1/2})⁻¹(S⊥).

    With `check`, the result is compared with the block route.
    """
    A = _psd(A, tol)
    root = psd_sqrt(A, tol)
    M = preimage(root.matrix, complement(S), tol)
    P_M = orth_projector(M)
    sigma = hermitian_part(root.matrix @ P_M.matrix @ root.matrix)
    if check:
        _check_against(sigma, shorted(A, S, tol).sigma, A, tol, "projection vs block")
    return ShortedResult(sigma=sigma, route=ShortedRoute.PROJECTION, auxiliary=P_M)


def shorted_compatible(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    check: bool = True,
) -> ShortedResult:
    """Σ = A·Q with Q = I − P_{A,S}.

    With `check`, the result is compared with both other routes and
    R(Σ) = R(A) ∩ S⊥ is verified.
    """
    A = _psd(A, tol)
    Q = q_as(A, S, tol)
    product = A.matrix @ Q.matrix
    skew = operator_norm(product - adjoint(product))
    if skew > tol.tol_eq * max(1.0, A.norm * max(1.0, Q.norm)):
        logger.error(f"A·Q is not Hermitian (skew {skew:.3e})")
        raise VerificationFailure("A·Q_{A,S} is not Hermitian")
    sigma = hermitian_part(product)
    if check:
        _check_against(sigma, shorted(A, S, tol).sigma, A, tol, "compatible vs block")
        _check_against(
            sigma,
            shorted_via_projection(A, S, tol, check=False).sigma,
            A,
            tol,
            "compatible vs projection",
        )
        if not _range_equal(sigma, A, S, tol):
            logger.error("R(Σ) differs from R(A) ∩ S⊥")
            raise VerificationFailure("range identity R(Σ) = R(A) ∩ S⊥ failed")
    return ShortedResult(sigma=sigma, route=ShortedRoute.COMPATIBLE, auxiliary=Q)


def _range_equal(
    sigma: HermitianMatrix, A: HermitianMatrix, S: Subspace, tol: ToleranceProfile
) -> bool:
    range_sigma = column_space(sigma.matrix, tol, scale=A.norm)
    target = intersect(column_space(A.matrix, tol), complement(S))
    return equal(range_sigma, target, tol)


def range_identity(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> RangeIdentity:
    """R(Σ) = R(A) ∩ S⊥, and the chain R(A) ∩ S⊥ ⊆ R(Σ) ⊆ R(A^{1/2}) ∩ S⊥."""
    A = _psd(A, tol)
    sigma = shorted(A, S, tol).sigma
    range_sigma = column_space(sigma.matrix, tol, scale=A.norm)
    lower = intersect(column_space(A.matrix, tol), complement(S))
    upper = intersect(column_space(psd_sqrt(A, tol).matrix, tol), complement(S))
    chain = contains(range_sigma, lower, tol) and contains(upper, range_sigma, tol)
    return RangeIdentity(equal=equal(range_sigma, lower, tol), chain=chain)


def shorted_invertible(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> HermitianMatrix:
    """Closed form (0 0; 0 c − b*·a⁻¹·b) for positive definite A.

    Raises:
        NotInvertible: If A is not positive definite.
    """
    A = as_hermitian(A, tol).require_positive_definite(tol)
    n, k = A.n, S.dim
    if k == 0:
        return A
    blocks = block_form(A, S)
    block = np.zeros((n, n), dtype=np.complex128)
    if k < n:
        try:
            solved = sla.solve(blocks.a, blocks.b, assume_a="pos")
        except sla.LinAlgError as exc:
            raise NotInvertible(f"S-block is singular: {exc}")
        block[k:, k:] = blocks.c - adjoint(blocks.b) @ solved
    return hermitian_part(blocks.embed(block))


def minorant_check(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    X: npt.ArrayLike | HermitianMatrix,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """True when X is a minorant (X ≤ A, R(X) ⊆ S⊥) and X ≤ Σ(P,A).

    Returns False, with a logged diagnostic, when X is not a minorant at all.
    """
    A = _psd(A, tol)
    X = _psd(X, tol)
    below_a = psd_leq(X.matrix, A.matrix, tol, scale=A.norm)
    leak = operator_norm(S.projector @ X.matrix)
    inside = leak <= tol.tol_eq * max(1.0, X.norm)
    if not (below_a and inside):
        logger.info(
            f"X is not a minorant: X ≤ A is {below_a}, ‖P_S·X‖ = {leak:.3e}"
        )
        return False
    sigma = shorted(A, S, tol).sigma
    dominated = psd_leq(X.matrix, sigma.matrix, tol, scale=A.norm)
    if not dominated:
        logger.warning("minorant found above the shorted operator")
    return dominated


def infimum_attained(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    samples: int = 50,
    seed: int = 0,
) -> tuple[Projection, bool]:
    """Σ(P,A) = min{R*AR : R² = R, ker R = S}, attained at Q_{A,S}.

    Returns Q_{A,S} and whether both the equality Q*AQ = Σ and the domination
    Σ ≤ R*AR over `samples` random R hold.
    """
    A = _psd(A, tol)
    sigma = shorted(A, S, tol).sigma
    Q = q_as(A, S, tol)
    attained = close(adjoint(Q.matrix) @ A.matrix @ Q.matrix, sigma.matrix, tol, scale=A.norm * max(1.0, Q.norm))
    if not attained:
        logger.warning("Q*AQ differs from the shorted operator")

    rng = np.random.default_rng(seed)
    dominated = True
    for i in range(samples):
        R = random_idempotent_with_kernel(rng, S)
        if not psd_leq(sigma.matrix, adjoint(R) @ A.matrix @ R, tol):
            logger.warning(f"sample {i}: shorted operator not below R*AR")
            dominated = False
            break
    return Q, attained and dominated


def is_admissible(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """ker Σ(P,A) = S."""
    A = _psd(A, tol)
    sigma = shorted(A, S, tol).sigma
    return equal(kernel(sigma.matrix, tol, scale=A.norm), S, tol)


def shift_identity(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    shift: float,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """Σ(P, A + λ(I−P)) = Σ(P,A) + λ(I−P)."""
    A = _psd(A, tol)
    E = np.eye(A.n) - S.projector
    lhs = shorted(A.matrix + shift * E, S, tol).sigma.matrix
    rhs = shorted(A, S, tol).sigma.matrix + shift * E
    return close(lhs, rhs, tol, scale=A.norm + abs(shift))
