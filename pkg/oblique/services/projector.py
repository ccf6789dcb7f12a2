"""
A-selfadjoint projections onto a subspace S.

All block formulas are evaluated in a unitary frame W = [basis(S) | basis(S⊥)],
in which a Hermitian A reads (a b; b* c) and P_{A,S} reads (1 d; 0 0) with
d the reduced solution of a·x = b.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .douglas import inclusion_residual, reduced_solution
from .errors import (
    AmbientMismatch,
    NotCompatible,
    NotInvertible,
    NotPositive,
    RangeMismatch,
    ShapeMismatch,
    VerificationFailure,
)
from .numcore import (
    HermitianMatrix,
    Matrix,
    adjoint,
    as_hermitian,
    operator_norm,
    psd_leq,
)
from .projection import Projection
from .subspace import (
    Subspace,
    column_space,
    complement,
    contains,
    equal,
    friedrichs_cos,
    intersect,
    kernel,
    orthogonal_difference,
    preimage,
    span_sum,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BlockForm:
    """A Hermitian operator written in the frame [basis(S) | basis(S⊥)]."""

    frame: Matrix
    k: int
    a: Matrix
    b: Matrix
    c: Matrix

    def embed(self, block: npt.NDArray) -> Matrix:
        return self.frame @ block @ adjoint(self.frame)


def block_form(A: HermitianMatrix, S: Subspace) -> BlockForm:
    if A.n != S.ambient_dim:
        raise AmbientMismatch(
            f"operator acts on dimension {A.n}, subspace lives in {S.ambient_dim}"
        )
    frame = np.hstack([S.basis, complement(S).basis])
    k = S.dim
    rotated = adjoint(frame) @ A.matrix @ frame
    return BlockForm(
        frame=frame,
        k=k,
        a=rotated[:k, :k],
        b=rotated[:k, k:],
        c=rotated[k:, k:],
    )


@dataclass(frozen=True)
class SelfadjointnessVerdicts:
    commutes: bool
    kernel_inclusion: bool
    contraction: bool | None


@dataclass(frozen=True, eq=False)
class CompatibilityReport:
    compatible: bool
    cond_range_pa: bool
    cond_block: bool
    cond_sum: bool
    unique: bool
    n_dim: int
    cond_angle: bool | None = None
    pap_closure: bool | None = None
    a: Matrix | None = None
    b: Matrix | None = None
    d: Matrix | None = None


@dataclass(frozen=True, eq=False)
class ManifoldParam:
    """P(A,S) = base + L(S⊥, N), with N = ker A ∩ S for PSD A."""

    operator: HermitianMatrix
    subspace: Subspace
    base: Projection
    n_space: Subspace
    s_perp: Subspace
    positive: bool

    @property
    def free_dims(self) -> tuple[int, int]:
        return self.n_space.dim, self.s_perp.dim


def _check_dims(A: HermitianMatrix, Q: Projection) -> None:
    if A.n != Q.n:
        raise ShapeMismatch(f"A is {A.n}x{A.n} but Q is {Q.n}x{Q.n}")


def selfadjointness(
    A: npt.ArrayLike | HermitianMatrix,
    Q: Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> SelfadjointnessVerdicts:
    """Three independent tests of A·Q = Q*·A.

    The contraction test Q*AQ ≤ A is only meaningful for PSD A and is None
    otherwise.
    """
    A = as_hermitian(A, tol)
    _check_dims(A, Q)
    M, E = A.matrix, Q.matrix

    skew = operator_norm(M @ E - adjoint(E) @ M)
    commutes = skew <= tol.tol_eq * max(1.0, A.norm)

    a_orth_range = preimage(M, complement(Q.range), tol)
    kernel_inclusion = contains(a_orth_range, Q.kernel, tol)

    contraction = None
    if A.is_psd(tol):
        contraction = psd_leq(adjoint(E) @ M @ E, M, tol, scale=A.norm)

    logger.debug(
        f"selfadjointness: skew {skew:.3e}, kernel inclusion {kernel_inclusion}, contraction {contraction}"
    )
    return SelfadjointnessVerdicts(commutes, kernel_inclusion, contraction)


def is_a_selfadjoint(
    A: npt.ArrayLike | HermitianMatrix,
    Q: Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    verdicts = selfadjointness(A, Q, tol)
    others = [verdicts.kernel_inclusion]
    if verdicts.contraction is not None:
        others.append(verdicts.contraction)
    if any(v != verdicts.commutes for v in others):
        logger.warning(f"A-selfadjointness tests disagree: {verdicts}")
    return verdicts.commutes


def compatibility(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> CompatibilityReport:
    """Evaluate the equivalent compatibility conditions independently.

    cond_range_pa compares R(PA) with R(PAP), cond_block tests R(b) ⊆ R(a),
    and cond_sum checks that S + A⁻¹(S⊥) is the whole space. The reported
    `compatible` is the block condition.

    For PSD A two more verdicts are filled in: cond_angle is
    c(S, ker A) < 1, and pap_closure checks R(PAP) = S ⊖ (S ∩ ker A).
    Both are None for indefinite A.
    """
    A = as_hermitian(A, tol)
    if A.n != S.ambient_dim:
        raise ShapeMismatch(
            f"operator acts on dimension {A.n}, subspace lives in {S.ambient_dim}"
        )
    n, scale = A.n, A.norm
    P = S.projector

    cond_range_pa = equal(
        column_space(P @ A.matrix, tol, scale),
        column_space(P @ A.matrix @ P, tol, scale),
        tol,
    )

    blocks = block_form(A, S)
    witnesses_available = 0 < S.dim < n
    if witnesses_available:
        residual, threshold = inclusion_residual(blocks.b, blocks.a, tol, scale)
        cond_block = residual <= threshold
    else:
        cond_block = True

    a_orth = preimage(A.matrix, complement(S), tol)
    cond_sum = span_sum(S, a_orth).dim == n
    n_dim = intersect(S, a_orth).dim
    unique = cond_sum and n_dim == 0

    if not cond_range_pa == cond_block == cond_sum:
        logger.warning(
            f"compatibility conditions disagree: range={cond_range_pa}, block={cond_block}, sum={cond_sum}"
        )

    # Both characterizations below assume A ≥ 0
    cond_angle = pap_closure = None
    if A.is_psd(tol):
        ker_a = kernel(A.matrix, tol)
        cond_angle = friedrichs_cos(S, ker_a) < 1.0 - tol.tol_rank
        pap_closure = equal(
            column_space(P @ A.matrix @ P, tol, scale),
            orthogonal_difference(S, intersect(S, ker_a)),
            tol,
        )
        if not cond_angle == pap_closure == cond_block:
            logger.warning(
                f"PSD characterizations disagree: angle={cond_angle}, closure={pap_closure}, block={cond_block}"
            )

    d = None
    if witnesses_available and cond_block:
        d = reduced_solution(blocks.a, blocks.b, tol, bound=False, scale=scale).D
    return CompatibilityReport(
        compatible=cond_block,
        cond_range_pa=cond_range_pa,
        cond_block=cond_block,
        cond_sum=cond_sum,
        unique=unique,
        n_dim=n_dim,
        cond_angle=cond_angle,
        pap_closure=pap_closure,
        a=blocks.a if witnesses_available else None,
        b=blocks.b if witnesses_available else None,
        d=d,
    )


def p_as(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> Projection:
    """The minimal-norm A-selfadjoint projection P_{A,S} with range S.

    Raises:
        NotCompatible: If R(b) ⊄ R(a), i.e. no A-selfadjoint projection onto S
            exists.
        VerificationFailure: If a PSD A fails the compatibility check, which
            can only happen through a tolerance pathology.
    """
    A = as_hermitian(A, tol)
    n, k = A.n, S.dim
    if n != S.ambient_dim:
        raise ShapeMismatch(
            f"operator acts on dimension {n}, subspace lives in {S.ambient_dim}"
        )
    if k == 0:
        return Projection(np.zeros((n, n), dtype=np.complex128), tol)
    if k == n:
        return Projection(np.eye(n, dtype=np.complex128), tol)

    blocks = block_form(A, S)
    residual, threshold = inclusion_residual(blocks.b, blocks.a, tol, A.norm)
    if residual > threshold:
        if A.is_psd(tol):
            logger.error(
                f"PSD operator failed the block range inclusion (residual {residual:.3e})"
            )
            raise VerificationFailure(
                f"PSD operator reported incompatible (residual {residual:.3e} > {threshold:.3e})"
            )
        raise NotCompatible(
            f"R(b) is not contained in R(a): residual {residual:.3e} > {threshold:.3e}"
        )
    d = reduced_solution(blocks.a, blocks.b, tol, bound=False, scale=A.norm).D
    block = np.zeros((n, n), dtype=np.complex128)
    block[:k, :k] = np.eye(k)
    block[:k, k:] = d
    return Projection(blocks.embed(block), tol)


def q_as(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> Projection:
    """Q_{A,S} = I − P_{A,S}: A-selfadjoint with kernel S."""
    return p_as(A, S, tol).complementary()


def p_as_invertible(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    via: Literal["inverse_sum", "resolvent"] = "inverse_sum",
) -> Projection:
    """Closed forms of P_{A,S} for positive definite A.

    `inverse_sum` evaluates P·(PAP + (I−P)A(I−P))⁻¹·A and `resolvent`
    evaluates P·(I + P − A⁻¹PA)⁻¹.

    Raises:
        NotInvertible: If A is not positive definite.
    """
    A = as_hermitian(A, tol).require_positive_definite(tol)
    n = A.n
    if n != S.ambient_dim:
        raise ShapeMismatch(
            f"operator acts on dimension {n}, subspace lives in {S.ambient_dim}"
        )
    M = A.matrix
    P = S.projector
    E = np.eye(n) - P
    try:
        if via == "inverse_sum":
            pinched = P @ M @ P + E @ M @ E
            pinched = (pinched + adjoint(pinched)) / 2
            Q = P @ sla.solve(pinched, M, assume_a="pos")
        elif via == "resolvent":
            X = np.eye(n) + P - sla.solve(M, P @ M, assume_a="pos")
            # P·X⁻¹ through the transposed system
            Q = sla.solve(X.T, P.T).T
        else:
            raise ValueError(f"unknown closed form {via!r}")
    except sla.LinAlgError as exc:
        raise NotInvertible(f"closed form {via} hit a singular system: {exc}")
    return Projection(Q, tol)


def is_member(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    Q: Projection,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
) -> bool:
    """Q ∈ P(A,S): idempotent, range S and A-selfadjoint."""
    A = as_hermitian(A, tol)
    E = Q.matrix
    idempotent = operator_norm(E @ E - E) <= tol.tol_eq * max(1.0, Q.norm)
    if not idempotent:
        return False
    return equal(Q.range, S, tol) and selfadjointness(A, Q, tol).commutes


def manifold(
    A: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    allow_indefinite: bool = False,
) -> ManifoldParam:
    """Parametrize P(A,S) as P_{A,S} + L(S⊥, N).

    For PSD A, N = ker A ∩ S. With `allow_indefinite`, a compatible indefinite
    A uses the free directions ker(a) inside S instead, and the result is
    flagged `positive=False`.

    Raises:
        NotPositive: If A is not PSD and `allow_indefinite` is off.
        NotCompatible: If an indefinite A is not compatible with S.
    """
    A = as_hermitian(A, tol)
    positive = A.is_psd(tol)
    if not positive and not allow_indefinite:
        raise NotPositive(A.min_eigenvalue, -A.psd_threshold(tol))

    base = p_as(A, S, tol)
    if positive:
        n_space = intersect(kernel(A.matrix, tol), S)
    elif S.dim == 0:
        n_space = S
    else:
        a = adjoint(S.basis) @ A.matrix @ S.basis
        n_space = Subspace(S.basis @ kernel(a, tol, scale=A.norm).basis, tol)
    return ManifoldParam(
        operator=A,
        subspace=S,
        base=base,
        n_space=n_space,
        s_perp=complement(S),
        positive=positive,
    )


def manifold_member(
    param: ManifoldParam, z: npt.ArrayLike, tol: ToleranceProfile = DEFAULT_TOLERANCE
) -> Projection:
    """base + N·z·(S⊥)* for a coefficient block z of shape (dim N, dim S⊥).

    Raises:
        ShapeMismatch: If z has the wrong shape.
        VerificationFailure: If the result is not in P(A,S).
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != param.free_dims:
        raise ShapeMismatch(
            f"coefficient block must be {param.free_dims}, got {z.shape}"
        )
    Z = param.n_space.basis @ z @ adjoint(param.s_perp.basis)
    member = Projection(param.base.matrix + Z, tol)
    if not is_member(param.operator, param.subspace, member, tol):
        logger.error(f"manifold member with ‖z‖ = {operator_norm(z):.3e} left P(A,S)")
        raise VerificationFailure("manifold member is not an A-selfadjoint projection onto S")
    return member


def manifold_coefficients(param: ManifoldParam, Z: npt.ArrayLike) -> Matrix:
    """Coefficient block of an ambient Z ∈ L(S⊥, N)."""
    Z = np.asarray(Z, dtype=np.complex128)
    return adjoint(param.n_space.basis) @ Z @ param.s_perp.basis


def parallel_offset(
    A: npt.ArrayLike | HermitianMatrix,
    B: npt.ArrayLike | HermitianMatrix,
    S: Subspace,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    samples: int = 20,
    seed: int = 0,
) -> Matrix:
    """Δ = P_{B,S} − P_{A,S}, which carries P(A,S) onto P(B,S) when R(A) = R(B).

    Membership of the shifted manifold is verified on `samples` random
    coefficient blocks.

    Raises:
        RangeMismatch: If R(A) ≠ R(B).
        VerificationFailure: If a shifted member is not in P(B,S).
    """
    A = as_hermitian(A, tol).require_psd(tol)
    B = as_hermitian(B, tol).require_psd(tol)
    if not equal(column_space(A.matrix, tol), column_space(B.matrix, tol), tol):
        raise RangeMismatch("R(A) and R(B) differ")

    delta = p_as(B, S, tol).matrix - p_as(A, S, tol).matrix
    param = manifold(A, S, tol)
    rows, cols = param.free_dims
    rng = np.random.default_rng(seed)
    for i in range(samples):
        z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
        shifted = Projection(manifold_member(param, z, tol).matrix + delta, tol)
        if not is_member(B, S, shifted, tol):
            logger.error(f"parallel offset failed on sample {i}")
            raise VerificationFailure(f"shifted member {i} is not in P(B,S)")
    return delta
