"""
Subspaces of ℂⁿ held as orthonormal bases.

Bases are never compared directly: two subspaces are equal when their
orthogonal projectors agree within tol_eq.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .errors import AmbientMismatch, ShapeMismatch
from .numcore import Matrix, adjoint, operator_norm, rank_cutoff, svd

if TYPE_CHECKING:
    from .projection import Projection

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: Matrix
    tol: ToleranceProfile = field(default=DEFAULT_TOLERANCE)

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def projector(self) -> Matrix:
        return self.basis @ adjoint(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient_dim={self.ambient_dim})"


def zero(n: int, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> Subspace:
    return Subspace(np.zeros((n, 0), dtype=np.complex128), tol)


def full(n: int, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> Subspace:
    return Subspace(np.eye(n, dtype=np.complex128), tol)


def _as_columns(M: npt.ArrayLike) -> Matrix:
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got {arr.ndim} dimension(s)")
    return arr


def column_space(
    M: npt.ArrayLike,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> Subspace:
    """Numerical column space of M; rank from the singular-value cutoff."""
    arr = _as_columns(M)
    U, sigma, _ = svd(arr)
    r = int(np.count_nonzero(sigma > rank_cutoff(sigma, tol, scale)))
    return Subspace(U[:, :r], tol)


def from_spanning(M: npt.ArrayLike, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> Subspace:
    """Subspace spanned by the columns of M (zero matrix gives the zero subspace)."""
    return column_space(M, tol)


def kernel(
    M: npt.ArrayLike,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> Subspace:
    arr = _as_columns(M)
    _, sigma, V = svd(arr)
    r = int(np.count_nonzero(sigma > rank_cutoff(sigma, tol, scale)))
    return Subspace(V[:, r:], tol)


def _check_ambient(S: Subspace, T: Subspace) -> None:
    if S.ambient_dim != T.ambient_dim:
        raise AmbientMismatch(
            f"subspaces live in dimensions {S.ambient_dim} and {T.ambient_dim}"
        )


def complement(S: Subspace) -> Subspace:
    U, _, _ = svd(S.basis)
    return Subspace(U[:, S.dim :], S.tol)


def span_sum(S: Subspace, T: Subspace) -> Subspace:
    """S + T."""
    _check_ambient(S, T)
    return column_space(np.hstack([S.basis, T.basis]), S.tol)


def intersect(S: Subspace, T: Subspace) -> Subspace:
    """S ∩ T computed as (S⊥ + T⊥)⊥."""
    _check_ambient(S, T)
    return complement(span_sum(complement(S), complement(T)))


def orthogonal_difference(S: Subspace, T: Subspace) -> Subspace:
    """S ⊖ T = S ∩ T⊥."""
    return intersect(S, complement(T))


def preimage(A: npt.ArrayLike, T: Subspace, tol: ToleranceProfile | None = None) -> Subspace:
    """A⁻¹(T) = ker((I − P_T)·A); always contains ker A."""
    tol = tol or T.tol
    arr = np.asarray(A, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape != (T.ambient_dim, T.ambient_dim):
        raise AmbientMismatch(
            f"operator of shape {arr.shape} does not act on dimension {T.ambient_dim}"
        )
    residual = arr - T.projector @ arr
    return kernel(residual, tol, scale=operator_norm(arr))


def equal(S: Subspace, T: Subspace, tol: ToleranceProfile | None = None) -> bool:
    _check_ambient(S, T)
    tol = tol or S.tol
    if S.dim != T.dim:
        return False
    return operator_norm(S.projector - T.projector) <= tol.tol_eq


def contains(S: Subspace, T: Subspace, tol: ToleranceProfile | None = None) -> bool:
    """T ⊆ S."""
    _check_ambient(S, T)
    tol = tol or S.tol
    if T.dim == 0:
        return True
    return operator_norm(T.basis - S.projector @ T.basis) <= tol.tol_eq


def orth_projector(S: Subspace) -> "Projection":
    from .projection import Projection

    return Projection(S.projector, S.tol)


def friedrichs_cos(S: Subspace, T: Subspace) -> float:
    """Cosine of the Friedrichs angle between S and T.

    The common part S ∩ T is removed from both sides first; the result is 0
    when either reduced subspace is zero.
    """
    _check_ambient(S, T)
    common = intersect(S, T)
    s_reduced = orthogonal_difference(S, common)
    t_reduced = orthogonal_difference(T, common)
    if s_reduced.dim == 0 or t_reduced.dim == 0:
        return 0.0
    c = operator_norm(adjoint(s_reduced.basis) @ t_reduced.basis)
    logger.debug(
        f"friedrichs_cos: dim S={S.dim}, dim T={T.dim}, dim S∩T={common.dim}, c={c}"
    )
    return float(np.clip(c, 0.0, 1.0))
