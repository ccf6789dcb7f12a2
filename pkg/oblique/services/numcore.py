"""
Dense matrix kernels and the tolerance policy.

Every rank decision in the package goes through `rank_cutoff`, and every PSD
comparison through `psd_leq`. Matrices are numpy arrays promoted to
complex128; the field of the original input is tracked separately with
`field_of` and only matters when formatting output.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.typing as npt
from scipy import linalg as sla

from ..models import DEFAULT_TOLERANCE, FieldEnum, ToleranceProfile
from .errors import (
    ConvergenceFailure,
    NotFinite,
    NotHermitian,
    NotInvertible,
    NotPositive,
    ShapeMismatch,
)

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.complex128]


def as_matrix(M: npt.ArrayLike, *, square: bool = False) -> Matrix:
    """Validate and promote an array-like to a finite complex 2-D matrix.

    Raises:
        ShapeMismatch: If the input is not 2-D, has an empty side, or is not
            square when `square` is requested.
        NotFinite: If any entry is NaN or infinite.
    """
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise ShapeMismatch(f"expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ShapeMismatch(f"matrix must be at least 1x1, got {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got {arr.shape}")
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise NotFinite("matrix has NaN or infinite entries")
    return arr


def adjoint(M: npt.NDArray) -> npt.NDArray:
    return M.conj().T


def field_of(*arrays: npt.ArrayLike) -> FieldEnum:
    """Real when every input has zero imaginary part, complex otherwise."""
    for arr in arrays:
        if np.any(np.imag(np.asarray(arr)) != 0):
            return FieldEnum.COMPLEX
    return FieldEnum.REAL


def _lapack_svd(M: npt.NDArray, compute_uv: bool):
    # gesdd is faster but occasionally fails to converge where gesvd does not
    for driver in ("gesdd", "gesvd"):
        try:
            return sla.svd(
                M,
                full_matrices=True,
                compute_uv=compute_uv,
                check_finite=False,
                lapack_driver=driver,
            )
        except sla.LinAlgError as exc:
            logger.debug(f"SVD with {driver} did not converge: {exc}")
    raise ConvergenceFailure(f"SVD did not converge for a {M.shape} matrix")


def svd(M: npt.NDArray) -> tuple[Matrix, npt.NDArray[np.float64], Matrix]:
    """Full singular value decomposition M = U·diag(sigma)·V*.

    Returns V itself (not its adjoint). Matrices with an empty side are
    allowed and yield identity factors with no singular values.
    """
    m, n = M.shape
    if M.size == 0:
        return (
            np.eye(m, dtype=np.complex128),
            np.zeros(0),
            np.eye(n, dtype=np.complex128),
        )
    U, sigma, Vh = _lapack_svd(np.asarray(M, dtype=np.complex128), compute_uv=True)
    return U, sigma, adjoint(Vh)


def singular_values(M: npt.NDArray) -> npt.NDArray[np.float64]:
    if M.size == 0:
        return np.zeros(0)
    return _lapack_svd(np.asarray(M, dtype=np.complex128), compute_uv=False)


def operator_norm(M: npt.NDArray) -> float:
    """Largest singular value; zero for a matrix with an empty side."""
    sigma = singular_values(M)
    return float(sigma[0]) if sigma.size else 0.0


def rank_cutoff(
    sigma: npt.NDArray[np.float64],
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> float:
    """Singular values at or below this value count as zero.

    `scale` is the norm of the operands a derived product was built from, so
    that cancellation noise in e.g. (I - P)·A is measured against ‖A‖.
    """
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    return tol.tol_rank * max(1.0, sigma_max, scale or 0.0)


def numerical_rank(
    M: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> int:
    sigma = singular_values(M)
    return int(np.count_nonzero(sigma > rank_cutoff(sigma, tol, scale)))


def pinv(
    M: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> Matrix:
    """Moore-Penrose pseudoinverse with the package rank policy."""
    U, sigma, V = svd(M)
    r = int(np.count_nonzero(sigma > rank_cutoff(sigma, tol, scale)))
    logger.debug(f"pinv: shape {M.shape}, rank {r}")
    return (V[:, :r] / sigma[:r]) @ adjoint(U[:, :r])


def close(
    X: npt.NDArray,
    Y: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> bool:
    """‖X − Y‖ ≤ tol_eq·max(1, scale), scale defaulting to max(‖X‖, ‖Y‖)."""
    if scale is None:
        scale = max(operator_norm(X), operator_norm(Y))
    return operator_norm(X - Y) <= tol.tol_eq * max(1.0, scale)


def _eigvalsh(M: npt.NDArray) -> npt.NDArray[np.float64]:
    try:
        return sla.eigvalsh(M, check_finite=False)
    except sla.LinAlgError as exc:
        raise ConvergenceFailure(f"Hermitian eigensolver did not converge: {exc}")


def _eigh(M: npt.NDArray) -> tuple[npt.NDArray[np.float64], Matrix]:
    try:
        return sla.eigh(M, check_finite=False)
    except sla.LinAlgError as exc:
        raise ConvergenceFailure(f"Hermitian eigensolver did not converge: {exc}")


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """A square matrix known to be Hermitian; eigenvalues are computed once."""

    matrix: Matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> npt.NDArray[np.float64]:
        return _eigvalsh(self.matrix)

    @cached_property
    def norm(self) -> float:
        w = self.eigenvalues
        return float(np.max(np.abs(w))) if w.size else 0.0

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    def psd_threshold(self, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> float:
        return tol.tol_rank * max(1.0, self.norm)

    def is_psd(self, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> bool:
        return self.min_eigenvalue >= -self.psd_threshold(tol)

    def require_psd(self, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> "HermitianMatrix":
        if not self.is_psd(tol):
            raise NotPositive(self.min_eigenvalue, -self.psd_threshold(tol))
        return self

    def require_positive_definite(
        self, tol: ToleranceProfile = DEFAULT_TOLERANCE
    ) -> "HermitianMatrix":
        if self.min_eigenvalue < tol.tol_rank * self.norm or self.norm == 0.0:
            raise NotInvertible(
                f"operator is not positive definite (min eigenvalue {self.min_eigenvalue:.3e})"
            )
        return self


def as_hermitian(
    M: npt.ArrayLike | HermitianMatrix, tol: ToleranceProfile = DEFAULT_TOLERANCE
) -> HermitianMatrix:
    """Check that M is Hermitian within tolerance and return its Hermitian part.

    Raises:
        NotHermitian: If ‖M − M*‖ exceeds tol_eq·max(1, ‖M‖).
    """
    if isinstance(M, HermitianMatrix):
        return M
    arr = as_matrix(M, square=True)
    skew = operator_norm(arr - adjoint(arr))
    bound = tol.tol_eq * max(1.0, operator_norm(arr))
    if skew > bound:
        raise NotHermitian(f"matrix is not Hermitian (‖M − M*‖ = {skew:.3e} > {bound:.3e})")
    return HermitianMatrix((arr + adjoint(arr)) / 2)


def hermitian_part(M: npt.NDArray) -> HermitianMatrix:
    """Symmetrize without checking; for matrices Hermitian by construction."""
    return HermitianMatrix((M + adjoint(M)) / 2)


def psd_sqrt(A: HermitianMatrix, tol: ToleranceProfile = DEFAULT_TOLERANCE) -> HermitianMatrix:
    """Positive square root through the Hermitian eigendecomposition.

    Eigenvalues with |w| ≤ tol_rank·max(1, ‖A‖) are set to zero before the
    square root is taken.

    Raises:
        NotPositive: If an eigenvalue lies below −tol_rank·max(1, ‖A‖).
    """
    w, V = _eigh(A.matrix)
    threshold = A.psd_threshold(tol)
    if w.size and w[0] < -threshold:
        raise NotPositive(float(w[0]), -threshold)
    w = np.where(w <= threshold, 0.0, w)
    root = (V * np.sqrt(w)) @ adjoint(V)
    return hermitian_part(root)


def psd_leq(
    X: npt.NDArray,
    Y: npt.NDArray,
    tol: ToleranceProfile = DEFAULT_TOLERANCE,
    scale: float | None = None,
) -> bool:
    """Decide X ≤ Y in the PSD order.

    True when the smallest eigenvalue of Y − X is at least
    −tol_rank·max(1, scale), with scale defaulting to ‖Y‖.
    """
    if X.shape != Y.shape:
        raise ShapeMismatch(f"cannot compare {X.shape} with {Y.shape}")
    if scale is None:
        scale = operator_norm(Y)
    gap = hermitian_part(Y - X)
    return gap.min_eigenvalue >= -tol.tol_rank * max(1.0, scale)
