import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from ..models import DEFAULT_TOLERANCE, ToleranceProfile
from .errors import NotIdempotent
from .numcore import Matrix, adjoint, as_matrix, operator_norm, rank_cutoff, svd
from .subspace import Subspace

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Projection:
    """An idempotent matrix with its range and kernel bases.

    Use `from_matrix` for untrusted input; the constructor itself does not
    check idempotency.
    """

    matrix: Matrix
    tol: ToleranceProfile = field(default=DEFAULT_TOLERANCE)

    @classmethod
    def from_matrix(
        cls, Q: npt.ArrayLike, tol: ToleranceProfile = DEFAULT_TOLERANCE
    ) -> "Projection":
        """Validate Q² = Q within tol_eq·max(1, ‖Q‖).

        Raises:
            NotIdempotent: If the idempotency residual is too large.
        """
        arr = as_matrix(Q, square=True)
        residual = operator_norm(arr @ arr - arr)
        bound = tol.tol_eq * max(1.0, operator_norm(arr))
        if residual > bound:
            raise NotIdempotent(
                f"matrix is not idempotent (‖Q² − Q‖ = {residual:.3e} > {bound:.3e})"
            )
        return cls(arr, tol)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def _svd(self):
        return svd(self.matrix)

    @cached_property
    def rank(self) -> int:
        _, sigma, _ = self._svd
        return int(np.count_nonzero(sigma > rank_cutoff(sigma, self.tol)))

    @cached_property
    def range(self) -> Subspace:
        U, _, _ = self._svd
        return Subspace(U[:, : self.rank], self.tol)

    @cached_property
    def kernel(self) -> Subspace:
        _, _, V = self._svd
        return Subspace(V[:, self.rank :], self.tol)

    @cached_property
    def norm(self) -> float:
        _, sigma, _ = self._svd
        return float(sigma[0]) if sigma.size else 0.0

    def is_orthogonal(self) -> bool:
        skew = operator_norm(self.matrix - adjoint(self.matrix))
        return skew <= self.tol.tol_eq * max(1.0, self.norm)

    def complementary(self) -> "Projection":
        """I − Q, projecting onto ker Q along R(Q)."""
        return Projection(np.eye(self.n, dtype=np.complex128) - self.matrix, self.tol)
