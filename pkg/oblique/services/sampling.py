"""
Seeded random instance families.

Every generator takes an explicit numpy Generator; nothing here touches global
random state. Instances are drawn so that the nonzero spectrum stays well away
from the rank cutoff.
"""

import numpy as np

from .numcore import Matrix, adjoint, rank_cutoff, svd
from .subspace import Subspace


def random_matrix(
    rng: np.random.Generator, rows: int, cols: int, complex_field: bool = True
) -> Matrix:
    M = rng.standard_normal((rows, cols))
    if complex_field:
        M = M + 1j * rng.standard_normal((rows, cols))
    return M.astype(np.complex128)


def random_unitary(rng: np.random.Generator, n: int, complex_field: bool = True) -> Matrix:
    Q, R = np.linalg.qr(random_matrix(rng, n, n, complex_field))
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def random_rank_matrix(
    rng: np.random.Generator, n: int, rank: int, complex_field: bool = True
) -> Matrix:
    """n×n matrix of the given rank with nonzero singular values in [0.5, 4]."""
    U = random_unitary(rng, n, complex_field)[:, :rank]
    V = random_unitary(rng, n, complex_field)[:, :rank]
    s = rng.uniform(0.5, 4.0, size=rank)
    return (U * s) @ adjoint(V)


def random_psd(
    rng: np.random.Generator,
    n: int,
    rank: int | None = None,
    complex_field: bool = True,
) -> Matrix:
    """U·diag(w)·U* with `rank` eigenvalues drawn from [0.5, 4] and the rest exactly 0."""
    rank = n if rank is None else rank
    U = random_unitary(rng, n, complex_field)[:, :rank]
    w = rng.uniform(0.5, 4.0, size=rank)
    A = (U * w) @ adjoint(U)
    return (A + adjoint(A)) / 2


def random_positive_definite(
    rng: np.random.Generator, n: int, complex_field: bool = True
) -> Matrix:
    return random_psd(rng, n, n, complex_field)


def random_hermitian(
    rng: np.random.Generator, n: int, complex_field: bool = True
) -> Matrix:
    """Indefinite Hermitian matrix with eigenvalues of both signs bounded away from 0."""
    U = random_unitary(rng, n, complex_field)
    w = rng.uniform(0.5, 3.0, size=n) * rng.choice([-1.0, 1.0], size=n)
    A = (U * w) @ adjoint(U)
    return (A + adjoint(A)) / 2


def random_subspace(
    rng: np.random.Generator,
    n: int,
    k: int | None = None,
    complex_field: bool = True,
) -> Subspace:
    """Subspace of dimension k (uniform in 1..n−1 when omitted)."""
    if k is None:
        k = int(rng.integers(1, n)) if n > 1 else 1
    return Subspace(random_unitary(rng, n, complex_field)[:, :k])


def random_orthogonal_projector(
    rng: np.random.Generator,
    n: int,
    k: int | None = None,
    complex_field: bool = True,
) -> Matrix:
    return random_subspace(rng, n, k, complex_field).projector


def random_idempotent(
    rng: np.random.Generator,
    n: int,
    k: int | None = None,
    complex_field: bool = True,
) -> Matrix:
    """T·diag(1,…,1,0,…,0)·T⁻¹ with a well-conditioned T."""
    if k is None:
        k = int(rng.integers(1, n)) if n > 1 else 1
    T = np.eye(n) + 0.5 * random_matrix(rng, n, n, complex_field) / np.sqrt(n)
    diag = np.concatenate([np.ones(k), np.zeros(n - k)])
    return np.linalg.solve(T.T, (T * diag).T).T


def random_idempotent_with_kernel(
    rng: np.random.Generator, S: Subspace, spread: float = 1.0
) -> Matrix:
    """(I − P) + P·G·(I − P) with P = P_S: every idempotent with kernel S has this shape."""
    n = S.ambient_dim
    P = S.projector
    E = np.eye(n) - P
    complex_field = bool(np.any(np.imag(S.basis) != 0))
    G = spread * random_matrix(rng, n, n, complex_field) / np.sqrt(n)
    return E + P @ G @ E


def random_invariant_projection(
    rng: np.random.Generator, A: Matrix, complex_field: bool = True
) -> Matrix:
    """An idempotent Q with R(Q·A) ⊆ R(A).

    In a unitary frame [R(A) | ker A*] such Q is block upper triangular with
    idempotent diagonal blocks Q11, Q22; Q12 = Q11·X − X·Q22 keeps Q² = Q.
    """
    n = A.shape[0]
    U, sigma, _ = svd(A)
    r = int(np.count_nonzero(sigma > rank_cutoff(sigma)))
    if r == 0:
        return np.zeros((n, n), dtype=np.complex128)
    Q11 = _idempotent_block(rng, r, complex_field)
    Q22 = _idempotent_block(rng, n - r, complex_field)
    X = random_matrix(rng, r, n - r, complex_field) / np.sqrt(n)
    Q12 = Q11 @ X - X @ Q22
    block = np.block([[Q11, Q12], [np.zeros((n - r, r)), Q22]])
    return U @ block @ adjoint(U)


def _idempotent_block(rng: np.random.Generator, m: int, complex_field: bool) -> Matrix:
    if m == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    k = int(rng.integers(0, m + 1))
    T = np.eye(m) + 0.5 * random_matrix(rng, m, m, complex_field) / np.sqrt(m)
    diag = np.concatenate([np.ones(k), np.zeros(m - k)])
    return np.linalg.solve(T.T, (T * diag).T).T


def incompatible_hermitian(
    rng: np.random.Generator, n: int, k: int, complex_field: bool = True
) -> tuple[Matrix, Subspace]:
    """A Hermitian A and an S of dimension k (1 ≤ k < n) with R(b) ⊄ R(a).

    The S-block a is made singular and b gets a rank-one term along ker a.
    """
    W = random_unitary(rng, n, complex_field)
    G = random_matrix(rng, k, k - 1, complex_field) if k > 1 else np.zeros((k, 0))
    a = G @ adjoint(G)
    if k > 1:
        v = np.linalg.svd(G, full_matrices=True)[0][:, -1]
    else:
        v = np.ones(1, dtype=np.complex128)
    b = random_matrix(rng, k, n - k, complex_field) / np.sqrt(n)
    b = a @ b + np.outer(v, adjoint(random_matrix(rng, n - k, 1, complex_field)).ravel())
    c = random_hermitian(rng, n - k, complex_field)
    block = np.block([[a, b], [adjoint(b), c]])
    A = W @ block @ adjoint(W)
    return (A + adjoint(A)) / 2, Subspace(W[:, :k])


def compatible_singular_hermitian(
    rng: np.random.Generator, n: int, k: int, complex_field: bool = True
) -> tuple[Matrix, Subspace]:
    """Indefinite A with a singular S-block a and b = a·X, so the pair is compatible."""
    W = random_unitary(rng, n, complex_field)
    m = max(k - 1, 0)
    U = random_unitary(rng, k, complex_field)[:, :m]
    w = rng.uniform(0.5, 3.0, size=m) * rng.choice([-1.0, 1.0], size=m)
    a = (U * w) @ adjoint(U)
    b = a @ random_matrix(rng, k, n - k, complex_field)
    c = random_hermitian(rng, n - k, complex_field)
    block = np.block([[a, b], [adjoint(b), c]])
    A = W @ block @ adjoint(W)
    return (A + adjoint(A)) / 2, Subspace(W[:, :k])


def rotation_pair(theta: float) -> tuple[Matrix, Matrix]:
    """(Q, P) in ℝ²: P onto span{e1}, Q onto span{(cos θ, sin θ)}."""
    u = np.array([np.cos(theta), np.sin(theta)])
    Q = np.outer(u, u).astype(np.complex128)
    P = np.diag([1.0, 0.0]).astype(np.complex128)
    return Q, P


def random_projection_pair(
    rng: np.random.Generator,
    n: int,
    complex_field: bool = True,
    max_angle: float = 1.3,
) -> tuple[Matrix, Matrix]:
    """Orthogonal projectors (Q, P) with ker Q ∩ R(P) = {0}.

    R(P) is spanned by cos θᵢ·uᵢ + sin θᵢ·wᵢ with uᵢ ∈ R(Q), wᵢ ∈ R(Q)⊥ and
    θᵢ ≤ `max_angle`, which keeps ‖P_{Q,P}‖ ≤ 1/cos(max_angle).
    """
    W = random_unitary(rng, n, complex_field)
    q = int(rng.integers(1, n))
    p = int(rng.integers(1, min(q, n - q) + 1))
    theta = rng.uniform(0.0, max_angle, size=p)
    u = W[:, :p]
    w = W[:, q : q + p]
    basis = u * np.cos(theta) + w * np.sin(theta)
    Q = W[:, :q] @ adjoint(W[:, :q])
    P = basis @ adjoint(basis)
    return Q, P


def kernel_block_pair(
    rng: np.random.Generator, n: int, complex_field: bool = True
) -> tuple[Matrix, Matrix, int]:
    """Orthogonal projectors (Q, P) with ker Q ∩ R(P) of dimension m ≥ 1.

    Needs n ≥ 3. Returns (Q, P, m). R(P) is m directions inside ker Q plus
    one more direction in generic position.
    """
    W = random_unitary(rng, n, complex_field)
    m = int(rng.integers(1, max(2, min(n - 1, n // 2 + 1))))
    kernel_dim = m + 1
    # ker Q = span of the first m+1 frame vectors
    Q = W[:, kernel_dim:] @ adjoint(W[:, kernel_dim:])
    mix = np.zeros(n, dtype=np.complex128)
    mix[m] = 1.0
    mix[kernel_dim] = rng.uniform(0.5, 2.0)
    extra = W @ mix
    spanning = np.hstack([W[:, :m], extra[:, None]])
    basis, _ = np.linalg.qr(spanning)
    P = basis @ adjoint(basis)
    return Q, P, m


def minimal_norm_instance(t: float = 1.0) -> tuple[Matrix, Subspace, Matrix]:
    """A PSD A, S = span{e1, e2} in ℂ⁴ and a free slot z = t·e2·e4ᵀ.

    A = (P_R(d)  d; d*  1) with d = e1·e3ᵀ, ‖d‖ = 1, so ‖P_{A,S}‖ = √2, and
    every member with 0 < |t| ≤ 1 has the same norm.
    """
    A = np.array(
        [
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
        dtype=np.complex128,
    )
    S = Subspace(np.eye(4, 2, dtype=np.complex128))
    Z = np.zeros((4, 4), dtype=np.complex128)
    Z[1, 3] = t
    return A, S, Z
