import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oblique.services import sampling
from oblique.services.errors import AmbientMismatch
from oblique.services.numcore import adjoint, operator_norm
from oblique.services.subspace import (
    Subspace,
    column_space,
    complement,
    contains,
    equal,
    friedrichs_cos,
    from_spanning,
    full,
    intersect,
    kernel,
    orth_projector,
    orthogonal_difference,
    preimage,
    span_sum,
    zero,
)


def line(*coords) -> Subspace:
    return from_spanning(np.array(coords, dtype=float).reshape(-1, 1))


def random_pair(seed: int, n: int) -> tuple[Subspace, Subspace]:
    rng = np.random.default_rng(seed)
    S = sampling.random_subspace(rng, n, int(rng.integers(0, n + 1)))
    T = sampling.random_subspace(rng, n, int(rng.integers(0, n + 1)))
    return S, T


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)


def test_column_space_of_full_rank_matrix(rng):
    M = sampling.random_matrix(rng, 6, 3)
    S = column_space(M)
    assert S.dim == 3
    assert operator_norm(S.projector @ M - M) <= 1e-10 * operator_norm(M)


def test_column_space_drops_dependent_columns():
    M = np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]])
    assert column_space(M).dim == 1


def test_from_spanning_zero_matrix_is_zero_subspace():
    assert from_spanning(np.zeros((3, 2))).dim == 0


def test_complement_of_identity_columns():
    S = from_spanning(np.eye(3)[:, :1])
    assert equal(complement(S), from_spanning(np.eye(3)[:, 1:]))


def test_projectors_of_complements_sum_to_identity(rng):
    S = sampling.random_subspace(rng, 7)
    total = S.projector + complement(S).projector
    assert operator_norm(total - np.eye(7)) <= 1e-10


def test_zero_and_full():
    assert complement(zero(4)).dim == 4
    assert complement(full(4)).dim == 0


def test_intersection_of_coordinate_planes():
    e = np.eye(3)
    S = from_spanning(e[:, [0, 1]])
    T = from_spanning(e[:, [1, 2]])
    assert equal(intersect(S, T), from_spanning(e[:, [1]]))
    assert span_sum(S, T).dim == 3


def test_dimension_formula(rng):
    S = sampling.random_subspace(rng, 6, 4)
    T = sampling.random_subspace(rng, 6, 3)
    assert S.dim + T.dim == span_sum(S, T).dim + intersect(S, T).dim


def test_intersection_with_shared_direction(rng):
    shared = sampling.random_matrix(rng, 5, 1)
    S = from_spanning(np.hstack([shared, sampling.random_matrix(rng, 5, 1)]))
    T = from_spanning(np.hstack([shared, sampling.random_matrix(rng, 5, 1)]))
    common = intersect(S, T)
    assert common.dim == 1
    assert contains(common, from_spanning(shared))


def test_preimage_of_coordinate_line():
    A = np.diag([1.0, 0.0])
    T = line(0, 1)
    assert equal(preimage(A, T), T)


def test_preimage_always_contains_kernel(rng):
    A = sampling.random_rank_matrix(rng, 5, 2)
    T = sampling.random_subspace(rng, 5, 1)
    assert contains(preimage(A, T), kernel(A))


def test_preimage_rejects_wrong_shape():
    with pytest.raises(AmbientMismatch):
        preimage(np.eye(3), line(1, 0))


def test_orth_projector_is_hermitian_idempotent(rng):
    P = orth_projector(sampling.random_subspace(rng, 6)).matrix
    assert operator_norm(P @ P - P) <= 1e-12
    assert operator_norm(P - adjoint(P)) <= 1e-12


def test_orthogonal_difference():
    e = np.eye(3)
    S = from_spanning(e[:, [0, 1]])
    T = from_spanning(e[:, [1]])
    assert equal(orthogonal_difference(S, T), from_spanning(e[:, [0]]))


def test_mixed_ambient_dimensions_raise():
    with pytest.raises(AmbientMismatch):
        span_sum(line(1, 0), line(1, 0, 0))


def test_friedrichs_cos_lines_at_sixty_degrees():
    theta = np.pi / 3
    assert friedrichs_cos(line(1, 0), line(np.cos(theta), np.sin(theta))) == pytest.approx(0.5)


def test_friedrichs_cos_ignores_common_part():
    e = np.eye(3)
    S = from_spanning(e[:, [0, 1]])
    T = from_spanning(np.column_stack([e[:, 0], e[:, 1] + e[:, 2]]))
    assert friedrichs_cos(S, T) == pytest.approx(np.sqrt(0.5))


def test_friedrichs_cos_of_nested_subspaces_is_zero():
    e = np.eye(3)
    assert friedrichs_cos(from_spanning(e[:, [0, 1]]), from_spanning(e[:, [0]])) == 0.0


def test_friedrichs_cos_is_symmetric(rng):
    S = sampling.random_subspace(rng, 6, 2)
    T = sampling.random_subspace(rng, 6, 3)
    assert friedrichs_cos(S, T) == pytest.approx(friedrichs_cos(T, S), abs=1e-10)
    assert 0.0 <= friedrichs_cos(S, T) <= 1.0


@settings(deadline=None, max_examples=40)
@given(seed=seeds, n=dims)
def test_complement_is_an_involution(seed, n):
    S, _ = random_pair(seed, n)
    assert equal(complement(complement(S)), S)
    assert complement(S).dim == n - S.dim


@settings(deadline=None, max_examples=40)
@given(seed=seeds, n=dims)
def test_friedrichs_cos_of_complements(seed, n):
    S, T = random_pair(seed, n)
    c = friedrichs_cos(S, T)
    assert c == pytest.approx(friedrichs_cos(complement(T), complement(S)), abs=1e-8)
    assert 0.0 <= c < 1.0 - S.tol.tol_rank


@settings(deadline=None, max_examples=40)
@given(seed=seeds, n=dims)
def test_preimage_under_identity_and_zero(seed, n):
    _, T = random_pair(seed, n)
    assert equal(preimage(np.eye(n), T), T)
    assert equal(preimage(np.zeros((n, n)), T), full(n))


@settings(deadline=None, max_examples=40)
@given(seed=seeds, n=dims)
def test_sum_and_intersection_are_idempotent(seed, n):
    S, _ = random_pair(seed, n)
    assert equal(span_sum(S, S), S)
    assert equal(intersect(S, S), S)
