import numpy as np
import pytest

from oblique.services import sampling
from oblique.services.errors import NotInvertible, NotPositive
from oblique.services.numcore import operator_norm
from oblique.services.shorted import (
    ShortedRoute,
    infimum_attained,
    is_admissible,
    minorant_check,
    range_identity,
    shift_identity,
    shorted,
    shorted_compatible,
    shorted_invertible,
    shorted_via_projection,
)
from oblique.services.subspace import equal, from_spanning

E1 = from_spanning(np.array([[1.0], [0.0]]))
E2 = from_spanning(np.array([[0.0], [1.0]]))


def assert_close(X, Y, atol=1e-8):
    assert operator_norm(np.asarray(X) - np.asarray(Y)) <= atol * max(1.0, operator_norm(np.asarray(Y)))


@pytest.mark.parametrize("route", [shorted, shorted_via_projection, shorted_compatible])
def test_identity_shorts_to_complement_projector(rng, route):
    S = sampling.random_subspace(rng, 5)
    assert_close(route(np.eye(5), S).sigma.matrix, np.eye(5) - S.projector)


def test_block_route_two_by_two():
    result = shorted(np.array([[2.0, 1.0], [1.0, 1.0]]), E1)
    assert_close(result.sigma.matrix, np.diag([0.0, 0.5]))
    assert result.route is ShortedRoute.BLOCK
    assert result.d_witness is not None


def test_shorting_to_full_space_gives_zero(rng):
    A = sampling.random_psd(rng, 4, 3)
    assert np.allclose(shorted(A, from_spanning(np.eye(4))).sigma.matrix, 0.0)


def test_shorting_to_zero_subspace_keeps_operator(rng):
    A = sampling.random_psd(rng, 4, 3)
    assert np.allclose(shorted(A, from_spanning(np.zeros((4, 1)))).sigma.matrix, A)


def test_projection_route_diagonal():
    result = shorted_via_projection(np.diag([4.0, 1.0]), E1)
    assert_close(result.sigma.matrix, np.diag([0.0, 1.0]))
    assert equal(result.auxiliary.range, E2)


def test_projection_route_agrees_with_block_route(rng):
    A = sampling.random_psd(rng, 8, 6)
    S = sampling.random_subspace(rng, 8)
    assert_close(
        shorted_via_projection(A, S, check=False).sigma.matrix, shorted(A, S).sigma.matrix
    )


def test_compatible_route_keeps_aligned_operator():
    A = np.diag([1.0, 0.0])
    assert_close(shorted_compatible(A, E2).sigma.matrix, A)


def test_three_routes_agree_on_singular_operator(rng):
    A = sampling.random_psd(rng, 8, 5)
    S = sampling.random_subspace(rng, 8, 3)
    block = shorted(A, S).sigma.matrix
    # check=True cross-checks the routes and the range identity internally
    compatible = shorted_compatible(A, S).sigma.matrix
    projection = shorted_via_projection(A, S).sigma.matrix
    assert_close(compatible, block)
    assert_close(projection, block)
    assert range_identity(A, S).equal


def test_schur_complement_for_definite_operator(rng):
    A = sampling.random_positive_definite(rng, 6)
    S = sampling.random_subspace(rng, 6, 2)
    assert_close(shorted_invertible(A, S).matrix, shorted(A, S).sigma.matrix)


def test_schur_complement_needs_definite_operator():
    with pytest.raises(NotInvertible):
        shorted_invertible(np.diag([1.0, 0.0]), E1)


def test_shorted_rejects_indefinite_operator():
    with pytest.raises(NotPositive):
        shorted(np.diag([1.0, -1.0]), E1)


def test_minorants(rng):
    A = sampling.random_psd(rng, 5, 4)
    S = sampling.random_subspace(rng, 5, 2)
    sigma = shorted(A, S).sigma.matrix
    assert minorant_check(A, S, np.zeros((5, 5)))
    assert minorant_check(A, S, sigma)
    assert minorant_check(A, S, 0.5 * sigma)


def test_perturbed_shorted_operator_is_not_a_larger_minorant(rng):
    A = sampling.random_psd(rng, 4, 4)
    S = sampling.random_subspace(rng, 4, 2)
    sigma = shorted(A, S).sigma.matrix
    u = np.linalg.svd(np.eye(4) - S.projector)[0][:, :1]
    X = sigma + 1e-3 * (u @ u.conj().T)
    assert not minorant_check(A, S, X)


def test_infimum_attained_for_identity(rng):
    S = sampling.random_subspace(rng, 4, 2)
    Q, attained = infimum_attained(np.eye(4), S)
    assert attained
    assert np.allclose(Q.matrix, np.eye(4) - S.projector)


def test_infimum_attained_on_definite_operator(rng):
    A = sampling.random_positive_definite(rng, 6)
    S = sampling.random_subspace(rng, 6)
    _, attained = infimum_attained(A, S, samples=50)
    assert attained


def test_infimum_attained_for_zero_operator(rng):
    S = sampling.random_subspace(rng, 3, 1)
    _, attained = infimum_attained(np.zeros((3, 3)), S)
    assert attained


def test_range_identity_on_random_instances(rng):
    for _ in range(5):
        A = sampling.random_psd(rng, 6, int(rng.integers(1, 7)))
        S = sampling.random_subspace(rng, 6)
        identity = range_identity(A, S)
        assert identity.equal and identity.chain


@pytest.mark.parametrize("shift", [0.5, 1.0, 2.0])
def test_shift_identity(rng, shift):
    A = sampling.random_psd(rng, 5, 3)
    S = sampling.random_subspace(rng, 5, 2)
    assert shift_identity(A, S, shift)


def test_definite_operators_make_every_subspace_admissible(rng):
    A = sampling.random_positive_definite(rng, 5)
    assert is_admissible(A, sampling.random_subspace(rng, 5))


def test_admissible_aligned_diagonal():
    assert is_admissible(np.diag([1.0, 0.0]), E2)


def test_zero_operator_is_not_admissible():
    assert not is_admissible(np.zeros((2, 2)), E1)
