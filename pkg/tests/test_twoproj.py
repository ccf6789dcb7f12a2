import numpy as np
import pytest

from oblique.services import sampling
from oblique.services.errors import NotHermitianProjection, ShapeMismatch
from oblique.services.numcore import operator_norm
from oblique.services.twoproj import (
    as_orthogonal_projection,
    decompose,
    equivalence_battery,
    generic_position,
    kernel_characterization,
    norm_report,
    p_qp,
)

THETA = np.pi / 3


def degenerate_pair():
    """Q kills span{e1, e2}; R(P) = span{e1, (e2 + e3)/√2}."""
    Q = np.diag([0.0, 0.0, 1.0, 1.0])
    v = np.array([0.0, 1.0, 1.0, 0.0]) / np.sqrt(2.0)
    P = np.diag([1.0, 0.0, 0.0, 0.0]) + np.outer(v, v)
    return Q, P


def test_equal_projections(rng):
    P = sampling.random_orthogonal_projector(rng, 5, 2)
    report = norm_report(P, P)
    assert np.allclose(report.p_qp.matrix, P)
    for value in (report.norm, report.norm_via_inverse, report.norm_via_defect, report.norm_via_restriction):
        assert value == pytest.approx(1.0)


def test_identity_weight_gives_orthogonal_projection(rng):
    P = sampling.random_orthogonal_projector(rng, 4, 2)
    assert np.allclose(p_qp(np.eye(4), P).matrix, P)


def test_rotated_lines():
    Q, P = sampling.rotation_pair(THETA)
    report = norm_report(Q, P)
    assert np.allclose(report.p_qp.matrix, [[1.0, np.sqrt(3.0)], [0.0, 0.0]])
    assert report.norm == pytest.approx(2.0)
    assert report.norm_via_inverse == pytest.approx(2.0)
    assert report.norm_via_defect == pytest.approx(2.0)
    assert report.norm_via_restriction == pytest.approx(2.0)
    assert report.generic and report.kernel_ok


@pytest.mark.parametrize("theta", np.linspace(0.05, np.pi / 2 - 0.05, 7))
def test_norm_sweep_in_the_plane(theta):
    Q, P = sampling.rotation_pair(theta)
    assert p_qp(Q, P).norm * np.cos(theta) == pytest.approx(1.0, abs=1e-9)


def test_norm_formulas_agree_on_random_pair(rng):
    Q, P = sampling.random_projection_pair(rng, 10)
    report = norm_report(Q, P)
    for value in (report.norm_via_inverse, report.norm_via_defect, report.norm_via_restriction):
        assert abs(report.norm - value) <= 1e-8 * report.norm
    assert report.kernel_ok


def test_kernel_characterization_identity_weight(rng):
    P = sampling.random_orthogonal_projector(rng, 4, 2)
    assert kernel_characterization(np.eye(4), P)


def test_generic_lines_project_along_kernel():
    Q, P = sampling.rotation_pair(THETA)
    assert generic_position(Q, P)
    E = p_qp(Q, P).matrix
    kernel_of_q = np.array([-np.sin(THETA), np.cos(THETA)])
    assert np.allclose(E @ kernel_of_q, 0.0)
    assert kernel_characterization(Q, P)


def test_equal_proper_projections_are_generic(rng):
    P = sampling.random_orthogonal_projector(rng, 4, 2)
    assert generic_position(P, P)


def test_full_range_is_not_generic(rng):
    Q = sampling.random_orthogonal_projector(rng, 4, 2)
    assert not generic_position(Q, np.eye(4))


def test_decomposition_without_common_kernel():
    Q, P = sampling.rotation_pair(THETA)
    p_n, p_qp0 = decompose(Q, P)
    assert np.allclose(p_n.matrix, 0.0)
    assert np.allclose(p_qp0.matrix, p_qp(Q, P).matrix)


def test_decomposition_when_range_lies_in_kernel():
    Q = np.diag([0.0, 1.0])
    P = np.diag([1.0, 0.0])
    assert np.allclose(p_qp(Q, P).matrix, P)
    p_n, p_qp0 = decompose(Q, P)
    assert np.allclose(p_n.matrix, P)
    assert np.allclose(p_qp0.matrix, 0.0)
    report = norm_report(Q, P)
    assert report.norm_via_inverse is None and report.norm_via_defect is None


def test_decomposition_of_degenerate_pair():
    Q, P = degenerate_pair()
    p_n, p_qp0 = decompose(Q, P)
    assert np.allclose(p_n.matrix, np.diag([1.0, 0.0, 0.0, 0.0]))
    assert operator_norm(p_n.matrix + p_qp0.matrix - p_qp(Q, P).matrix) <= 1e-10
    report = norm_report(Q, P)
    assert report.norm == pytest.approx(np.sqrt(2.0))
    assert report.kernel_ok
    assert not report.generic


def test_engineered_kernel_blocks(rng):
    Q, P, m = sampling.kernel_block_pair(rng, 6)
    p_n, _ = decompose(Q, P)
    assert p_n.rank == m
    assert kernel_characterization(Q, P)
    assert not generic_position(Q, P)


def test_battery_for_rotated_lines():
    Q, P = sampling.rotation_pair(THETA)
    battery = equivalence_battery(Q, P)
    assert len(battery) == 10
    assert all(item.holds is True for item in battery)
    by_name = {item.name: item for item in battery}
    assert by_name["c(S, T⊥) = c(T, S⊥) < 1"].value == pytest.approx(np.sin(THETA), abs=1e-10)
    assert by_name["‖(I − Q)P‖ < 1"].value == pytest.approx(np.sin(THETA))


def test_battery_skips_defect_bound_with_common_kernel():
    Q, P = degenerate_pair()
    battery = equivalence_battery(Q, P)
    assert battery[0].holds and battery[1].holds
    assert battery[-1].holds is None


def test_rejects_oblique_input():
    with pytest.raises(NotHermitianProjection):
        as_orthogonal_projection(np.array([[1.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotHermitianProjection):
        as_orthogonal_projection(np.diag([2.0, 0.0]))


def test_rejects_mismatched_sizes():
    with pytest.raises(ShapeMismatch):
        p_qp(np.eye(2), np.eye(3))
