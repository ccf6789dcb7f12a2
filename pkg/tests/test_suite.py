import pytest

from oblique.services.suite import (
    FAMILIES,
    MANIFOLD_SAMPLES,
    PARALLEL_SAMPLES,
    run_case,
    run_suite,
)


def test_reference_run_has_no_failures(tol):
    payload = run_suite(42, 100, 8, tol, workers=4)
    assert payload.total_failures == 0, payload.failures
    assert [f.name for f in payload.families] == list(FAMILIES)
    assert all(f.cases == 100 and f.checks > 0 for f in payload.families)
    assert payload.total_checks == sum(f.checks for f in payload.families)


def test_result_does_not_depend_on_worker_count(tol):
    serial = run_suite(5, 6, 6, tol, workers=1)
    threaded = run_suite(5, 6, 6, tol, workers=3)
    assert serial.model_dump_json() == threaded.model_dump_json()


def test_cases_are_reproducible(tol):
    first = run_case(9, 3, 4, 6, tol)
    second = run_case(9, 3, 4, 6, tol)
    assert (first.checks, first.failures) == (second.checks, second.failures)


@pytest.mark.parametrize("family_index", range(len(FAMILIES)))
def test_every_family_passes_in_small_dimension(tol, family_index):
    for case in range(5):
        outcome = run_case(1, family_index, case, 3, tol)
        assert outcome.checks > 0
        assert outcome.failures == []


def test_dimension_must_be_at_least_two(tol):
    with pytest.raises(ValueError):
        run_suite(0, 1, 1, tol)


def test_manifold_family_checks_every_sampled_member(tol):
    outcome = run_case(1, list(FAMILIES).index("manifold"), 0, 4, tol)
    assert outcome.failures == []
    assert outcome.checks >= 2 * MANIFOLD_SAMPLES


def test_parallel_family_checks_every_shifted_member(tol):
    outcome = run_case(1, list(FAMILIES).index("parallel"), 0, 4, tol)
    assert outcome.failures == []
    assert outcome.checks >= 2 * PARALLEL_SAMPLES
