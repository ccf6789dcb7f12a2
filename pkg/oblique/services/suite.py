"""
Seeded property battery behind the `suite` command.

Every case draws its own generator from (seed, family index, case index), so
the outcome does not depend on how cases are scheduled across workers.
"""

import logging
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..models import FailureRecord, FamilySummary, SuitePayload, ToleranceProfile
from . import sampling
from .douglas import range_included, reduced_idempotent, reduced_solution
from .errors import ObliqueError, RangeNotIncluded
from .numcore import adjoint, close, operator_norm, psd_leq
from .projection import Projection
from .projector import (
    compatibility,
    is_member,
    manifold,
    manifold_member,
    p_as,
    p_as_invertible,
    parallel_offset,
    selfadjointness,
)
from .shorted import (
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
from .subspace import (
    Subspace,
    column_space,
    complement,
    contains,
    equal,
    kernel,
    preimage,
    span_sum,
)
from .twoproj import (
    decompose,
    equivalence_battery,
    generic_position,
    kernel_characterization,
    norm_report,
    p_qp,
)

logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 20
MANIFOLD_SAMPLES = 100
PARALLEL_SAMPLES = 20


@dataclass
class CaseOutcome:
    checks: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    def check(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks += 1
        if not passed:
            self.failures.append((name, detail))


@dataclass(frozen=True)
class CaseSetup:
    rng: np.random.Generator
    n: int
    complex_field: bool
    tol: ToleranceProfile


def _psd_instance(setup: CaseSetup, singular: bool = True) -> tuple[np.ndarray, Subspace]:
    rng, n = setup.rng, setup.n
    rank = int(rng.integers(1, n + 1)) if singular else n
    A = sampling.random_psd(rng, n, rank, setup.complex_field)
    S = sampling.random_subspace(rng, n, complex_field=setup.complex_field)
    return A, Subspace(S.basis, setup.tol)


def _douglas(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, n, cf, tol = setup.rng, setup.n, setup.complex_field, setup.tol
    rank = int(rng.integers(1, n + 1))
    A = sampling.random_rank_matrix(rng, n, rank, cf)
    B = A @ sampling.random_matrix(rng, n, int(rng.integers(1, n + 1)), cf)
    result = reduced_solution(A, B, tol)
    D = result.D
    out.check("fit", close(A @ D, B, tol, scale=operator_norm(B)))
    out.check("kernel", equal(kernel(D, tol), kernel(B, tol)))
    out.check("row_space", contains(column_space(adjoint(A), tol), column_space(D, tol)))
    gap = abs(result.norm_sq - result.lambda_star)
    out.check(
        "douglas_bound",
        gap <= 1e-6 * max(1.0, result.lambda_star),
        f"‖D‖² = {result.norm_sq!r}, bound = {result.lambda_star!r}",
    )

    Q = sampling.random_invariant_projection(rng, A, cf)
    D_q = reduced_idempotent(A, Projection(Q, tol), tol)
    out.check("idempotent_corollary", close(D_q.matrix @ D_q.matrix, D_q.matrix, tol))

    if rank < n:
        outside = sampling.random_matrix(rng, n, 1, cf)
        included = range_included(outside, A, tol)
        try:
            reduced_solution(A, outside, tol, bound=False)
            raised = False
        except RangeNotIncluded:
            raised = True
        out.check("exclusion", not included and raised)


def _construction(setup: CaseSetup, out: CaseOutcome) -> None:
    tol = setup.tol
    A, S = _psd_instance(setup)
    Q = p_as(A, S, tol)
    E = Q.matrix
    scale_q = max(1.0, Q.norm)
    out.check("idempotent", operator_norm(E @ E - E) <= 1e-9 * scale_q)
    out.check(
        "a_selfadjoint",
        operator_norm(A @ E - adjoint(E) @ A) <= 1e-9 * max(1.0, operator_norm(A)) * scale_q,
    )
    out.check("range", equal(Q.range, S))
    out.check("kernel_in_a_orth", contains(preimage(A, complement(S), tol), Q.kernel))

    report = compatibility(A, S, tol)
    out.check(
        "angle_condition",
        report.cond_angle is True and report.cond_angle == report.cond_block,
        f"angle={report.cond_angle}, block={report.cond_block}",
    )
    out.check(
        "pap_closure",
        report.pap_closure is True and report.pap_closure == report.cond_block,
        f"closure={report.pap_closure}, block={report.cond_block}",
    )

    verdicts = selfadjointness(A, Q, tol)
    out.check(
        "rar_agreement_selfadjoint",
        verdicts.commutes and verdicts.kernel_inclusion and verdicts.contraction is not False,
        str(verdicts),
    )
    R = Projection(sampling.random_idempotent(setup.rng, setup.n, complex_field=setup.complex_field), tol)
    verdicts = selfadjointness(A, R, tol)
    out.check(
        "rar_agreement_random",
        verdicts.commutes == verdicts.kernel_inclusion == verdicts.contraction,
        str(verdicts),
    )


def _closed_form(setup: CaseSetup, out: CaseOutcome) -> None:
    tol = setup.tol
    A, S = _psd_instance(setup, singular=False)
    Q = p_as(A, S, tol)
    for via in ("inverse_sum", "resolvent"):
        closed = p_as_invertible(A, S, tol, via=via)
        out.check(via, close(closed.matrix, Q.matrix, tol, scale=Q.norm))
    out.check(
        "schur",
        close(shorted_invertible(A, S, tol).matrix, shorted(A, S, tol).sigma.matrix, tol),
    )


def _shorted_routes(setup: CaseSetup, out: CaseOutcome) -> None:
    tol = setup.tol
    A, S = _psd_instance(setup)
    scale = operator_norm(A)
    block = shorted(A, S, tol).sigma.matrix
    projection = shorted_via_projection(A, S, tol, check=False).sigma.matrix
    compatible = shorted_compatible(A, S, tol, check=False).sigma.matrix
    out.check("block_projection", close(block, projection, tol, scale=scale))
    out.check("block_compatible", close(block, compatible, tol, scale=scale))
    out.check("projection_compatible", close(projection, compatible, tol, scale=scale))


def _extremality(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, n, tol = setup.rng, setup.n, setup.tol
    A, S = _psd_instance(setup)
    _, attained = infimum_attained(A, S, tol, samples=50, seed=int(rng.integers(2**32)))
    out.check("infimum_attained", attained)

    sigma = shorted(A, S, tol).sigma.matrix
    out.check("zero_minorant", minorant_check(A, S, np.zeros_like(sigma), tol))
    out.check("sigma_minorant", minorant_check(A, S, sigma, tol))

    if S.dim < n - 1:
        extra = sampling.random_subspace(rng, n, 1, setup.complex_field)
        larger = Subspace(span_sum(S, extra).basis, tol)
        out.check(
            "monotone",
            psd_leq(shorted(A, larger, tol).sigma.matrix, sigma, tol, scale=operator_norm(A)),
        )


def _ranges(setup: CaseSetup, out: CaseOutcome) -> None:
    tol = setup.tol
    A, S = _psd_instance(setup)
    identity = range_identity(A, S, tol)
    out.check("range_identity", identity.equal)
    out.check("range_chain", identity.chain)
    for shift in (0.5, 1.0, 2.0):
        out.check(f"shift_{shift}", shift_identity(A, S, shift, tol))
    definite = sampling.random_positive_definite(setup.rng, setup.n, setup.complex_field)
    out.check("admissible_definite", is_admissible(definite, S, tol))


def _manifold(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, tol = setup.rng, setup.tol
    A, S = _psd_instance(setup)
    param = manifold(A, S, tol)
    rows, cols = param.free_dims
    base_norm = param.base.norm
    for i in range(MANIFOLD_SAMPLES):
        z = sampling.random_matrix(rng, rows, cols, setup.complex_field)
        member = manifold_member(param, z, tol)
        E = member.matrix
        valid = (
            operator_norm(E @ E - E) <= 1e-9 * max(1.0, member.norm)
            and equal(member.range, S)
            and close(A @ E, adjoint(E) @ A, tol, scale=operator_norm(A) * member.norm)
        )
        out.check("member", valid, f"sample {i}")
        out.check(
            "minimal_norm",
            member.norm >= base_norm - 1e-10 * max(1.0, base_norm),
            f"sample {i}: ‖E‖ = {member.norm!r}, ‖P_AS‖ = {base_norm!r}",
        )
    out.check(
        "unique_iff_trivial_n",
        compatibility(A, S, tol).unique == (param.n_space.dim == 0),
    )

    M, S4, Z = sampling.minimal_norm_instance(float(rng.uniform(0.1, 1.0)))
    base = p_as(M, S4, tol)
    other = Projection(base.matrix + Z, tol)
    out.check("sqrt2_base", abs(base.norm - np.sqrt(2.0)) <= 1e-9)
    out.check(
        "sqrt2_member",
        abs(other.norm - np.sqrt(2.0)) <= 1e-9 and not close(other.matrix, base.matrix, tol),
    )


def _indefinite(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, n, cf, tol = setup.rng, setup.n, setup.complex_field, setup.tol
    k = int(rng.integers(1, n))
    kind = int(rng.integers(0, 3))
    if kind == 0:
        A, S = sampling.incompatible_hermitian(rng, n, k, cf)
    elif kind == 1:
        A, S = sampling.compatible_singular_hermitian(rng, n, k, cf)
    else:
        A = sampling.random_hermitian(rng, n, cf)
        S = sampling.random_subspace(rng, n, k, cf)
    S = Subspace(S.basis, tol)
    report = compatibility(A, S, tol)
    out.check(
        "conditions_agree",
        report.cond_range_pa == report.cond_block == report.cond_sum,
        f"kind {kind}: {report.cond_range_pa}, {report.cond_block}, {report.cond_sum}",
    )
    if kind == 0:
        out.check("detects_incompatible", not report.compatible)
    elif report.compatible:
        Q = p_as(A, S, tol)
        out.check("indefinite_range", equal(Q.range, S))
        out.check("indefinite_selfadjoint", selfadjointness(A, Q, tol).commutes)

    swap = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
    e1 = Subspace(np.array([[1.0], [0.0]], dtype=np.complex128), tol)
    out.check("swap_witness", not compatibility(swap, e1, tol).compatible)


def _twoproj(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, n, cf, tol = setup.rng, setup.n, setup.complex_field, setup.tol
    theta = float(rng.uniform(0.05, np.pi / 2 - 0.05))
    Q, P = sampling.rotation_pair(theta)
    out.check("rotation_norm", abs(p_qp(Q, P, tol).norm * np.cos(theta) - 1.0) <= 1e-9)

    Q, P = sampling.random_projection_pair(rng, n, cf)
    report = norm_report(Q, P, tol)
    out.check("kernel_characterization", report.kernel_ok)
    out.check(
        "norm_paths",
        report.norm_via_inverse is not None
        and report.norm_via_defect is not None
        and report.norm_via_restriction is not None,
    )
    out.check(
        "battery",
        all(item.holds is not False for item in equivalence_battery(Q, P, tol)),
    )

    if n >= 3:
        Q, P, m = sampling.kernel_block_pair(rng, n, cf)
        p_n, p_qp0 = decompose(Q, P, tol)
        out.check("n_dimension", p_n.rank == m, f"rank {p_n.rank}, expected {m}")
        out.check("kernel_characterization_degenerate", kernel_characterization(Q, P, tol))
        out.check("not_generic", not generic_position(Q, P, tol))


def _parallel(setup: CaseSetup, out: CaseOutcome) -> None:
    rng, tol = setup.rng, setup.tol
    A, S = _psd_instance(setup)
    B = A @ A
    delta = parallel_offset(A, B, S, tol, samples=0)
    param = manifold(A, S, tol)
    rows, cols = param.free_dims
    for i in range(PARALLEL_SAMPLES):
        z = sampling.random_matrix(rng, rows, cols, setup.complex_field)
        shifted = Projection(manifold_member(param, z, tol).matrix + delta, tol)
        E = shifted.matrix
        out.check("offset_member", is_member(B, S, shifted, tol), f"sample {i}")
        out.check(
            "offset_idempotent",
            operator_norm(E @ E - E) <= 1e-9 * max(1.0, shifted.norm),
            f"sample {i}",
        )
    delta = parallel_offset(A, 2 * A, S, tol, samples=5, seed=0)
    out.check("offset_scaled", operator_norm(delta) <= tol.tol_eq * max(1.0, operator_norm(A)))


FAMILIES: dict[str, Callable[[CaseSetup, CaseOutcome], None]] = {
    "douglas": _douglas,
    "construction": _construction,
    "closed_form": _closed_form,
    "shorted_routes": _shorted_routes,
    "extremality": _extremality,
    "ranges": _ranges,
    "manifold": _manifold,
    "indefinite": _indefinite,
    "twoproj": _twoproj,
    "parallel": _parallel,
}


def run_case(
    seed: int, family_index: int, case: int, dim: int, tol: ToleranceProfile
) -> CaseOutcome:
    """Run one case of one family; analysis errors count as a failed check."""
    name = list(FAMILIES)[family_index]
    rng = np.random.default_rng([seed, family_index, case])
    n = int(rng.integers(2, dim + 1))
    setup = CaseSetup(rng=rng, n=n, complex_field=bool(rng.random() < 0.5), tol=tol)
    out = CaseOutcome()
    try:
        FAMILIES[name](setup, out)
    except ObliqueError as exc:
        logger.warning(f"{name} case {case}: {type(exc).__name__}: {exc}")
        out.check("exception", False, f"{type(exc).__name__}: {exc}")
    return out


def run_suite(
    seed: int,
    cases: int,
    dim: int,
    tol: ToleranceProfile,
    workers: int = 1,
) -> SuitePayload:
    """Run every family for `cases` seeded cases of dimension 2..dim.

    Args:
        seed: Base seed; the report is a pure function of the arguments.
        cases: Cases per family.
        dim: Largest ambient dimension (at least 2).
        tol: Tolerance profile.
        workers: Thread count; results are merged by case index.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    families = []
    failures: list[FailureRecord] = []
    total_checks = total_failures = 0

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for family_index, name in enumerate(FAMILIES):
            outcomes = list(
                pool.map(
                    lambda case: run_case(seed, family_index, case, dim, tol),
                    range(cases),
                )
            )
            checks = sum(o.checks for o in outcomes)
            failed = 0
            for case, outcome in enumerate(outcomes):
                failed += len(outcome.failures)
                for check, detail in outcome.failures:
                    if len(failures) < MAX_REPORTED_FAILURES:
                        failures.append(
                            FailureRecord(family=name, case=case, check=check, detail=detail)
                        )
            logger.info(f"{name}: {cases} cases, {checks} checks, {failed} failures")
            families.append(
                FamilySummary(name=name, cases=cases, checks=checks, failures=failed)
            )
            total_checks += checks
            total_failures += failed

    return SuitePayload(
        seed=seed,
        cases=cases,
        dim=dim,
        families=families,
        failures=failures,
        total_checks=total_checks,
        total_failures=total_failures,
    )
