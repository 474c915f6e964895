import dataclasses
import math

import numpy as np
import pytest

from src.spectral.connes import (
    SolverContext,
    _subgradient_ascent,
    build_problem,
    check_certificate,
    check_metric_axioms,
    commutator_basis,
    distance_matrix,
    distance_matrix_detailed,
    oracle_distance,
    project_to_ball,
    solve_distance,
)
from src.spectral.geometries import build_circle
from src.spectral.localization import heat_state
from src.types.sdp import SdpProblem, SdpSolution, SdpStatus
from src.types.solver_settings import DEFAULT_SOLVER_SETTINGS
from src.util.errors import Err, ExitCode, ForgeError, exit_code_for

ANGLES = [0.0, 1.2, 2.5, 3.7, 5.0]


@pytest.fixture(scope="module")
def circle():
    return build_circle(2)


@pytest.fixture(scope="module")
def circle_states(circle):
    return [heat_state(circle, (a,)) for a in ANGLES]


class TestSdpPieces:
    def test_commutators_are_anti_hermitian(self, circle):
        k = commutator_basis(circle)
        assert k.shape == (len(circle.algebra_basis), circle.dim, circle.dim)
        assert np.allclose(k + k.conj().transpose(0, 2, 1), 0)
        # the identity commutes with D
        assert not np.any(k[0])

    def test_project_to_ball(self):
        m = np.diag([2.0, -3.0, 0.5]).astype(complex)
        assert np.allclose(project_to_ball(m), np.diag([1.0, -1.0, 0.5]))

    def test_context_norm(self, circle):
        context = SolverContext(commutator_basis(circle))
        c = np.zeros(context.size)
        assert context.norm(c) == 0.0
        c[1] = 1.0
        # [D, cos] has entries +-1/2 on the first off diagonals
        expected = np.max(np.abs(np.linalg.eigvalsh(context.apply(c))))
        assert context.norm(c) == pytest.approx(expected)
        assert context.in_range(context.gram @ np.ones(context.size))


class TestSolveDistance:
    def test_zero_objective(self, circle, circle_states):
        p = build_problem(circle, circle_states[0], circle_states[0])
        solution = solve_distance(p)
        assert solution.value == 0.0
        assert solution.status == SdpStatus.OPTIMAL
        assert solution.iterations == 0

    def test_unbounded_direction(self, circle):
        k = commutator_basis(circle)
        b = np.zeros(k.shape[0])
        b[0] = 1.0
        solution = solve_distance(SdpProblem(b, k))
        assert solution.status == SdpStatus.INFEASIBLE
        assert solution.value == math.inf

    def test_against_oracle(self, circle, circle_states):
        commutators = commutator_basis(circle)
        context = SolverContext(commutators)
        pairs = 0
        for i in range(len(circle_states)):
            for j in range(i + 1, len(circle_states)):
                p = build_problem(circle, circle_states[i], circle_states[j], commutators)
                solution = solve_distance(p, context=context)
                assert solution.status == SdpStatus.OPTIMAL
                assert solution.certificate <= 1 + 1e-6
                oracle = oracle_distance(p, restarts=20, rng_seed=i * 10 + j)
                assert oracle <= solution.value + 1e-3
                assert abs(solution.value - oracle) <= 0.02 * solution.value
                pairs += 1
        assert pairs == 10

    def test_subgradient_ascent_stays_feasible(self, circle, circle_states):
        commutators = commutator_basis(circle)
        context = SolverContext(commutators)
        p = build_problem(circle, circle_states[0], circle_states[2], commutators)
        start = context.gram_pinv @ p.objective
        first = float(p.objective @ start) / context.norm(start)
        value, c = _subgradient_ascent(start, p.objective, context, 200)
        assert context.norm(c) == pytest.approx(1.0)
        assert value == pytest.approx(float(p.objective @ c))
        assert first - 1e-12 <= value <= solve_distance(p, context=context).value + 1e-3

    def test_certificate_above_one(self):
        check_certificate(SdpSolution(1.0, [1.0], SdpStatus.OPTIMAL, 0.0, 0.0, 3, 1.0))
        with pytest.raises(ForgeError) as e:
            check_certificate(SdpSolution(1.0, [1.0], SdpStatus.OPTIMAL, 0.0, 0.0, 3, 1.5))
        assert e.value.code == Err.NOT_CONVERGED
        assert exit_code_for(e.value.code) == ExitCode.NOT_CONVERGED

    def test_symmetric_in_states(self, circle, circle_states):
        forward = solve_distance(build_problem(circle, circle_states[0], circle_states[2]))
        backward = solve_distance(build_problem(circle, circle_states[2], circle_states[0]))
        assert forward.value == pytest.approx(backward.value, rel=1e-4)

    def test_both_orientations(self, circle, circle_states):
        settings = dataclasses.replace(DEFAULT_SOLVER_SETTINGS, both_orientations=True)
        p = build_problem(circle, circle_states[1], circle_states[3])
        single = solve_distance(p)
        both = solve_distance(p, settings=settings)
        assert both.value >= single.value - 1e-6
        c = np.array(both.coefficients)
        assert float(p.objective @ c) == pytest.approx(both.value)

    def test_scale_covariance(self, circle, circle_states):
        scaled = dataclasses.replace(
            circle,
            cutoff=2 * circle.cutoff,
            eigenvalue_bound=2 * circle.eigenvalue_bound,
            dirac_eigenvalues=[2 * x for x in circle.dirac_eigenvalues],
        )
        for j in (1, 3):
            plain = solve_distance(build_problem(circle, circle_states[0], circle_states[j]))
            halved = solve_distance(build_problem(scaled, circle_states[0], circle_states[j]))
            assert halved.value == pytest.approx(plain.value / 2, rel=1e-3)

    def test_dimension_mismatch(self, circle, circle_states):
        other = heat_state(build_circle(3), (0.0,))
        with pytest.raises(ForgeError) as e:
            build_problem(circle, circle_states[0], other)
        assert e.value.code == Err.DIMENSION_MISMATCH

    def test_quarter_circle(self):
        for cutoff in (4, 6):
            t = build_circle(cutoff)
            p = build_problem(t, heat_state(t, (0.0,)), heat_state(t, (math.pi / 2,)))
            assert abs(solve_distance(p).value - math.pi / 2) <= 0.05 * math.pi / 2

    def test_antipodal_below_half_circumference(self):
        t = build_circle(4)
        p = build_problem(t, heat_state(t, (0.0,)), heat_state(t, (math.pi,)))
        assert solve_distance(p).value <= math.pi + 1e-3


class TestDistanceMatrix:
    def test_metric_axioms(self, circle, circle_states):
        tight = dataclasses.replace(DEFAULT_SOLVER_SETTINGS, tol=1e-8, max_iter=50000)
        matrix, solutions = distance_matrix_detailed(circle, circle_states, tight)
        assert len(solutions) == 10
        assert np.array_equal(matrix, matrix.T)
        assert np.all(np.diag(matrix) == 0)
        assert check_metric_axioms(matrix) == []
        assert all(s.certificate <= 1 + 1e-6 for s in solutions.values())

    def test_threads(self, circle, circle_states):
        single = distance_matrix(circle, circle_states)
        pooled = distance_matrix(circle, circle_states, threads=3)
        assert np.allclose(single, pooled)

    def test_warm_start_agrees(self, circle, circle_states):
        cold = dataclasses.replace(DEFAULT_SOLVER_SETTINGS, warm_start=False)
        assert np.allclose(
            distance_matrix(circle, circle_states),
            distance_matrix(circle, circle_states, cold),
            rtol=1e-3,
        )

    def test_no_states(self, circle):
        with pytest.raises(ForgeError):
            distance_matrix(circle, [])


class TestMetricAxioms:
    def test_clean(self):
        d = np.array([[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]])
        assert check_metric_axioms(d) == []

    def test_violations(self):
        d = np.array([[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]])
        violations = check_metric_axioms(d)
        assert len(violations) == 1
        assert violations[0].startswith("triangle (0, 2) via 1")
        d[0, 1] = -1.0
        assert any(v.startswith("asymmetric") for v in check_metric_axioms(d))
        assert any(v.startswith("negative") for v in check_metric_axioms(d))

    def test_limit(self):
        d = np.ones((10, 10))
        violations = check_metric_axioms(d, limit=3)
        assert len(violations) == 4
        assert violations[-1].startswith("...")

    def test_not_square(self):
        assert check_metric_axioms(np.zeros((2, 3)))[0].startswith("not a square")
