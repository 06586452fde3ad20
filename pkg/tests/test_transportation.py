"""Tests for the transportation simplex and vertex enumeration."""

from itertools import permutations

import numpy as np
import pytest

from channel_compare.core.exceptions import InvalidDistributionError
from channel_compare.core.models import Alphabet, ProbVector
from channel_compare.lp.transportation import (
    TransportationProblem,
    solve_transportation,
    transportation_vertex,
    transportation_vertices,
)


class TestTransportationVertex:
    def test_assignment_problem(self):
        # Arrange: uniform marginals make vertices permutation matrices
        row = col = np.full(3, 1 / 3)
        cost = np.array([[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]])

        # Act
        plan = transportation_vertex(row, col, cost)

        # Assert
        best = min(sum(cost[i, p[i]] for i in range(3)) for p in permutations(range(3))) / 3
        assert np.sum(plan * cost) == pytest.approx(best)
        assert np.allclose(plan.sum(axis=1), row)
        assert np.allclose(plan.sum(axis=0), col)

    def test_zero_marginals_are_restored(self):
        row = np.array([0.5, 0.0, 0.5])
        col = np.array([0.25, 0.75])
        plan = transportation_vertex(row, col, np.ones((3, 2)))
        assert plan.shape == (3, 2)
        assert np.all(plan[1] == 0.0)

    def test_totals_must_agree(self):
        with pytest.raises(InvalidDistributionError):
            transportation_vertex(np.array([0.5, 0.5]), np.array([0.5, 0.6]), np.zeros((2, 2)))

    def test_matches_enumeration_on_random_costs(self, rng):
        for _ in range(30):
            # Arrange
            row = rng.dirichlet(np.ones(3)) * 0.4
            col = rng.dirichlet(np.ones(3)) * 0.4
            cost = rng.normal(size=(3, 3))

            # Act
            plan = transportation_vertex(row, col, cost)

            # Assert
            vertices = transportation_vertices(row, col)
            best = min(np.sum(v * cost) for v in vertices)
            assert np.sum(plan * cost) == pytest.approx(best, abs=1e-10)

    def test_degenerate_marginals(self):
        row = np.array([0.5, 0.5])
        col = np.array([0.5, 0.5])
        cost = np.array([[0.0, 1.0], [1.0, 0.0]])
        plan = transportation_vertex(row, col, cost)
        assert np.allclose(plan, np.diag([0.5, 0.5]))


class TestSolveTransportation:
    def test_reports_cost(self):
        binary = Alphabet.range(2)
        problem = TransportationProblem(
            row_marginal=ProbVector(alphabet=binary, mass=[0.5, 0.5]),
            col_marginal=ProbVector(alphabet=binary, mass=[0.5, 0.5]),
            cost=[[1.0, 0.0], [0.0, 1.0]],
        )
        solution = solve_transportation(problem)
        assert solution.cost == pytest.approx(0.0)
        assert np.allclose(solution.plan, [[0.0, 0.5], [0.5, 0.0]])

    def test_never_worse_than_independent_coupling(self, rng):
        for _ in range(100):
            # Arrange
            rows, cols = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(4))
            problem = TransportationProblem(
                row_marginal=ProbVector(alphabet=Alphabet.range(3), mass=rows),
                col_marginal=ProbVector(alphabet=Alphabet.range(4), mass=cols),
                cost=rng.normal(size=(3, 4)),
            )

            # Act
            solution = solve_transportation(problem)

            # Assert
            assert solution.cost <= float(np.sum(np.outer(rows, cols) * problem.cost)) + 1e-12
            assert np.allclose(solution.plan.sum(axis=1), rows, atol=1e-12)
            assert np.allclose(solution.plan.sum(axis=0), cols, atol=1e-12)


class TestTransportationVertices:
    def test_two_by_two_has_two_vertices(self):
        vertices = transportation_vertices(np.array([0.25, 0.125]), np.array([0.125, 0.25]))
        assert vertices.shape == (2, 2, 2)
        for vertex in vertices:
            assert np.allclose(vertex.sum(axis=1), [0.25, 0.125])

    def test_single_support_point(self):
        vertices = transportation_vertices(np.array([0.25, 0.0]), np.array([0.25]))
        assert vertices.shape == (1, 2, 1)
        assert vertices[0, 0, 0] == pytest.approx(0.25)

    def test_uniform_three_by_three_vertices_are_permutations(self):
        vertices = transportation_vertices(np.full(3, 1 / 3), np.full(3, 1 / 3))
        assert len(vertices) == 6
