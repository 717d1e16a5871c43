import math

import numpy as np
import pytest

from conftest import paths_close, random_general_goal, SEVEN_V, SEVEN_X
from csc3d.core_types import (
    GoalPose,
    InvalidGoal,
    SolutionKind,
    canonicalize,
)
from csc3d.kinematics import fk_residual, path_length
from csc3d.solver import DEFAULT_THETA1_SAMPLES, shortest, solve


class TestSolve:
    def test_seven_solution_regression(self):
        goal = GoalPose(SEVEN_X, SEVEN_V)
        result = solve(goal)
        assert result.kind is SolutionKind.DISCRETE
        assert len(result.paths) == 7
        for p in result.paths:
            assert fk_residual(p, goal) < 1e-6

    def test_round_trip_recovery(self, rng):
        recovered = 0
        for _ in range(50):
            p, g = random_general_goal(rng)
            result = solve(g)
            assert all(fk_residual(q, g) < 1e-6 for q in result.paths)
            if any(paths_close(canonicalize(p), q) for q in result.paths):
                recovered += 1
        assert recovered >= 49

    def test_rejects_non_goal(self):
        with pytest.raises(InvalidGoal):
            solve((1.0, 2.0, 3.0))

    def test_wall_time_recorded(self, rng):
        _, g = random_general_goal(rng)
        result = solve(g)
        assert result.wall_ms is not None and result.wall_ms > 0.0

    def test_diagnostics_present(self, rng):
        _, g = random_general_goal(rng)
        d = solve(g).diagnostics
        assert "case_tag" in d and "detected_tag" in d
        assert "n_roots" in d and "rejections" in d

    def test_custom_theta1_sampling(self):
        goal = GoalPose([0, 0, 2], [0, 0, 1])
        samples = tuple(np.linspace(0.0, 2.0 * math.pi, 4, endpoint=False))
        result = solve(goal, theta1_samples=samples)
        assert result.diagnostics["n_representatives"] == 8

    def test_radius_scaling_round_trip(self, rng):
        for lam in (0.1, 1.0, 10.0):
            p, g1 = random_general_goal(rng)
            goal = GoalPose(g1.x_g * lam, g1.v_g, lam)
            result = solve(goal)
            assert result.paths
            for q in result.paths:
                assert fk_residual(q, goal) < 1e-6

    def test_family_generator_rescaled(self):
        goal = GoalPose([0, 0, 6], [0, 0, 1], 3.0)
        result = solve(goal)
        assert result.kind is SolutionKind.INFINITE_FAMILY
        p = result.family.generator(0.7, result.family.theta4_choices[0])
        assert p is not None
        assert fk_residual(p, goal) < 1e-6


class TestShortest:
    def test_straight_when_on_axis(self):
        # A degenerate family member can tie the straight path to within
        # round-off; the winner must still be an effectively straight path.
        p = shortest(GoalPose([0, 0, 3], [0, 0, 1]))
        assert abs(p.d - 3.0) < 1e-12
        assert p.psi1 < 1e-12 and p.psi2 < 1e-12

    def test_matches_min_over_solve(self, rng):
        for _ in range(10):
            _, g = random_general_goal(rng)
            p = shortest(g)
            lengths = [path_length(q, 1.0) for q in solve(g).paths]
            assert abs(path_length(p, 1.0) - min(lengths)) < 1e-12

    def test_scales_with_radius(self, rng):
        _, g = random_general_goal(rng)
        lam = 2.5
        a = shortest(GoalPose(g.x_g, g.v_g, 1.0))
        b = shortest(GoalPose(g.x_g * lam, g.v_g, lam))
        assert abs(path_length(b, lam) - lam * path_length(a, 1.0)) < 1e-6
