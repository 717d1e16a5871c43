import math

import numpy as np
import pytest

from conftest import paths_close, random_general_goal
from csc3d.core_types import (
    CaseTag,
    CscPath,
    GoalPose,
    SolutionKind,
)
from csc3d.kinematics import fk_residual, path_length
from csc3d.oracle import numeric_solve
from csc3d.solver import DEFAULT_THETA1_SAMPLES, solve
from csc3d.special_cases import (
    detect,
    solve_family,
    solve_planar,
    solve_straight,
    solve_unknown_singular,
)


class TestDetect:
    def test_on_axis_aligned(self):
        assert detect(GoalPose([0, 0, 3], [0, 0, 1])) is CaseTag.INFINITE_FAMILY

    def test_on_axis_antialigned(self):
        assert detect(GoalPose([0, 0, 2], [0, 0, -1])) is CaseTag.INFINITE_FAMILY

    def test_coplanar(self):
        assert detect(GoalPose([3, 0, 1], [0.5, 0, 1])) is CaseTag.PLANAR
        assert detect(GoalPose([1, 2, 0.5], [2, 4, -1])) is CaseTag.PLANAR

    def test_on_axis_position_tilted_direction_is_planar(self):
        assert detect(GoalPose([0, 0, 3], [1, 0, 1])) is CaseTag.PLANAR

    def test_general(self, rng):
        for _ in range(20):
            _, g = random_general_goal(rng)
            assert detect(g) is CaseTag.GENERAL


class TestSolveStraight:
    def test_basic(self):
        result = solve_straight(GoalPose([0, 0, 4], [0, 0, 1]))
        assert result.kind is SolutionKind.STRAIGHT_LINE
        assert result.paths == (CscPath(0.0, 0.0, 4.0, 0.0, 0.0),)


class TestSolveFamily:
    def test_aligned_above_two_has_sixteen_representatives(self):
        goal = GoalPose([0, 0, 2], [0, 0, 1])
        result = solve_family(goal, DEFAULT_THETA1_SAMPLES)
        assert result.kind is SolutionKind.INFINITE_FAMILY
        assert result.diagnostics["n_representatives"] == 16
        assert result.diagnostics["straight_prepended"] is True
        assert result.family is not None
        assert set(result.family.theta4_choices) == {0.0, math.pi}

    def test_antialigned_has_eight_representatives(self):
        goal = GoalPose([0, 0, 2], [0, 0, -1])
        result = solve_family(goal, DEFAULT_THETA1_SAMPLES)
        assert result.diagnostics["n_representatives"] == 8
        assert result.diagnostics["straight_prepended"] is False
        assert result.family.theta4_choices == (0.0,)

    def test_every_representative_validates(self):
        for x, v in (([0, 0, 2], [0, 0, 1]), ([0, 0, 2], [0, 0, -1]),
                      ([0, 0, 5], [0, 0, 1]), ([0, 0, 0.7], [0, 0, -1])):
            goal = GoalPose(x, v)
            result = solve_family(goal, DEFAULT_THETA1_SAMPLES)
            for p in result.paths:
                assert fk_residual(p, goal) < 1e-6

    def test_generator_covers_arbitrary_headings(self, rng):
        goal = GoalPose([0, 0, 2], [0, 0, 1])
        result = solve_family(goal, DEFAULT_THETA1_SAMPLES)
        for t1 in rng.uniform(-math.pi, math.pi, 20):
            for t4 in result.family.theta4_choices:
                p = result.family.generator(t1, t4)
                if p is not None:
                    assert fk_residual(p, goal) < 1e-6

    def test_straight_member_is_shortest_when_reachable(self):
        goal = GoalPose([0, 0, 3], [0, 0, 1])
        result = solve_family(goal, DEFAULT_THETA1_SAMPLES)
        lengths = [path_length(p, 1.0) for p in result.paths]
        assert lengths[0] <= min(lengths) + 1e-12
        assert result.paths[0].d == 3.0


class TestSolvePlanar:
    PLANAR_GOALS = (
        ([6.0, 0.0, 1.0], [0.0, 0.0, 1.0]),
        ([0.0, 0.0, 3.0], [1.0, 0.0, 1.0]),
        ([4.0, 0.0, -2.0], [1.0, 0.0, 0.0]),
    )

    def test_solutions_lie_in_plane(self):
        from csc3d.oracle import fk_geometric

        for x, v in self.PLANAR_GOALS:
            goal = GoalPose(x, v)
            result = solve_planar(goal)
            assert result.paths
            for p in result.paths:
                pts = np.array(fk_geometric(p, 1.0, 60))
                # Plane through the origin containing x_g, v_g, and +z.
                axis = np.cross(np.array(x, float) + np.array(v, float), [0, 0, 1])
                if np.linalg.norm(axis) < 1e-9:
                    axis = np.cross(np.array(v, float), [0, 0, 1])
                axis /= np.linalg.norm(axis)
                assert np.abs(pts @ axis).max() < 1e-8

    def test_matches_brute_force(self):
        for x, v in self.PLANAR_GOALS:
            goal = GoalPose(x, v)
            analytic = solve_planar(goal)
            brute = numeric_solve(goal, grid_density=16)
            assert len(analytic.paths) == len(brute)
            # Equal-length mirror pairs may sort differently; match as sets.
            remaining = list(brute)
            for a in analytic.paths:
                hit = next((b for b in remaining if paths_close(a, b, tol=1e-4)), None)
                assert hit is not None, a
                remaining.remove(hit)

    def test_all_validate(self):
        for x, v in self.PLANAR_GOALS:
            goal = GoalPose(x, v)
            for p in solve_planar(goal).paths:
                assert fk_residual(p, goal) < 1e-6


class TestSolveUnknownSingular:
    def test_recovers_planar_solutions_by_perturbation(self):
        goal = GoalPose([6.0, 0.0, 1.0], [0.0, 0.0, 1.0])
        fallback = solve_unknown_singular(goal)
        assert fallback.kind is SolutionKind.DISCRETE
        assert fallback.diagnostics["perturbation_fallback"] is True
        direct = solve_planar(goal)
        assert len(fallback.paths) >= max(1, len(direct.paths) - 1)
        for p in fallback.paths:
            assert fk_residual(p, goal) < 1e-6


class TestDispatchIntegration:
    def test_solve_routes_family(self):
        result = solve(GoalPose([0, 0, 2], [0, 0, 1]))
        assert result.kind is SolutionKind.INFINITE_FAMILY
        assert result.diagnostics["detected_tag"] == CaseTag.INFINITE_FAMILY.value

    def test_solve_routes_planar(self):
        result = solve(GoalPose([6, 0, 1], [0, 0, 1]))
        assert result.diagnostics["case_tag"] == CaseTag.PLANAR.value
        assert len(result.paths) == 4

    def test_solve_routes_general(self, rng):
        _, g = random_general_goal(rng)
        result = solve(g)
        assert result.diagnostics["detected_tag"] == CaseTag.GENERAL.value
        assert result.paths
