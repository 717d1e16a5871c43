"""Public solver facade: scale, dispatch, solve, validate, unscale."""

from __future__ import annotations

import math
import time

import numpy as np

from .backsub import assemble, solve_d3_theta5, solve_theta12, theta4_from_root
from .core_types import (
    CaseTag,
    CscPath,
    DEFAULT_TOL,
    Csc3dError,
    EmptyNullSpace,
    FamilyDescriptor,
    GoalPose,
    IdenticallyZeroDeterminant,
    InconsistentNullVector,
    InconsistentSolution,
    InvalidGoal,
    JointValues,
    NoSolution,
    NoValidBranch,
    SingularQ,
    SolutionKind,
    SolutionSet,
    Tolerances,
    path_sort_key,
)
from .elimination import build_pq, candidate_roots, half_angle_and_expand, polish_root, reduce_to_sigma
from .kinematics import path_length, scale_goal, unscale_path
from .special_cases import detect, solve_family, solve_planar, solve_unknown_singular

__all__ = ["solve", "shortest", "general_pipeline", "DEFAULT_THETA1_SAMPLES"]

DEFAULT_THETA1_SAMPLES = tuple(np.linspace(0.0, 2.0 * math.pi, 8, endpoint=False))


def general_pipeline(goal: GoalPose, tol: Tolerances = DEFAULT_TOL) -> SolutionSet:
    """Elimination, root extraction, and back-substitution for a unit-radius goal."""
    sys = build_pq(goal)
    sigma, rows_a, _ = reduce_to_sigma(sys)
    s12 = half_angle_and_expand(sigma)
    s12n = s12.row_normalized()
    roots, has_infinite = candidate_roots(s12n)
    roots = [polish_root(s12n, x) for x in roots]
    if has_infinite:
        roots.append(math.inf)

    candidates = []
    rejections = []
    for x4 in roots:
        theta4 = theta4_from_root(x4)
        try:
            pairs = solve_d3_theta5(s12, x4, tol)
        except (EmptyNullSpace, InconsistentNullVector) as exc:
            rejections.append(("d3_theta5", type(exc).__name__, x4))
            continue
        for d3, theta5 in pairs:
            try:
                theta1, theta2 = solve_theta12(sys, max(d3, 0.0), theta4, theta5, tol)
            except InconsistentSolution as exc:
                rejections.append(("theta12", str(exc), x4))
                continue
            candidates.append(JointValues(theta1, theta2, d3, theta4, theta5))

    result = assemble(goal, candidates, tol)
    diag = dict(result.diagnostics)
    diag.update(
        {
            "case_tag": CaseTag.GENERAL.value,
            "n_roots": len(roots),
            "selected_rows": [int(i) for i in rows_a],
        }
    )
    diag["rejections"] = diag.get("rejections", []) + rejections
    return SolutionSet(kind=result.kind, paths=result.paths, diagnostics=diag)


def _unscale_set(result: SolutionSet, r: float) -> SolutionSet:
    if r == 1.0:
        return result
    family = result.family
    if family is not None:
        inner = family.generator

        def scaled_generator(theta1, theta4, _g=inner, _r=r):
            p = _g(theta1, theta4)
            return None if p is None else unscale_path(p, _r)

        family = FamilyDescriptor(
            theta4_choices=family.theta4_choices, generator=scaled_generator
        )
    return SolutionSet(
        kind=result.kind,
        paths=tuple(unscale_path(p, r) for p in result.paths),
        family=family,
        diagnostics=result.diagnostics,
        wall_ms=result.wall_ms,
    )


def solve(
    goal: GoalPose,
    tol: Tolerances = DEFAULT_TOL,
    theta1_samples=DEFAULT_THETA1_SAMPLES,
) -> SolutionSet:
    """All valid paths from the origin pose (+z heading) to ``goal``.

    The goal is scaled to unit radius, classified, routed to the matching
    handler (general elimination pipeline, infinite family, planar, or the
    perturbation fallback), and results are scaled back to the caller's
    radius.  Never raises on finite inputs beyond InvalidGoal.
    """
    if not isinstance(goal, GoalPose):
        raise InvalidGoal("goal must be a GoalPose")
    t0 = time.perf_counter()
    scaled = scale_goal(goal)
    tag = detect(scaled, tol)

    result = None
    if tag is CaseTag.INFINITE_FAMILY:
        try:
            result = solve_family(scaled, theta1_samples, tol)
        except NoValidBranch:
            result = solve_unknown_singular(scaled, tol)
    elif tag is CaseTag.PLANAR:
        result = solve_planar(scaled, tol)
        if not result.paths:
            result = solve_unknown_singular(scaled, tol)
    else:
        try:
            result = general_pipeline(scaled, tol)
        except (SingularQ, IdenticallyZeroDeterminant, Csc3dError):
            result = solve_unknown_singular(scaled, tol)
        else:
            if not result.paths:
                result = solve_unknown_singular(scaled, tol)

    diag = dict(result.diagnostics)
    diag.setdefault("case_tag", tag.value)
    diag["detected_tag"] = tag.value
    wall_ms = (time.perf_counter() - t0) * 1e3
    result = SolutionSet(
        kind=result.kind,
        paths=result.paths,
        family=result.family,
        diagnostics=diag,
        wall_ms=wall_ms,
    )
    return _unscale_set(result, goal.r)


def shortest(goal: GoalPose, tol: Tolerances = DEFAULT_TOL) -> CscPath:
    """The minimum-length solution.

    For infinite-family goals this returns the straight member when present,
    otherwise the minimum-length representative over the default theta1
    sampling (the family continuum may contain marginally shorter members
    between samples).
    """
    result = solve(goal, tol)
    if not result.paths:
        raise NoSolution("no valid path for this goal")
    if result.kind is SolutionKind.INFINITE_FAMILY:
        return min(result.paths, key=lambda p: path_length(p, goal.r))
    return min(result.paths, key=lambda p: path_length(p, goal.r))
