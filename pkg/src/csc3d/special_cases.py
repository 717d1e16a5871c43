"""Detection and handling of singular goal families.

Three goal families break the general elimination: goals reachable by a
pure straight segment, goals collinear with the start axis (an infinite
one-parameter family of paths), and goals whose position/direction pair is
coplanar with the start axis (all solutions confined to that plane).  A
perturbation fallback covers anything else that degenerates numerically.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import least_squares

from .backsub import D3_EPS, assemble
from .core_types import (
    CaseTag,
    CscPath,
    DEFAULT_TOL,
    FamilyDescriptor,
    GoalPose,
    NoValidBranch,
    SolutionKind,
    SolutionSet,
    Tolerances,
    canonicalize,
    paths_duplicate,
    path_sort_key,
)
from .kinematics import dh_to_dubins, fk_residual, path_length
from .core_types import JointValues
from .polynomials import UniPoly, interpolate, real_roots

__all__ = [
    "detect",
    "solve_straight",
    "solve_family",
    "solve_planar",
    "solve_unknown_singular",
]

_V0 = np.array([0.0, 0.0, 1.0])


def detect(goal: GoalPose, tol: Tolerances = DEFAULT_TOL) -> CaseTag:
    """Classify a unit-radius goal.

    Collinear goals (position on the start axis, direction parallel or
    antiparallel to it) admit an infinite family that includes the straight
    path when one exists, so they are tagged INFINITE_FAMILY as a whole.
    Coplanar goals (zero z-component of x_g x v_g) are tagged PLANAR.
    Thresholds scale with 1 + ||x_g|| since the conditions are homogeneous.
    """
    x = goal.x_g
    v = goal.v_g
    nx = float(np.linalg.norm(x))
    rel = tol.singular_det * (1.0 + nx)
    collinear_x = float(np.linalg.norm(np.cross(x, _V0))) < rel
    collinear_v = float(np.linalg.norm(np.cross(v, _V0))) < tol.singular_det
    if collinear_x and collinear_v:
        return CaseTag.INFINITE_FAMILY
    if abs(x[0] * v[1] - x[1] * v[0]) < rel:
        return CaseTag.PLANAR
    return CaseTag.GENERAL


def solve_straight(goal: GoalPose) -> SolutionSet:
    """The pure straight path for an aligned on-axis goal."""
    d = float(np.linalg.norm(goal.x_g))
    path = CscPath(0.0, 0.0, d, 0.0, 0.0)
    return SolutionSet(
        kind=SolutionKind.STRAIGHT_LINE,
        paths=(path,),
        diagnostics={"case_tag": CaseTag.STRAIGHT_LINE.value},
    )


def _family_member(h: float, eps: float, theta1: float, theta4: float,
                   tol: Tolerances):
    """Shortest valid family member at heading theta1 on branch theta4.

    For a goal at height h on the start axis with direction eps * v0, fixing
    (theta1, theta4) reduces the surviving equations to a single phase
    equation a*c2 + b*s2 = c plus closed forms for d3 and theta5.
    """
    sigma4 = math.cos(theta4)
    a = sigma4 * eps + 1.0
    b = -h
    c = -(sigma4 + 1.0)
    rad = math.hypot(a, b)
    if rad < 1e-14:
        if abs(c) > 1e-9:
            return None
        theta2_choices = [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi]
    else:
        arg = c / rad
        if abs(arg) > 1.0 + 1e-12:
            return None
        arg = max(-1.0, min(1.0, arg))
        base = math.atan2(b, a)
        off = math.acos(arg)
        theta2_choices = [base + off, base - off]
    goal = GoalPose(np.array([0.0, 0.0, h]), np.array([0.0, 0.0, eps]), 1.0)
    best = None
    for theta2 in theta2_choices:
        s2, c2 = math.sin(theta2), math.cos(theta2)
        d3 = -s2 - h * c2 - sigma4 * eps * s2
        if d3 < -D3_EPS:
            continue
        d3 = max(d3, 0.0)
        s5 = sigma4 * eps * s2
        c5 = eps * c2
        if abs(s5 * s5 + c5 * c5 - 1.0) > tol.unit_circle:
            continue
        theta5 = math.atan2(s5, c5)
        path = dh_to_dubins(JointValues(theta1, theta2, d3, theta4, theta5), tol)
        if fk_residual(path, goal) < tol.fk_residual:
            if best is None or path_length(path) < path_length(best):
                best = path
    return best


def solve_family(goal: GoalPose, theta1_samples, tol: Tolerances = DEFAULT_TOL) -> SolutionSet:
    """Infinite family of paths for a collinear goal.

    Branch selection: aligned direction with ||x_g|| > 2 keeps both theta4
    branches {0, pi}; antialigned with ||x_g|| <= 2 keeps theta4 = 0 only;
    every other regime tries both branches and keeps those that validate.
    Representative paths are emitted per (theta4 branch, theta1 sample) in
    order, without deduplication, after the straight member when one exists.
    """
    h = float(goal.x_g[2])
    eps = 1.0 if goal.v_g[2] > 0 else -1.0
    nx = abs(h)

    def viable(t4):
        return any(
            _family_member(h, eps, t1, t4, tol) is not None
            for t1 in theta1_samples
        )

    if eps > 0 and nx > 2.0:
        preferred = [0.0, math.pi]
    elif eps < 0 and nx <= 2.0:
        preferred = [0.0]
    else:
        preferred = [0.0, math.pi]
    branches = [t4 for t4 in preferred if viable(t4)]
    if not branches:
        # The regime rule can miss (e.g. a close antialigned goal is only
        # reachable on the reversed branch); fall back to trying both.
        branches = [t4 for t4 in (0.0, math.pi) if viable(t4)]
    if not branches:
        raise NoValidBranch("no theta4 branch yields a valid family member")

    def generator(theta1: float, theta4: float):
        return _family_member(h, eps, theta1, theta4, tol)

    reps = []
    for t4 in branches:
        for t1 in theta1_samples:
            p = generator(t1, t4)
            if p is not None:
                reps.append(p)
    if not reps:
        raise NoValidBranch("no valid representative paths")

    straight = None
    if eps > 0 and h > 0:
        straight = CscPath(0.0, 0.0, h, 0.0, 0.0)
        if fk_residual(straight, goal) >= tol.fk_residual:
            straight = None

    paths = ((straight,) if straight is not None else tuple()) + tuple(reps)
    return SolutionSet(
        kind=SolutionKind.INFINITE_FAMILY,
        paths=paths,
        family=FamilyDescriptor(theta4_choices=tuple(branches), generator=generator),
        diagnostics={
            "case_tag": CaseTag.INFINITE_FAMILY.value,
            "straight_prepended": straight is not None,
            "n_representatives": len(reps),
        },
    )


def _planar_d3_poly(u, w, X, Z, A, B, sigma4, span):
    """Interpolated defect of the squared-position equation along d3.

    (c2, s2)(d3) = u + w * d3 parametrizes the phase; substituting into the
    squared-position row gives a low-order polynomial whose real roots are
    the d3 candidates.
    """
    def defect(d3):
        c2 = u[0] + w[0] * d3
        s2 = u[1] + w[1] * d3
        s5 = sigma4 * (A * c2 + B * s2)
        c5 = B * c2 - A * s2
        lhs = (sigma4 * (1.0 + c5) + 1.0) ** 2 + (d3 + s5) ** 2
        rhs = (X * c2 + Z * s2 - c2) ** 2 + (s2 * (1.0 - X) + Z * c2) ** 2
        return lhs - rhs

    nodes = span * np.cos((2.0 * np.arange(5) + 1.0) * math.pi / 10.0)
    poly = interpolate([(x, defect(x)) for x in nodes])
    coeffs = np.asarray(poly.coefficients)
    m = np.abs(coeffs).max()
    if m < 1e-12:
        # Degenerate combination: fall back to the unit-circle identity,
        # |u + w d3|^2 = 1, which is quadratic in d3.
        coeffs = np.array(
            [u[0] ** 2 + u[1] ** 2 - 1.0,
             2.0 * (u[0] * w[0] + u[1] * w[1]),
             w[0] ** 2 + w[1] ** 2]
        )
        m = np.abs(coeffs).max()
        if m < 1e-12:
            return None
    coeffs = coeffs.copy()
    coeffs[np.abs(coeffs) < 1e-10 * m] = 0.0
    poly = UniPoly(tuple(coeffs))
    if poly.is_zero() or poly.degree == 0:
        return None
    return poly


def solve_planar(goal: GoalPose, tol: Tolerances = DEFAULT_TOL) -> SolutionSet:
    """All paths for a coplanar goal.

    The first plane angle is the heading of the x_g projection (or of the
    v_g projection when x_g sits on the start axis); candidates enumerate
    the four (theta1, theta4-branch) combinations, solve the reduced system
    for (theta2, theta5) as linear functions of d3, and take nonnegative
    real roots of the resulting d3-polynomial.
    """
    x = goal.x_g
    v = goal.v_g
    rxy = math.hypot(x[0], x[1])
    if rxy > 1e-12:
        heading = math.atan2(x[1], x[0])
    elif math.hypot(v[0], v[1]) > 1e-12:
        heading = math.atan2(v[1], v[0])
    else:
        heading = 0.0
    Z = float(x[2])
    span = 2.0 * (2.0 + float(np.linalg.norm(x)))

    candidates = []
    combos_seen = []
    for theta1 in (heading, heading + math.pi):
        c1, s1 = math.cos(theta1), math.sin(theta1)
        X = float(x[0] * c1 + x[1] * s1)
        A = float(v[0] * c1 + v[1] * s1)
        B = float(v[2])
        for sigma4 in (1.0, -1.0):
            theta4 = 0.0 if sigma4 > 0 else math.pi
            M = np.array(
                [
                    [X - 1.0 - sigma4 * B, Z + sigma4 * A],
                    [sigma4 * A + Z, sigma4 * B + 1.0 - X],
                ]
            )
            det = float(np.linalg.det(M))
            if abs(det) < 1e-12:
                combos_seen.append((theta1, theta4, "degenerate_2x2"))
                continue
            Minv = np.linalg.inv(M)
            u = Minv @ np.array([sigma4 + 1.0, 0.0])
            w = Minv @ np.array([0.0, -1.0])
            poly = _planar_d3_poly(u, w, X, Z, A, B, sigma4, span)
            if poly is None:
                combos_seen.append((theta1, theta4, "degenerate_poly"))
                continue
            roots = []
            try:
                roots = real_roots(poly)
            except Exception:
                pass
            combos_seen.append((theta1, theta4, [r for r in roots if r >= -D3_EPS]))
            for d3 in roots:
                if d3 < -D3_EPS:
                    continue
                d3 = max(d3, 0.0)
                c2 = float(u[0] + w[0] * d3)
                s2 = float(u[1] + w[1] * d3)
                if abs(c2 * c2 + s2 * s2 - 1.0) > tol.unit_circle:
                    continue
                theta2 = math.atan2(s2, c2)
                s5 = sigma4 * (A * c2 + B * s2)
                c5 = B * c2 - A * s2
                theta5 = math.atan2(s5, c5)
                candidates.append(JointValues(theta1, theta2, d3, theta4, theta5))

    result = assemble(goal, candidates, tol)
    diag = dict(result.diagnostics)
    diag["case_tag"] = CaseTag.PLANAR.value
    diag["combos"] = combos_seen
    return SolutionSet(
        kind=result.kind,
        paths=result.paths,
        diagnostics=diag,
        wall_ms=result.wall_ms,
    )


def _polish_against(path: CscPath, goal: GoalPose, tol: Tolerances):
    """Local refinement of a candidate path against the original goal."""

    def residual(u):
        p = CscPath(u[0], u[1], max(u[2], 0.0), u[3], u[4])
        from .kinematics import fk_dubins

        fk = fk_dubins(p, 1.0)
        return np.concatenate([fk.x_g - goal.x_g, fk.v_g - goal.v_g])

    u0 = np.array(path.as_tuple())
    try:
        fit = least_squares(residual, u0, method="lm", xtol=1e-15, ftol=1e-15)
    except Exception:
        return None
    u = fit.x
    if u[2] < -D3_EPS:
        return None
    refined = canonicalize(
        CscPath(u[0], u[1], max(u[2], 0.0), u[3], u[4]), tol
    )
    if fk_residual(refined, goal) < tol.fk_residual:
        return refined
    return None


def solve_unknown_singular(goal: GoalPose, tol: Tolerances = DEFAULT_TOL) -> SolutionSet:
    """Perturbation fallback for degenerate goals the handlers missed.

    Nudges both the goal position and direction off the singular manifold
    (position or direction alone cannot leave the coplanar manifold when
    the other is axis-aligned), solves the general pipeline, then polishes
    each candidate against the original goal and keeps validated survivors.
    """
    from .solver import general_pipeline  # deferred to avoid an import cycle

    x = goal.x_g
    directions = [
        (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])),
        (np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0])),
        (np.array([1.0, 1.0, 0.0]), np.array([1.0, -1.0, 1.0]) / math.sqrt(3.0)),
    ]
    survivors = []
    attempts = []
    for delta in (1e-6, 1e-5, 1e-4):
        for k, (dx, dv) in enumerate(directions):
            try:
                perturbed = GoalPose(x + delta * dx, goal.v_g + delta * dv, 1.0)
                part = general_pipeline(perturbed, tol)
            except Exception as exc:
                attempts.append((delta, k, f"error: {type(exc).__name__}"))
                continue
            attempts.append((delta, k, len(part.paths)))
            for p in part.paths:
                refined = _polish_against(p, goal, tol)
                if refined is None:
                    continue
                if not any(paths_duplicate(refined, q, tol) for q in survivors):
                    survivors.append(refined)
    survivors.sort(key=path_sort_key)
    kind = SolutionKind.DISCRETE if survivors else SolutionKind.SINGULAR_UNHANDLED
    return SolutionSet(
        kind=kind,
        paths=tuple(survivors),
        diagnostics={
            "case_tag": CaseTag.UNKNOWN_SINGULAR.value,
            "perturbation_fallback": True,
            "attempts": attempts,
        },
    )
