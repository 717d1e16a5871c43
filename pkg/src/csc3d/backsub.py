"""Back-substitution: from x4 roots to full paths.

Each candidate root fixes theta4; the null space of the squared-up 12x12
system at that root yields (d3, theta5); the original 14-equation system
then determines (theta1, theta2) by least squares.  Every accepted tuple is
converted to a path and validated against forward kinematics.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq

from .core_types import (
    CscPath,
    DEFAULT_TOL,
    EmptyNullSpace,
    GoalPose,
    InconsistentNullVector,
    InconsistentSolution,
    JointValues,
    SolutionKind,
    SolutionSet,
    Tolerances,
    canonicalize,
    path_sort_key,
    paths_duplicate,
)
from .elimination import (
    PQSystem,
    Sigma12,
    SLOT_C5,
    SLOT_D3,
    SLOT_D3C5,
    SLOT_D3S5,
    SLOT_ONE,
    SLOT_S5,
)
from .kinematics import dh_to_dubins, fk_residual

__all__ = ["theta4_from_root", "solve_d3_theta5", "solve_theta12", "assemble"]

# Negative-extension rejection threshold; magnitudes at or below it are
# numerical zeros and snap to an exactly zero straight segment.
D3_EPS = 1e-9


def theta4_from_root(x4: float) -> float:
    """theta4 = 2*atan(x4); the infinite root maps to the theta4 = pi branch."""
    if math.isinf(x4):
        return math.pi
    return 2.0 * math.atan(x4)


def _vector_candidates(w: np.ndarray, tol: Tolerances, product_tol: float):
    """Check one constant-normalized null vector for internal consistency."""
    d3 = float(w[SLOT_D3])
    s5 = float(w[SLOT_S5])
    c5 = float(w[SLOT_C5])
    if abs(s5 * s5 + c5 * c5 - 1.0) > tol.unit_circle:
        return None
    if abs(w[SLOT_D3S5] - d3 * s5) > product_tol * (1.0 + abs(d3)):
        return None
    if abs(w[SLOT_D3C5] - d3 * c5) > product_tol * (1.0 + abs(d3)):
        return None
    return (d3, math.atan2(s5, c5))


def solve_d3_theta5(
    s12: Sigma12,
    x4: float,
    tol: Tolerances = DEFAULT_TOL,
    null_tol: float = 1e-8,
    loose_null_tol: float = 1e-5,
    product_tol: float = 1e-6,
):
    """(d3, theta5) candidates from the null space of the system at x4.

    Null vectors are normalized so the constant slot equals one; candidates
    must satisfy the unit-circle identity for (s5, c5) and the product-slot
    consistency d3*s5 / d3*c5 within tolerance.  Raises EmptyNullSpace when
    no null direction exists at the root (spurious root) and
    InconsistentNullVector when null directions exist but none is
    self-consistent.
    """
    if math.isinf(x4):
        M = s12.row_normalized().leading()
    else:
        M = s12.row_normalized().evaluate(x4)
    _, sv, vt = np.linalg.svd(M)
    sv_max = max(float(sv[0]), 1e-300)
    null = [vt[i] for i in range(12) if sv[i] < null_tol * sv_max]
    if not null and sv[-1] < loose_null_tol * sv_max:
        null = [vt[-1]]
    if not null:
        raise EmptyNullSpace(f"no null direction at x4={x4!r}")

    cands = []
    for v in null:
        if abs(v[SLOT_ONE]) < 1e-12:
            continue
        c = _vector_candidates(v / v[SLOT_ONE], tol, product_tol)
        if c is not None:
            cands.append(c)

    if len(null) >= 2 and not cands:
        # Degenerate root: search the pencil of the two smallest-singular
        # directions for a combination that restores product consistency.
        v1, v2 = null[-2], null[-1]

        def mix(t):
            w = math.cos(t) * v1 + math.sin(t) * v2
            if abs(w[SLOT_ONE]) < 1e-12:
                return None
            return w / w[SLOT_ONE]

        def defect(t):
            w = mix(t)
            if w is None:
                return math.nan
            return float(w[SLOT_D3S5] - w[SLOT_D3]* w[SLOT_S5])

        ts = np.linspace(-math.pi / 2, math.pi / 2, 41)
        vals = [defect(t) for t in ts]
        for k in range(len(ts) - 1):
            a, b = vals[k], vals[k + 1]
            if math.isnan(a) or math.isnan(b) or a * b > 0:
                continue
            t0 = brentq(defect, ts[k], ts[k + 1], xtol=1e-14)
            w = mix(t0)
            if w is None:
                continue
            c = _vector_candidates(w, tol, product_tol)
            if c is not None:
                cands.append(c)

    if not cands:
        raise InconsistentNullVector(f"no self-consistent null vector at x4={x4!r}")
    return cands


def solve_theta12(
    sys: PQSystem,
    d3: float,
    theta4: float,
    theta5: float,
    tol: Tolerances = DEFAULT_TOL,
    product_tol: float = 1e-6,
):
    """(theta1, theta2) from the full 14-row system by least squares.

    Accepts only when the residual, the unit-circle identities, and the
    product slots (s1*s2 etc. versus the singleton slots) are all
    consistent; raises InconsistentSolution otherwise.
    """
    s5, c5 = math.sin(theta5), math.cos(theta5)
    basis = np.array(
        [d3 * d3 * s5, d3 * d3 * c5, d3 * d3, d3 * s5, d3 * c5, d3, s5, c5, 1.0]
    )
    lhs = sys.lhs_matrix(theta4) @ basis
    sol, *_ = np.linalg.lstsq(sys.Q, lhs, rcond=None)
    resid = float(np.linalg.norm(sys.Q @ sol - lhs))
    if resid > 1e-6 * (1.0 + float(np.linalg.norm(lhs))):
        raise InconsistentSolution(f"least-squares residual {resid:.3e}")
    s1, c1, s2, c2 = (float(v) for v in sol[4:8])
    if abs(s1 * s1 + c1 * c1 - 1.0) > tol.unit_circle:
        raise InconsistentSolution("unit-circle failure for (s1, c1)")
    if abs(s2 * s2 + c2 * c2 - 1.0) > tol.unit_circle:
        raise InconsistentSolution("unit-circle failure for (s2, c2)")
    products = ((0, s1 * s2), (1, s1 * c2), (2, c1 * s2), (3, c1 * c2))
    for slot, value in products:
        if abs(float(sol[slot]) - value) > product_tol:
            raise InconsistentSolution("product-slot mismatch")
    return math.atan2(s1, c1), math.atan2(s2, c2)


def assemble(
    goal: GoalPose,
    candidates,
    tol: Tolerances = DEFAULT_TOL,
) -> SolutionSet:
    """Filter, validate, dedup, and order candidate joint tuples.

    ``goal`` must be unit-radius.  Candidates with d3 < -D3_EPS are
    rejected; |d3| <= D3_EPS snaps to an exactly zero straight segment so
    degenerate-segment solutions survive round-trips bit-exactly.
    """
    candidates = list(candidates)
    rejections = []
    accepted = []
    for j in candidates:
        if not isinstance(j, JointValues):
            j = JointValues(*j)
        d3 = j.d3
        if d3 < -D3_EPS:
            rejections.append(("assemble", "negative_d3", d3))
            continue
        if abs(d3) <= D3_EPS:
            d3 = 0.0
        path = dh_to_dubins(
            JointValues(j.theta1, j.theta2, d3, j.theta4, j.theta5), tol
        )
        path = canonicalize(path, tol)
        res = fk_residual(path, goal)
        if res >= tol.fk_residual:
            rejections.append(("assemble", "fk_residual", res))
            continue
        accepted.append((path, res))

    unique = []
    for path, res in accepted:
        if any(paths_duplicate(path, q, tol) for q, _ in unique):
            continue
        unique.append((path, res))
    unique.sort(key=lambda pr: path_sort_key(pr[0]))

    return SolutionSet(
        kind=SolutionKind.DISCRETE,
        paths=tuple(p for p, _ in unique),
        diagnostics={
            "residuals": [r for _, r in unique],
            "rejections": rejections,
            "n_candidates": len(candidates),
        },
    )
