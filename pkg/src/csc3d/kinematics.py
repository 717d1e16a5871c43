"""Forward kinematics, joint/path conversions, residuals, and scaling.

Two forward-kinematics models are provided: the closed-form expressions
(:func:`fk_dubins`) used throughout the solver, and the joint-chain product
of frame transforms (:func:`fk_chain`) kept as an independent derivation for
cross-validation.
"""

from __future__ import annotations

import math

import numpy as np

from .core_types import (
    CscPath,
    GoalPose,
    JointValues,
    NonFinite,
    Tolerances,
    DEFAULT_TOL,
    canonicalize,
    wrap_signed,
)

__all__ = [
    "fk_dubins",
    "dh_transform",
    "fk_chain",
    "dubins_to_dh",
    "dh_to_dubins",
    "fk_residual",
    "path_length",
    "scale_goal",
    "unscale_path",
]


def fk_dubins(path: CscPath, r: float = 1.0) -> GoalPose:
    """Closed-form endpoint pose of a path with turning radius ``r``."""
    vals = path.as_tuple()
    if not all(math.isfinite(v) for v in vals) or not math.isfinite(r):
        raise NonFinite(f"non-finite fk input {vals}, r={r}")
    p1, ps1, d, p2, ps2 = vals
    cps1, sps1 = math.cos(ps1), math.sin(ps1)
    cps2, sps2 = math.cos(ps2), math.sin(ps2)
    cp1, sp1 = math.cos(p1), math.sin(p1)
    cp2, sp2 = math.cos(p2), math.sin(p2)
    vg = np.array(
        [
            sps2 * (cps1 * cp1 * cp2 - sp1 * sp2) + sps1 * cps2 * cp1,
            sps2 * (cps1 * sp1 * cp2 + cp1 * sp2) + sps1 * cps2 * sp1,
            cps1 * cps2 - sps1 * sps2 * cp2,
        ]
    )
    common = sps1 * (d + r * sps2) + r * cps1 * (cp2 * (1 - cps2) - 1) + r
    xg = np.array(
        [
            cp1 * common + r * (cps2 - 1) * sp1 * sp2,
            sp1 * common - r * (cps2 - 1) * cp1 * sp2,
            cps1 * (d + r * sps2) + r * sps1 * (cp2 * (cps2 - 1) + 1),
        ]
    )
    return GoalPose(xg, vg, r)


# DH rows (link length, twist, offset): joints 1, 2, 4, 5 are revolute with
# unit link length and +pi/2 twist; joint 3 is prismatic along its axis.
_DH_ROWS = {
    1: (1.0, math.pi / 2),
    2: (1.0, math.pi / 2),
    4: (1.0, math.pi / 2),
    5: (1.0, math.pi / 2),
}


def dh_transform(joint_index: int, value: float) -> np.ndarray:
    """The 4x4 frame transform of a single joint at the given joint value."""
    if joint_index not in (1, 2, 3, 4, 5):
        raise ValueError(f"joint_index must be in 1..5, got {joint_index}")
    if not math.isfinite(value):
        raise NonFinite(f"non-finite joint value {value}")
    if joint_index == 3:
        a, alpha, dd, theta = 0.0, 0.0, value, 0.0
    else:
        a, alpha = _DH_ROWS[joint_index]
        dd, theta = 0.0, value
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array(
        [
            [ct, -st * ca, st * sa, a * ct],
            [st, ct * ca, -ct * sa, a * st],
            [0.0, sa, ca, dd],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )


def fk_chain(j: JointValues) -> GoalPose:
    """Endpoint pose from the product of the five joint transforms."""
    T = dh_transform(1, j.theta1)
    for idx, val in ((2, j.theta2), (3, j.d3), (4, j.theta4), (5, j.theta5)):
        T = T @ dh_transform(idx, val)
    return GoalPose(T[:3, 3], T[:3, 2], 1.0)


def dubins_to_dh(path: CscPath) -> JointValues:
    """Affine map from path parameters to joint values."""
    return JointValues(
        theta1=path.phi1,
        theta2=math.pi - path.psi1,
        d3=path.d,
        theta4=path.phi2 + math.pi,
        theta5=math.pi - path.psi2,
    )


def dh_to_dubins(j: JointValues, tol: Tolerances = DEFAULT_TOL) -> CscPath:
    """Inverse of :func:`dubins_to_dh`, canonicalized."""
    raw = CscPath(
        phi1=j.theta1,
        psi1=math.pi - j.theta2,
        d=j.d3,
        phi2=j.theta4 - math.pi,
        psi2=math.pi - j.theta5,
    )
    return canonicalize(raw, tol)


def fk_residual(path: CscPath, goal: GoalPose) -> float:
    """max(relative position error, direction error) of a candidate path."""
    fk = fk_dubins(path, goal.r)
    ex = np.linalg.norm(fk.x_g - goal.x_g) / max(1.0, float(np.linalg.norm(goal.x_g)))
    ev = np.linalg.norm(fk.v_g - goal.v_g)
    return float(max(ex, ev))


def path_length(path: CscPath, r: float = 1.0) -> float:
    """Total length: r * (psi1 + psi2) + d."""
    return r * (path.psi1 + path.psi2) + path.d


def scale_goal(goal: GoalPose) -> GoalPose:
    """Rescale a goal to unit turning radius (positions divided by r)."""
    return GoalPose(goal.x_g / goal.r, goal.v_g, 1.0)


def unscale_path(path: CscPath, r: float) -> CscPath:
    """Map a unit-radius solution back to radius ``r`` (d scales, angles fixed)."""
    return CscPath(path.phi1, path.psi1, path.d * r, path.phi2, path.psi2)


def joints_from_raw(t1: float, t2: float, d3: float, t4: float, t5: float) -> JointValues:
    """Build joint values with angles wrapped to (-pi, pi]."""
    return JointValues(wrap_signed(t1), wrap_signed(t2), d3, wrap_signed(t4), wrap_signed(t5))
