"""Shared domain types, tolerances, and canonical ranges.

All angles are radians.  Canonical ranges: arc angles psi1, psi2 live in
[0, 2*pi); plane angles phi1, phi2 live in (-pi, pi].  All internal
computation assumes unit turning radius; general radii are handled by
scaling the goal (see :mod:`csc3d.kinematics`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class Csc3dError(Exception):
    """Base class for all library errors."""


class NonFinite(Csc3dError):
    """An input contained NaN or infinity."""


class InvalidGoal(Csc3dError):
    """Goal pose is unusable: non-finite, zero direction, or r <= 0."""


class SingularQ(Csc3dError):
    """No well-conditioned 8-row subset of the right-side system exists."""


class IdenticallyZeroDeterminant(Csc3dError):
    """The dialytic determinant vanishes identically (singular goal)."""


class ZeroPolynomial(Csc3dError):
    """Root finding requested on the zero polynomial."""


class DuplicateNodes(Csc3dError):
    """Interpolation nodes are not distinct."""


class EmptyNullSpace(Csc3dError):
    """No null vector at a candidate root (spurious root)."""


class InconsistentNullVector(Csc3dError):
    """Null vector fails the internal product/unit-circle consistency."""


class InconsistentSolution(Csc3dError):
    """Back-substituted (theta1, theta2) fail the consistency checks."""


class NoValidBranch(Csc3dError):
    """No theta4 branch of an infinite-family goal yields a valid path."""


class NoSolution(Csc3dError):
    """An empty solution set where at least one path was required."""


# ---------------------------------------------------------------------------
# Angle helpers
# ---------------------------------------------------------------------------

def wrap_signed(a: float) -> float:
    """Wrap an angle into (-pi, pi]; exact no-op when already in range."""
    if -math.pi < a <= math.pi:
        return a
    w = -((-a + math.pi) % TWO_PI - math.pi)
    return math.pi if w == -math.pi else w


def wrap_positive(a: float) -> float:
    """Wrap an angle into [0, 2*pi)."""
    w = a % TWO_PI
    # The modulo of a tiny negative angle can round up to exactly 2*pi.
    return 0.0 if w >= TWO_PI else w


def angle_diff(a: float, b: float) -> float:
    """Absolute wrapped difference between two angles."""
    return abs(wrap_signed(a - b))


# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Tolerances:
    """Numeric thresholds used across the pipeline (all positive)."""

    fk_residual: float = 1e-6
    singular_det: float = 1e-9
    unit_circle: float = 1e-6
    dedup_angle: float = 1e-6
    dedup_length: float = 1e-6
    psi_eps: float = 1e-9

    def __post_init__(self) -> None:
        for name in (
            "fk_residual",
            "singular_det",
            "unit_circle",
            "dedup_angle",
            "dedup_length",
            "psi_eps",
        ):
            if not (getattr(self, name) > 0):
                raise ValueError(f"tolerance {name} must be positive")


DEFAULT_TOL = Tolerances()


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

def _as_readonly(v) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(3)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class GoalPose:
    """Goal position ``x_g``, unit goal direction ``v_g``, turning radius ``r``."""

    x_g: np.ndarray
    v_g: np.ndarray
    r: float = 1.0

    def __post_init__(self) -> None:
        x = np.asarray(self.x_g, dtype=float).reshape(-1)
        v = np.asarray(self.v_g, dtype=float).reshape(-1)
        if x.shape != (3,) or v.shape != (3,):
            raise InvalidGoal("x_g and v_g must be 3-vectors")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise InvalidGoal("non-finite goal")
        n = np.linalg.norm(v)
        if n < 1e-12:
            raise InvalidGoal("zero goal direction")
        if not (float(self.r) > 0 and math.isfinite(float(self.r))):
            raise InvalidGoal("turning radius must be positive and finite")
        object.__setattr__(self, "x_g", _as_readonly(x))
        object.__setattr__(self, "v_g", _as_readonly(v / n))
        object.__setattr__(self, "r", float(self.r))


@dataclass(frozen=True)
class CscPath:
    """A circle-segment-circle path: (phi1, psi1, d, phi2, psi2)."""

    phi1: float
    psi1: float
    d: float
    phi2: float
    psi2: float

    def as_tuple(self) -> tuple:
        return (self.phi1, self.psi1, self.d, self.phi2, self.psi2)


@dataclass(frozen=True)
class JointValues:
    """Joint-space view of a path: (theta1, theta2, d3, theta4, theta5)."""

    theta1: float
    theta2: float
    d3: float
    theta4: float
    theta5: float

    def as_tuple(self) -> tuple:
        return (self.theta1, self.theta2, self.d3, self.theta4, self.theta5)


class SolutionKind(enum.Enum):
    DISCRETE = "discrete"
    STRAIGHT_LINE = "straight_line"
    INFINITE_FAMILY = "infinite_family"
    SINGULAR_UNHANDLED = "singular_unhandled"


class CaseTag(enum.Enum):
    GENERAL = "general"
    STRAIGHT_LINE = "straight_line"
    INFINITE_FAMILY = "infinite_family"
    PLANAR = "planar"
    UNKNOWN_SINGULAR = "unknown_singular"


@dataclass(frozen=True)
class FamilyDescriptor:
    """One-parameter family of valid paths for collinear goals.

    ``generator(theta1, theta4)`` returns the family member for a given
    heading ``theta1`` and branch ``theta4``, or ``None`` when that branch
    produces no valid path at that heading.
    """

    theta4_choices: tuple
    generator: Callable[[float, float], Optional[CscPath]]


@dataclass(frozen=True)
class SolutionSet:
    kind: SolutionKind
    paths: tuple = ()
    family: Optional[FamilyDescriptor] = None
    diagnostics: dict = field(default_factory=dict)
    wall_ms: float = 0.0


# ---------------------------------------------------------------------------
# Canonicalization, ordering, dedup
# ---------------------------------------------------------------------------

def canonicalize(path: CscPath, tol: Tolerances = DEFAULT_TOL) -> CscPath:
    """Wrap a path into canonical ranges.

    psi angles are wrapped to [0, 2*pi), phi angles to (-pi, pi]; when an
    arc is degenerate (psi < psi_eps) its plane angle carries no geometric
    information and is zeroed.
    """
    vals = path.as_tuple()
    if not all(math.isfinite(v) for v in vals):
        raise NonFinite(f"non-finite path {vals}")
    phi1, psi1, d, phi2, psi2 = vals
    psi1 = wrap_positive(psi1)
    psi2 = wrap_positive(psi2)
    phi1 = 0.0 if psi1 < tol.psi_eps else wrap_signed(phi1)
    phi2 = 0.0 if psi2 < tol.psi_eps else wrap_signed(phi2)
    if psi1 < tol.psi_eps:
        psi1 = 0.0
    if psi2 < tol.psi_eps:
        psi2 = 0.0
    return CscPath(phi1, psi1, d, phi2, psi2)


def paths_duplicate(a: CscPath, b: CscPath, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Dedup metric: all wrapped angle differences and |delta d| below tolerance."""
    return (
        angle_diff(a.phi1, b.phi1) < tol.dedup_angle
        and angle_diff(a.psi1, b.psi1) < tol.dedup_angle
        and angle_diff(a.phi2, b.phi2) < tol.dedup_angle
        and angle_diff(a.psi2, b.psi2) < tol.dedup_angle
        and abs(a.d - b.d) < tol.dedup_length
    )


def path_sort_key(path: CscPath, r: float = 1.0) -> tuple:
    """Ascending total length with a stable lexicographic tie-break."""
    return (r * (path.psi1 + path.psi2) + path.d,) + path.as_tuple()
