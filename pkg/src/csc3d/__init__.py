"""csc3d: all valid circle-segment-circle paths in 3D with bounded curvature.

The solver finds every path of the form arc - straight segment - arc (both
arcs at the minimum turning radius) from the canonical start pose (origin,
heading +z) to an arbitrary goal pose, by reducing the problem to the
inverse kinematics of a five-joint serial chain and eliminating down to a
single polynomial condition.  Singular goal families (straight-line,
collinear infinite families, coplanar goals) are detected and handled in
closed form.
"""

from .core_types import (
    CaseTag,
    CscPath,
    Csc3dError,
    FamilyDescriptor,
    GoalPose,
    InvalidGoal,
    JointValues,
    NoSolution,
    SolutionKind,
    SolutionSet,
    Tolerances,
    canonicalize,
)
from .kinematics import (
    fk_dubins,
    fk_residual,
    path_length,
    scale_goal,
    unscale_path,
)
from .solver import shortest, solve

__all__ = [
    "CaseTag",
    "CscPath",
    "Csc3dError",
    "FamilyDescriptor",
    "GoalPose",
    "InvalidGoal",
    "JointValues",
    "NoSolution",
    "SolutionKind",
    "SolutionSet",
    "Tolerances",
    "canonicalize",
    "fk_dubins",
    "fk_residual",
    "path_length",
    "scale_goal",
    "unscale_path",
    "shortest",
    "solve",
]

__version__ = "0.1.0"
