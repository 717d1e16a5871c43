import math

import numpy as np
import pytest

from csc3d.core_types import CscPath, angle_diff
from csc3d.kinematics import fk_dubins


def random_canonical_path(rng, psi_min=1e-3, d_min=1e-3, d_max=5.0):
    """A random path with non-degenerate arcs, in canonical ranges."""
    return CscPath(
        phi1=rng.uniform(-math.pi, math.pi),
        psi1=rng.uniform(psi_min, 2.0 * math.pi - psi_min),
        d=rng.uniform(d_min, d_max),
        phi2=rng.uniform(-math.pi, math.pi),
        psi2=rng.uniform(psi_min, 2.0 * math.pi - psi_min),
    )


def random_general_goal(rng, **kw):
    """FK-consistent goal away from the singular manifolds, with its path."""
    while True:
        p = random_canonical_path(rng, **kw)
        g = fk_dubins(p, 1.0)
        if abs(g.x_g[0] * g.v_g[1] - g.x_g[1] * g.v_g[0]) > 1e-3:
            return p, g


def paths_close(a: CscPath, b: CscPath, tol=1e-4):
    return (
        angle_diff(a.phi1, b.phi1) < tol
        and angle_diff(a.psi1, b.psi1) < tol
        and angle_diff(a.phi2, b.phi2) < tol
        and angle_diff(a.psi2, b.psi2) < tol
        and abs(a.d - b.d) < tol
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


# The seven-solution regression goal used throughout the suite.
SEVEN_X = np.array([2.64101, -1.78042, -0.371051])
SEVEN_V = np.array([-0.323321, 0.729589, 0.602631])
