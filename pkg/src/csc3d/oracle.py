"""Independent numerical cross-checks: a brute-force solver and geometric FK.

Nothing here is used on the production solve path; the brute-force solver
seeds local refinement from a dense grid and is only as complete as its
grid, while :func:`fk_geometric` rebuilds the path by composing rigid
motions (arc, segment, arc) as an implementation-independent check of the
closed-form forward kinematics.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import least_squares

from .core_types import CscPath, DEFAULT_TOL, GoalPose, canonicalize, path_sort_key, paths_duplicate
from .kinematics import fk_dubins, fk_residual

__all__ = ["numeric_solve", "fk_geometric"]


def _grid_fields(phi1, psi1, phi2, psi2, xg, vg):
    """Vectorized endpoint error over an angle grid with d eliminated.

    The endpoint is affine in the segment length d along the post-arc
    heading u, so the best d per grid point is the clipped projection of
    the residual onto u.
    """
    cps1, sps1 = np.cos(psi1), np.sin(psi1)
    cps2, sps2 = np.cos(psi2), np.sin(psi2)
    cp1, sp1 = np.cos(phi1), np.sin(phi1)
    cp2, sp2 = np.cos(phi2), np.sin(phi2)
    v = np.stack(
        np.broadcast_arrays(
            sps2 * (cps1 * cp1 * cp2 - sp1 * sp2) + sps1 * cps2 * cp1,
            sps2 * (cps1 * sp1 * cp2 + cp1 * sp2) + sps1 * cps2 * sp1,
            cps1 * cps2 - sps1 * sps2 * cp2,
        )
    )
    common0 = sps1 * sps2 + cps1 * (cp2 * (1 - cps2) - 1) + 1.0
    x0 = np.stack(
        np.broadcast_arrays(
            cp1 * common0 + (cps2 - 1) * sp1 * sp2,
            sp1 * common0 - (cps2 - 1) * cp1 * sp2,
            cps1 * sps2 + sps1 * (cp2 * (cps2 - 1) + 1),
        )
    )
    u = np.stack(np.broadcast_arrays(cp1 * sps1, sp1 * sps1, cps1 + 0.0 * cp1))
    diff = xg.reshape(3, 1, 1, 1, 1) - x0
    d = np.clip((u * diff).sum(axis=0), 0.0, None)
    x = x0 + d * u
    ex = x - xg.reshape(3, 1, 1, 1, 1)
    ev = v - vg.reshape(3, 1, 1, 1, 1)
    err = (ex * ex).sum(axis=0) + (ev * ev).sum(axis=0)
    return err, d


def numeric_solve(goal: GoalPose, grid_density: int, refine_cap: int = 400):
    """Brute-force path search for a unit-radius goal.

    Evaluates the squared endpoint error on a grid_density^4 angle grid
    (segment length solved in closed form per point), locates grid-local
    minima on the 4-torus, refines each by least squares, and returns
    deduplicated paths with residual below 1e-8.
    """
    xg = np.asarray(goal.x_g, float)
    vg = np.asarray(goal.v_g, float)
    n = int(grid_density)
    phis = np.linspace(-math.pi, math.pi, n, endpoint=False)
    psis = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False) + math.pi / n
    g = np.meshgrid(phis, psis, phis, psis, indexing="ij", sparse=True)
    err, dgrid = _grid_fields(g[0], g[1], g[2], g[3], xg, vg)

    is_min = np.ones_like(err, dtype=bool)
    for axis in range(4):
        is_min &= err <= np.roll(err, 1, axis=axis)
        is_min &= err <= np.roll(err, -1, axis=axis)
    idx = np.argwhere(is_min)
    if len(idx) > refine_cap:
        order = np.argsort(err[is_min])
        idx = idx[order[:refine_cap]]
    # Local-minimum detection alone can lose a basin whose cell refines
    # elsewhere; also seed from the globally best grid points.
    extra = np.argsort(err, axis=None)[: max(refine_cap // 4, 50)]
    idx = np.unique(
        np.concatenate([idx, np.stack(np.unravel_index(extra, err.shape), axis=1)]),
        axis=0,
    )

    def residual(u):
        p = CscPath(u[0], u[1], max(u[2], 0.0), u[3], u[4])
        fk = fk_dubins(p, 1.0)
        return np.concatenate([fk.x_g - xg, fk.v_g - vg])

    found = []
    for i, j, k, l in idx:
        u0 = np.array([phis[i], psis[j], dgrid[i, j, k, l], phis[k], psis[l]])
        try:
            fit = least_squares(residual, u0, method="lm", xtol=1e-14, ftol=1e-14)
        except Exception:
            continue
        u = fit.x
        if u[2] < -1e-9:
            continue
        path = canonicalize(CscPath(u[0], u[1], max(u[2], 0.0), u[3], u[4]))
        if fk_residual(path, goal) >= 1e-8:
            continue
        if not any(paths_duplicate(path, q) for q in found):
            found.append(path)
    found.sort(key=path_sort_key)
    return found


def _rot_y(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_z(t: float) -> np.ndarray:
    c, s = math.cos(t), math.sin(t)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _hom(R: np.ndarray, p: np.ndarray) -> np.ndarray:
    T = np.eye(4)
    T[:3, :3] = R
    T[:3, 3] = p
    return T


def _arc_transform(psi: float, r: float) -> np.ndarray:
    """Rigid motion of an arc that turns the +z heading toward local +x."""
    return _hom(_rot_y(psi), np.array([r * (1.0 - math.cos(psi)), 0.0, r * math.sin(psi)]))


def fk_geometric(path: CscPath, r: float, samples: int):
    """Centerline points of a path by composing rigid motions.

    Each arc lives in the current frame's x-z plane after yawing by its
    plane angle; the straight segment translates along the current heading.
    Returns ``samples`` points per segment (arcs and the segment each get
    an equal share of the sample budget, endpoints included once).
    """
    samples = max(int(samples), 2)
    segs = [
        ("yaw", path.phi1),
        ("arc", path.psi1),
        ("line", path.d),
        ("yaw", path.phi2),
        ("arc", path.psi2),
    ]
    pts = [np.zeros(3)]
    T = np.eye(4)
    per = max(samples // 3, 1)
    for kind, val in segs:
        if kind == "yaw":
            T = T @ _hom(_rot_z(val), np.zeros(3))
            continue
        for t in np.linspace(0.0, val, per + 1)[1:]:
            if kind == "arc":
                local = np.array([r * (1.0 - math.cos(t)), 0.0, r * math.sin(t), 1.0])
            else:
                local = np.array([0.0, 0.0, t, 1.0])
            pts.append((T @ local)[:3])
        if kind == "arc":
            T = T @ _arc_transform(val, r)
        else:
            T = T @ _hom(np.eye(3), np.array([0.0, 0.0, val]))
    out = [pts[0]]
    for p in pts[1:]:
        if not np.allclose(p, out[-1], atol=1e-15):
            out.append(p)
    return out
