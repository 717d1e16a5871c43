"""Numeric construction of the elimination pipeline for a given goal.

The five joint unknowns are reduced to a single variable x4 = tan(theta4/2)
in four steps:

1.  Fourteen scalar equations whose left sides collect the monomial basis
    [d3^2*s5, d3^2*c5, d3^2, d3*s5, d3*c5, d3, s5, c5, 1] with coefficients
    linear in (s4, c4), and whose right sides collect
    [s1*s2, s1*c2, c1*s2, c1*c2, s1, c1, s2, c2] with goal-dependent
    coefficients (:func:`build_pq`).
2.  Eight rows solve for the right-side monomials; substituting into the
    remaining six rows yields a 6x9 matrix Sigma over the left basis
    (:func:`reduce_to_sigma`).
3.  The tangent half-angle substitution clears trigonometry in theta4, and
    multiplying each row by d3 squares up a 12x12 system over the extended
    basis [d3^3*s5, ..., 1] (:func:`half_angle_and_expand`).
4.  Valid x4 must make the 12x12 matrix singular: its determinant gives the
    characteristic polynomial (:func:`characteristic_polynomial`), and the
    quadratic-eigenvalue form of the same condition enumerates candidate
    roots directly (:func:`candidate_roots`).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._tables import P_TENSOR, q_tables
from .core_types import GoalPose, IdenticallyZeroDeterminant, SingularQ
from .polynomials import UniPoly

__all__ = [
    "PQSystem",
    "SigmaMatrix",
    "Sigma12",
    "TildeSystem",
    "build_tilde",
    "build_pq",
    "reduce_to_sigma",
    "half_angle_and_expand",
    "characteristic_polynomial",
    "candidate_roots",
    "polish_root",
]

LHS_BASIS = (
    "d3^2*s5", "d3^2*c5", "d3^2", "d3*s5", "d3*c5", "d3", "s5", "c5", "1",
)
RHS_BASIS = ("s1*s2", "s1*c2", "c1*s2", "c1*c2", "s1", "c1", "s2", "c2")
EXTENDED_BASIS = (
    "d3^3*s5", "d3^3*c5", "d3^3",
    "d3^2*s5", "d3^2*c5", "d3^2",
    "d3*s5", "d3*c5", "d3",
    "s5", "c5", "1",
)

# Extended-basis slots used during back-substitution.
SLOT_D3 = 8
SLOT_S5 = 9
SLOT_C5 = 10
SLOT_ONE = 11
SLOT_D3S5 = 6
SLOT_D3C5 = 7

# Maximum entry degree in x4 after the half-angle substitution.  The three
# theta4 layers {1, s4, c4} map to quadratics, so D_e = 2 and the squared-up
# determinant has degree at most 12 * D_e = 24.
ENTRY_DEGREE = 2
assert ENTRY_DEGREE <= 4


@dataclass(frozen=True)
class TildeSystem:
    """Coefficient tables of the six base (direction/position) equations.

    ``lhs`` is the (6, 9, 3) slice of the left tensor over LHS_BASIS with
    theta4 layers {1, s4, c4}; ``rhs`` is the (6, 8) right-side table over
    RHS_BASIS and ``rhs_const`` the (6,) constant terms.
    """

    lhs: np.ndarray
    rhs: np.ndarray
    rhs_const: np.ndarray


@dataclass(frozen=True)
class PQSystem:
    """The full 14-equation system P(s4, c4) * lhs_basis = Q * rhs_basis."""

    P: np.ndarray  # (14, 9, 3) with theta4 layers {1, s4, c4}
    Q: np.ndarray  # (14, 8)

    def lhs_matrix(self, theta4: float) -> np.ndarray:
        s4, c4 = math.sin(theta4), math.cos(theta4)
        return self.P[..., 0] + s4 * self.P[..., 1] + c4 * self.P[..., 2]


@dataclass(frozen=True)
class SigmaMatrix:
    """6x9 matrix over LHS_BASIS; coeffs holds x4 powers {0, 1, 2} per entry."""

    coeffs: np.ndarray  # (6, 9, 3)

    def entry(self, i: int, j: int) -> UniPoly:
        return UniPoly(tuple(self.coeffs[i, j]))

    def evaluate(self, x4: float) -> np.ndarray:
        c = self.coeffs
        return c[..., 0] + x4 * c[..., 1] + x4 * x4 * c[..., 2]


@dataclass(frozen=True)
class Sigma12:
    """12x12 squared-up system over EXTENDED_BASIS, quadratic per entry."""

    coeffs: np.ndarray  # (12, 12, 3)

    def entry(self, i: int, j: int) -> UniPoly:
        return UniPoly(tuple(self.coeffs[i, j]))

    def evaluate(self, x4: float) -> np.ndarray:
        c = self.coeffs
        return c[..., 0] + x4 * c[..., 1] + x4 * x4 * c[..., 2]

    def leading(self) -> np.ndarray:
        """Coefficient matrix of x4^2 (the x4 -> infinity limit)."""
        return self.coeffs[..., 2]

    def row_normalized(self) -> "Sigma12":
        scale = np.abs(self.coeffs).max(axis=(1, 2), keepdims=True)
        scale[scale == 0] = 1.0
        return Sigma12(self.coeffs / scale)


def build_tilde(goal: GoalPose) -> TildeSystem:
    """Base-equation coefficient tables for a unit-radius goal."""
    Q, q0 = q_tables(goal.v_g, goal.x_g)
    return TildeSystem(lhs=P_TENSOR[:6].copy(), rhs=Q[:6], rhs_const=q0[:6])


def build_pq(goal: GoalPose) -> PQSystem:
    """The 14-equation system for a unit-radius goal.

    Constant right-side terms are moved into the left-side constant slot so
    the system reads P * lhs_basis = Q * rhs_basis exactly.
    """
    Q, q0 = q_tables(goal.v_g, goal.x_g)
    P = P_TENSOR.copy()
    P[:, 8, 0] -= q0
    return PQSystem(P=P, Q=Q)


def reduce_to_sigma(sys: PQSystem, cond_threshold: float = 1e10):
    """Eliminate the right-side monomials.

    Selects the best-conditioned 8 rows via column-pivoted QR of Q^T, solves
    them for the right basis, and substitutes into the remaining 6 rows:
    Sigma = P_B - Q_B Q_A^{-1} P_A.  Entries a + b*s4 + c*c4 are converted
    to x4 = tan(theta4/2) by the half-angle substitution with the (1 + x4^2)
    denominator cleared: (a + c) + 2b*x4 + (a - c)*x4^2.  Returns
    (SigmaMatrix, selected row indices, Q_A inverse data for reuse).
    """
    _, _, pvt = sla.qr(sys.Q.T, pivoting=True)
    rows_a = np.sort(pvt[:8])
    rows_b = np.sort(pvt[8:])
    QA = sys.Q[rows_a]
    cond = np.linalg.cond(QA)
    if not np.isfinite(cond) or cond > cond_threshold:
        raise SingularQ(f"no well-conditioned 8-row subset (cond={cond:.3e})")
    lu_piv = sla.lu_factor(QA)
    M = sla.lu_solve(lu_piv, sys.P[rows_a].reshape(8, -1)).reshape(8, 9, 3)
    sigma = sys.P[rows_b] - np.einsum("ij,jkl->ikl", sys.Q[rows_b], M)
    a, b, c = sigma[..., 0], sigma[..., 1], sigma[..., 2]
    sx = np.stack([a + c, 2.0 * b, a - c], axis=-1)  # powers of x4
    return SigmaMatrix(sx), rows_a, lu_piv


def half_angle_and_expand(sigma: SigmaMatrix) -> Sigma12:
    """Multiply each row by d3 to square the system up to 12x12.

    Entries are already polynomials in x4.  Rows 0-5 are the d3-multiplied
    copies acting on [d3^3*s5 ... d3]; rows 6-11 are the originals acting
    on [d3^2*s5 ... 1].
    """
    s12 = np.zeros((12, 12, 3))
    s12[0:6, 0:9] = sigma.coeffs
    s12[6:12, 3:12] = sigma.coeffs
    return Sigma12(s12)


def characteristic_polynomial(s12: Sigma12, zero_threshold: float = 1e-10) -> UniPoly:
    """Determinant of the squared-up system as a polynomial in x4.

    Evaluated at 12 * ENTRY_DEGREE + 1 Chebyshev points on [-1, 1] (rows are
    normalized first) and interpolated; leading coefficients below
    zero_threshold * max|c| are trimmed.
    """
    s = s12.row_normalized().coeffs
    n = 12 * ENTRY_DEGREE + 1
    nodes = np.cos((2.0 * np.arange(n) + 1.0) * math.pi / (2.0 * n))
    vals = np.array(
        [np.linalg.det(s[..., 0] + x * s[..., 1] + x * x * s[..., 2]) for x in nodes]
    )
    cheb = np.polynomial.chebyshev.chebfit(nodes, vals, n - 1)
    pc = np.polynomial.chebyshev.cheb2poly(cheb)
    m = np.abs(pc).max()
    if m < 1e-250:
        raise IdenticallyZeroDeterminant(
            "determinant vanishes identically: singular goal configuration"
        )
    pc = pc.copy()
    pc[np.abs(pc) < zero_threshold * m] = 0.0
    nz = np.nonzero(pc)[0]
    if len(nz) == 0:
        raise IdenticallyZeroDeterminant(
            "determinant vanishes identically: singular goal configuration"
        )
    return UniPoly(tuple(pc[: nz[-1] + 1]))


def candidate_roots(s12: Sigma12, imag_tol: float = 1e-8):
    """Real x4 candidates of det(Sigma12(x4)) = 0.

    The quadratic matrix pencil A0 + x*A1 + x^2*A2 is linearized into a
    24x24 generalized eigenvalue problem; near-real finite eigenvalues are
    the candidates.  Returns (roots, has_infinite): infinite eigenvalues
    signal the theta4 = pi branch (handled separately since x4 = tan(theta4/2)
    has no finite value there).
    """
    s = s12.row_normalized().coeffs
    a0, a1, a2 = s[..., 0], s[..., 1], s[..., 2]
    n = 12
    A = np.zeros((2 * n, 2 * n))
    B = np.zeros((2 * n, 2 * n))
    A[:n, n:] = np.eye(n)
    A[n:, :n] = -a0
    A[n:, n:] = -a1
    B[:n, :n] = np.eye(n)
    B[n:, n:] = a2
    alpha, beta = sla.eig(A, B, right=False, left=False, homogeneous_eigvals=True)
    roots = []
    has_infinite = False
    for a, b in zip(alpha, beta):
        if abs(b) < 1e-12 * max(abs(a), 1e-300):
            has_infinite = True
            continue
        z = a / b
        if abs(z.imag) < imag_tol * (1.0 + abs(z.real)):
            roots.append(float(z.real))
    return roots, has_infinite


def polish_root(s12: Sigma12, x4: float, iters: int = 3) -> float:
    """Newton refinement of a determinant root via d/dx log det = tr(M^-1 M')."""
    s = s12.coeffs
    for _ in range(iters):
        M = s[..., 0] + x4 * s[..., 1] + x4 * x4 * s[..., 2]
        Mp = s[..., 1] + 2.0 * x4 * s[..., 2]
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                lu_piv = sla.lu_factor(M)
                trace = float(np.trace(sla.lu_solve(lu_piv, Mp)))
        except Exception:
            break
        if trace == 0.0 or not math.isfinite(trace):
            break
        step = 1.0 / trace
        if abs(step) > 0.5 * (1.0 + abs(x4)):
            break
        x4 -= step
    return x4
