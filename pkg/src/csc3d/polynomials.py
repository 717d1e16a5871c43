"""Univariate real polynomials: interpolation and real root extraction."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_types import DuplicateNodes, ZeroPolynomial

__all__ = ["UniPoly", "interpolate", "real_roots"]


@dataclass(frozen=True)
class UniPoly:
    """Real polynomial stored as ascending-degree coefficients.

    The canonical zero polynomial has ``coefficients == (0.0,)``; any other
    representation keeps a nonzero leading coefficient.
    """

    coefficients: tuple

    def __post_init__(self) -> None:
        c = [float(v) for v in self.coefficients]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        object.__setattr__(self, "coefficients", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return self.coefficients == (0.0,)

    def __call__(self, x: float) -> float:
        return float(np.polynomial.polynomial.polyval(x, self.coefficients))

    def derivative(self) -> "UniPoly":
        c = self.coefficients
        if len(c) == 1:
            return UniPoly((0.0,))
        return UniPoly(tuple(k * c[k] for k in range(1, len(c))))

    def root_residual(self, x: float) -> float:
        """Scale-invariant residual |p(x)| / (||c||_2 * max(1, |x|)^deg).

        For |x| > 1 the numerator is evaluated through the reversed
        polynomial, p(x) = x^deg * q(1/x), which keeps the quotient
        well-conditioned for roots of large magnitude.
        """
        c = np.asarray(self.coefficients)
        nc = float(np.linalg.norm(c))
        if nc == 0.0:
            return 0.0
        if abs(x) <= 1.0:
            num = abs(float(np.polynomial.polynomial.polyval(x, c)))
        else:
            num = abs(float(np.polynomial.polynomial.polyval(1.0 / x, c[::-1])))
        return num / nc


def interpolate(samples) -> UniPoly:
    """Unique polynomial through the given (x, y) samples."""
    xs = np.array([float(x) for x, _ in samples])
    ys = np.array([float(y) for _, y in samples])
    if len(xs) == 0:
        raise DuplicateNodes("no samples")
    if len(np.unique(xs)) != len(xs):
        raise DuplicateNodes("interpolation nodes must be distinct")
    deg = len(xs) - 1
    if deg == 0:
        return UniPoly((ys[0],))
    # Fit in a scaled Chebyshev basis for conditioning, convert to power basis.
    half = 0.5 * (xs.max() - xs.min())
    scale = half if half > 0 else 1.0
    mid = 0.5 * (xs.max() + xs.min())
    t = (xs - mid) / scale
    cheb = np.polynomial.chebyshev.chebfit(t, ys, deg)
    pc = np.polynomial.chebyshev.cheb2poly(cheb)
    # Undo the affine substitution x -> (x - mid) / scale.
    p = np.polynomial.polynomial.Polynomial(pc)(
        np.polynomial.polynomial.Polynomial([-mid / scale, 1.0 / scale])
    )
    return UniPoly(tuple(p.coef))


def _newton_polish(p: UniPoly, dp: UniPoly, x: float, iters: int = 8) -> float:
    for _ in range(iters):
        fx = p(x)
        dfx = dp(x)
        if dfx == 0.0 or not math.isfinite(dfx):
            break
        step = fx / dfx
        if not math.isfinite(step):
            break
        if abs(step) > 0.5 * (1.0 + abs(x)):
            break
        x -= step
        if abs(step) < 1e-15 * (1.0 + abs(x)):
            break
    return x


def real_roots(p: UniPoly, imag_tol: float = 1e-8, cluster_tol: float = 1e-8):
    """All real roots via companion-matrix eigenvalues plus Newton polish.

    Near-real eigenvalues (|imag| < imag_tol * (1 + |real|)) are accepted
    directly.  Eigenvalues of a real multiple root split into a cluster
    with imaginary parts of order eps^(1/m); those borderline cases are
    recovered by polishing the real part and accepting it only when it
    stays put and drives the residual to zero, so multiplicities are
    preserved.  Clustered roots are reported by repetition.
    """
    if p.is_zero():
        raise ZeroPolynomial("real_roots of the zero polynomial")
    if p.degree == 0:
        return []
    roots = np.polynomial.polynomial.polyroots(np.asarray(p.coefficients))
    dp = p.derivative()
    real = []
    for z in roots:
        if abs(z.imag) < imag_tol * (1.0 + abs(z.real)):
            real.append(_newton_polish(p, dp, float(z.real)))
        elif abs(z.imag) < 1e-4 * (1.0 + abs(z.real)):
            x = _newton_polish(p, dp, float(z.real), iters=40)
            if (
                abs(x - z.real) < 1e-3 * (1.0 + abs(z.real))
                and p.root_residual(x) < 1e-10
            ):
                real.append(x)
    real.sort()
    # Cluster and report multiplicity by repetition of the cluster mean.
    out = []
    i = 0
    while i < len(real):
        j = i + 1
        while j < len(real) and abs(real[j] - real[j - 1]) < cluster_tol * (
            1.0 + abs(real[j])
        ):
            j += 1
        rep = float(np.mean(real[i:j]))
        out.extend([rep] * (j - i))
        i = j
    return out
