"""Regenerate src/csc3d/_tables.py.

The inverse-kinematics pipeline rests on fourteen scalar equations whose
left-hand sides collect monomials in (d3, sin/cos theta5) with coefficients
linear in (sin/cos theta4), and whose right-hand sides collect monomials in
(sin/cos theta1, sin/cos theta2) with coefficients polynomial in the goal
components.  This script expands those equations symbolically once, extracts
the coefficient tables, and emits them as plain numpy code so the installed
package needs no computer-algebra dependency at runtime.

Run from the repository root:

    python tools/gen_tables.py > src/csc3d/_tables.py
"""

import sys

import numpy as np
import sympy as sp
from sympy.printing.pycode import pycode

s1, c1, s2, c2, s4, c4, s5, c5, d3 = sp.symbols(
    "s1 c1 s2 c2 s4 c4 s5 c5 d3", real=True
)
goal_syms = sp.symbols("vgx vgy vgz xgx xgy xgz", real=True)
vgx, vgy, vgz, xgx, xgy, xgz = goal_syms

# Direction-column and position-column equations of the wrist-decomposed
# chain: left sides depend on (theta4, theta5, d3) only, right sides on
# (theta1, theta2) and the goal.
I_L = sp.Matrix([c4 * s5, c5, s4 * s5])
I_R = sp.Matrix(
    [
        vgx * c1 * c2 + vgy * s1 * c2 + vgz * s2,
        vgz * c2 - vgx * c1 * s2 - vgy * s1 * s2,
        -vgy * c1 + vgx * s1,
    ]
)
P_L = sp.Matrix([c4 * (1 + c5) + 1, -d3 - s5, s4 * (1 + c5)])
P_R = sp.Matrix(
    [
        xgx * c1 * c2 + xgy * s1 * c2 + xgz * s2 - c2,
        s2 * (1 - xgx * c1 - xgy * s1) + xgz * c2,
        xgx * s1 - xgy * c1,
    ]
)


def combos(p, i):
    """The 14 equations: 6 base rows, p.p, p.i, p x i, (p.p)i - 2(p.i)p."""
    rows = list(i) + list(p)
    rows.append(p.dot(p))
    rows.append(p.dot(i))
    rows += list(p.cross(i))
    rows += list(p.dot(p) * i - 2 * p.dot(i) * p)
    return rows


def reduce_pyth(expr, pairs):
    """Rewrite s**k -> s**(k%2) * (1-c**2)**(k//2) for each (s, c) pair."""
    e = sp.expand(expr)
    for s, c in pairs:
        poly = sp.Poly(e, s)
        new = 0
        for (k,), coeff in poly.terms():
            new += coeff * s ** (k % 2) * (1 - c**2) ** (k // 2)
        e = sp.expand(new)
    return e


LHS = [reduce_pyth(e, [(s4, c4), (s5, c5)]) for e in combos(P_L, I_L)]
RHS = [reduce_pyth(e, [(s1, c1), (s2, c2)]) for e in combos(P_R, I_R)]

# Left-side monomial basis (d3 power, s5 power, c5 power), and the three
# theta4 layers {1, s4, c4}.
LHS_KEYS = [
    (2, 1, 0), (2, 0, 1), (2, 0, 0),
    (1, 1, 0), (1, 0, 1), (1, 0, 0),
    (0, 1, 0), (0, 0, 1), (0, 0, 0),
]
P_tensor = np.zeros((14, 9, 3))
for i, e in enumerate(LHS):
    poly = sp.Poly(e, d3, s5, c5)
    for mono, coeff in poly.terms():
        j = LHS_KEYS.index(mono)
        cp = sp.Poly(coeff, s4, c4)
        for m2, cval in cp.terms():
            k = {(0, 0): 0, (1, 0): 1, (0, 1): 2}[m2]
            P_tensor[i, j, k] = float(cval)

# Right-side monomial basis (s1 pow, c1 pow, s2 pow, c2 pow).
RHS_KEYS = [
    (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1),
    (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1),
]
Q_sym = sp.zeros(14, 8)
q0_sym = sp.zeros(14, 1)
for i, e in enumerate(RHS):
    poly = sp.Poly(e, s1, c1, s2, c2)
    for mono, coeff in poly.terms():
        if mono == (0, 0, 0, 0):
            q0_sym[i] = coeff
        else:
            Q_sym[i, RHS_KEYS.index(mono)] = coeff


def emit(out):
    w = out.write
    w('"""Coefficient tables for the 14-equation elimination system.\n\n')
    w("Generated by tools/gen_tables.py -- do not edit by hand.\n")
    w('"""\n\n')
    w("import numpy as np\n\n")

    w("# Nonzero entries of the goal-independent left-side tensor,\n")
    w("# shape (14, 9, 3): equation row, left basis monomial\n")
    w("# [d3^2*s5, d3^2*c5, d3^2, d3*s5, d3*c5, d3, s5, c5, 1],\n")
    w("# theta4 layer [1, s4, c4].\n")
    w("_P_NONZERO = [\n")
    for i in range(14):
        for j in range(9):
            for k in range(3):
                v = P_tensor[i, j, k]
                if v != 0.0:
                    w(f"    ({i}, {j}, {k}, {v!r}),\n")
    w("]\n\n")
    w("P_TENSOR = np.zeros((14, 9, 3))\n")
    w("for _i, _j, _k, _v in _P_NONZERO:\n")
    w("    P_TENSOR[_i, _j, _k] = _v\n")
    w("P_TENSOR.flags.writeable = False\n\n\n")

    # CSE over all Q and q0 entries.
    exprs = list(Q_sym) + list(q0_sym)
    repl, reduced = sp.cse(exprs, optimizations="basic")
    w("def q_tables(vg, xg):\n")
    w('    """Goal-dependent right-side tables.\n\n')
    w("    Returns (Q, q0): Q is the 14x8 coefficient matrix over the right\n")
    w("    basis [s1*s2, s1*c2, c1*s2, c1*c2, s1, c1, s2, c2]; q0 is the\n")
    w("    14-vector of constant terms.\n")
    w('    """\n')
    w("    vgx, vgy, vgz = vg\n")
    w("    xgx, xgy, xgz = xg\n")
    for sym, expr in repl:
        w(f"    {sym} = {pycode(expr)}\n")
    w("    Q = np.zeros((14, 8))\n")
    for idx in range(14 * 8):
        e = reduced[idx]
        if e != 0:
            i, j = divmod(idx, 8)
            w(f"    Q[{i}, {j}] = {pycode(e)}\n")
    w("    q0 = np.zeros(14)\n")
    for idx in range(14):
        e = reduced[14 * 8 + idx]
        if e != 0:
            w(f"    q0[{idx}] = {pycode(e)}\n")
    w("    return Q, q0\n")


if __name__ == "__main__":
    emit(sys.stdout)
