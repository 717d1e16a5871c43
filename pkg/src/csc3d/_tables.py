"""Coefficient tables for the 14-equation elimination system.

Generated by tools/gen_tables.py -- do not edit by hand.
"""

import numpy as np

# Nonzero entries of the goal-independent left-side tensor,
# shape (14, 9, 3): equation row, left basis monomial
# [d3^2*s5, d3^2*c5, d3^2, d3*s5, d3*c5, d3, s5, c5, 1],
# theta4 layer [1, s4, c4].
_P_NONZERO = [
    (0, 6, 2, np.float64(1.0)),
    (1, 7, 0, np.float64(1.0)),
    (2, 6, 1, np.float64(1.0)),
    (3, 7, 2, np.float64(1.0)),
    (3, 8, 0, np.float64(1.0)),
    (3, 8, 2, np.float64(1.0)),
    (4, 5, 0, np.float64(-1.0)),
    (4, 6, 0, np.float64(-1.0)),
    (5, 7, 1, np.float64(1.0)),
    (5, 8, 1, np.float64(1.0)),
    (6, 2, 0, np.float64(1.0)),
    (6, 3, 0, np.float64(2.0)),
    (6, 7, 0, np.float64(2.0)),
    (6, 7, 2, np.float64(2.0)),
    (6, 8, 0, np.float64(3.0)),
    (6, 8, 2, np.float64(2.0)),
    (7, 4, 0, np.float64(-1.0)),
    (7, 6, 0, np.float64(1.0)),
    (7, 6, 2, np.float64(1.0)),
    (8, 3, 1, np.float64(-1.0)),
    (8, 7, 1, np.float64(-1.0)),
    (8, 8, 1, np.float64(-1.0)),
    (9, 6, 1, np.float64(-1.0)),
    (10, 3, 2, np.float64(1.0)),
    (10, 7, 0, np.float64(1.0)),
    (10, 7, 2, np.float64(1.0)),
    (10, 8, 2, np.float64(1.0)),
    (11, 0, 2, np.float64(1.0)),
    (11, 4, 0, np.float64(2.0)),
    (11, 4, 2, np.float64(2.0)),
    (11, 5, 2, np.float64(2.0)),
    (11, 6, 0, np.float64(-2.0)),
    (11, 6, 2, np.float64(-1.0)),
    (12, 1, 0, np.float64(-1.0)),
    (12, 3, 0, np.float64(2.0)),
    (12, 3, 2, np.float64(2.0)),
    (12, 7, 0, np.float64(3.0)),
    (12, 7, 2, np.float64(2.0)),
    (12, 8, 0, np.float64(2.0)),
    (12, 8, 2, np.float64(2.0)),
    (13, 0, 1, np.float64(1.0)),
    (13, 4, 1, np.float64(2.0)),
    (13, 5, 1, np.float64(2.0)),
    (13, 6, 1, np.float64(1.0)),
]

P_TENSOR = np.zeros((14, 9, 3))
for _i, _j, _k, _v in _P_NONZERO:
    P_TENSOR[_i, _j, _k] = _v
P_TENSOR.flags.writeable = False


def q_tables(vg, xg):
    """Goal-dependent right-side tables.

    Returns (Q, q0): Q is the 14x8 coefficient matrix over the right
    basis [s1*s2, s1*c2, c1*s2, c1*c2, s1, c1, s2, c2]; q0 is the
    14-vector of constant terms.
    """
    vgx, vgy, vgz = vg
    xgx, xgy, xgz = xg
    x0 = -vgy
    x1 = -vgx
    x2 = -xgy
    x3 = 2*xgy
    x4 = 2*xgx
    x5 = vgx*xgz
    x6 = -vgz*xgx + x5
    x7 = vgy*xgz
    x8 = -vgz*xgy + x7
    x9 = -x8
    x10 = -vgx*xgy + vgy*xgx
    x11 = -x6
    x12 = 2*x8
    x13 = xgy**2
    x14 = xgx**2
    x15 = xgz**2
    x16 = vgx*xgx
    x17 = vgz*xgz
    x18 = vgy*x13 - vgy*x14 - vgy*x15 + x16*x3 + x17*x3
    x19 = vgy + x18
    x20 = 2*x6
    x21 = -vgx*x13 + vgx*x14 - vgx*x15 + vgy*x3*xgx + x17*x4
    x22 = vgx + x21
    x23 = -vgz
    x24 = vgz*x13 + vgz*x14 - vgz*x15 - x23 - x3*x7 - x4*x5
    x25 = vgy*xgy + x16 + x17
    x26 = 2*x25
    Q = np.zeros((14, 8))
    Q[0, 1] = vgy
    Q[0, 3] = vgx
    Q[0, 6] = vgz
    Q[1, 0] = x0
    Q[1, 2] = x1
    Q[1, 7] = vgz
    Q[2, 4] = vgx
    Q[2, 5] = x0
    Q[3, 1] = xgy
    Q[3, 3] = xgx
    Q[3, 6] = xgz
    Q[3, 7] = -1
    Q[4, 0] = x2
    Q[4, 2] = -xgx
    Q[4, 6] = 1
    Q[4, 7] = xgz
    Q[5, 4] = xgx
    Q[5, 5] = x2
    Q[6, 4] = -x3
    Q[6, 5] = -x4
    Q[7, 4] = x0
    Q[7, 5] = x1
    Q[8, 0] = vgx
    Q[8, 1] = x6
    Q[8, 2] = x0
    Q[8, 3] = x9
    Q[8, 6] = x10
    Q[9, 0] = x11
    Q[9, 1] = vgx
    Q[9, 2] = x8
    Q[9, 3] = x0
    Q[9, 7] = x10
    Q[10, 4] = x9
    Q[10, 5] = x11
    Q[11, 0] = x12
    Q[11, 1] = -x19
    Q[11, 2] = x20
    Q[11, 3] = -x22
    Q[11, 6] = x24
    Q[11, 7] = x26
    Q[12, 0] = x19
    Q[12, 1] = x12
    Q[12, 2] = x22
    Q[12, 3] = x20
    Q[12, 6] = -x26
    Q[12, 7] = x24
    Q[13, 4] = -x1 - x21
    Q[13, 5] = x0 + x18
    q0 = np.zeros(14)
    q0[6] = x13 + x14 + x15 + 1
    q0[7] = x25
    q0[10] = x23
    q0[13] = 2*x10
    return Q, q0
