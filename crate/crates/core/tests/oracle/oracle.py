"""Independent reference values for the frozen tests in oracle.rs.

Exact defects use sympy over the rationals; normalized residuals use numpy
float64 with the scale max(1, sum_k C(m,k) ||T^(k+n)||^2).
Run: python3 oracle.py
"""
import json
from math import comb

import numpy as np
import sympy as sp


def beta_mn(t, m, n):
    t = sp.Matrix(t)
    acc = sp.zeros(*t.shape)
    for k in range(m + 1):
        p = t ** (k + n)
        acc += (-1) ** (m - k) * comb(m, k) * p.H * p
    return acc


def normalized(t, m, n):
    t = np.array(t, dtype=complex)
    acc = np.zeros_like(t)
    scale = 0.0
    for k in range(m + 1):
        p = np.linalg.matrix_power(t, k + n)
        acc += (-1) ** (m - k) * comb(m, k) * (p.conj().T @ p)
        scale += comb(m, k) * np.linalg.norm(p, 2) ** 2
    return float(np.linalg.norm(acc, 2) / max(1.0, scale))


def delta(t, m, n, x):
    t = sp.Matrix(t)
    x = sp.Matrix(x)
    return sp.nsimplify(sp.simplify((x.H * beta_mn(t, m, n) * x)[0]))


def shift(weights, dim):
    t = sp.zeros(dim, dim)
    for k in range(dim - 1):
        t[k + 1, k] = weights(k + 1)
    return t


def unit(dim, j):
    v = [0] * dim
    v[j] = 1
    return v


N = [[0, 1], [0, 0]]
J = [[1, 1], [0, 1]]
CUBE = [[-1, -1], [3, 2]]
S = [[2, 1], [-1, 0]]
D = [[-5, 0], [0, -1]]
TS = (sp.Matrix(J) * sp.Matrix(S)).tolist()
ST = (sp.Matrix(S) * sp.Matrix(J)).tolist()


def ints(mat):
    return [[int(v) for v in row] for row in sp.Matrix(mat).tolist()]


out = {
    "beta_1_1_nilpotent": ints(beta_mn(N, 1, 1)),
    "beta_1_2_nilpotent": ints(beta_mn(N, 1, 2)),
    "beta_1_jordan": ints(beta_mn(J, 1, 0)),
    "beta_2_jordan": ints(beta_mn(J, 2, 0)),
    "beta_2_1_jordan": ints(beta_mn(J, 2, 1)),
    "beta_3_jordan": ints(beta_mn(J, 3, 0)),
    "cube_t3": ints(sp.Matrix(CUBE) ** 3),
    "beta_3_1_cube": ints(beta_mn(CUBE, 3, 1)),
    "beta_3_1_diag": ints(beta_mn(D, 3, 1)),
    "beta_5_2_ts": ints(beta_mn(TS, 5, 2)),
    "beta_5_2_st": ints(beta_mn(ST, 5, 2)),
    "normalized_jordan": [[normalized(J, m, n) for n in range(4)] for m in range(6)],
    "normalized_cube_3_1": normalized(CUBE, 3, 1),
    "normalized_cube3_3_1": normalized(np.linalg.matrix_power(np.array(CUBE), 3), 3, 1),
    "normalized_ts_5_2": normalized(TS, 5, 2),
    "normalized_st_5_2": normalized(ST, 5, 2),
    "normalized_diag_3_1": normalized(D, 3, 1),
    "normalized_nilpotent_1_1": normalized(N, 1, 1),
}

two_three = shift(lambda k: {1: 2, 2: 3}.get(k, 1), 12)
out["shift_2q2i_delta_2_1_e1"] = int(delta(two_three, 2, 1, unit(12, 0)))
out["shift_2q2i_delta_2_2"] = [int(delta(two_three, 2, 2, unit(12, j))) for j in range(6)]

root = shift(lambda p: 2 if p == 1 else sp.sqrt(sp.Rational(p + 1, p)), 12)
out["root2_delta_1_1_e1"] = str(delta(root, 1, 1, unit(12, 0)))
out["root2_delta_2_1"] = [str(delta(root, 2, 1, unit(12, j))) for j in range(6)]
out["root2_delta_1_0_e1"] = str(delta(root, 1, 0, unit(12, 0)))

z = sp.symbols("z")


def identity_coeffs(k, m, n):
    poly = sp.Poly(sp.expand(z ** (k * n) * (z**k - 1) ** m), z)
    return [int(c) for c in reversed(poly.all_coeffs())]


out["power_identity_2_2_1"] = identity_coeffs(2, 2, 1)
out["power_identity_3_2_0"] = identity_coeffs(3, 2, 0)
out["power_identity_4_3_2"] = identity_coeffs(4, 3, 2)

# Strict scaling on the Jordan block with x = e_2: Delta_{2,1}(J^k, e_2).
out["jordan_delta_2_1_e2_powers"] = [int(delta((sp.Matrix(J) ** k).tolist(), 2, 1, [0, 1])) for k in range(1, 5)]

print(json.dumps(out, indent=1))
