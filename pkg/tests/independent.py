"""Oracles that share no code with the package's linear algebra.

Cochains are alternating multilinear maps evaluated on unsorted index tuples,
and ranks come from sympy.
"""

from fractions import Fraction
from itertools import combinations
from math import comb

import sympy


def _sort_sign(idx):
    idx = list(idx)
    if len(set(idx)) < len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


def ce_differential_sympy(c, rho, k):
    """Matrix of d: C^k -> C^{k+1} with c[i][j][l] structure constants and rho a list of m x m lists."""
    n = len(c)
    m = len(rho[0]) if rho else 1
    src = list(combinations(range(n), k))
    tgt = list(combinations(range(n), k + 1))
    sidx = {I: t for t, I in enumerate(src)}
    M = sympy.zeros(len(tgt) * m, len(src) * m)

    def add_value(row_base, tup, coeff, vec_op):
        # coeff * omega(e_tup) with the V-valued operator vec_op applied afterwards
        s, key = _sort_sign(tup)
        if not s:
            return
        col = sidx[key] * m
        for b in range(m):
            for a in range(m):
                v = vec_op[b][a]
                if v:
                    M[row_base + b, col + a] += sympy.Rational(s * coeff * v)

    ident = [[1 if a == b else 0 for a in range(m)] for b in range(m)]
    for t, J in enumerate(tgt):
        base = t * m
        for i in range(k + 1):
            rest = J[:i] + J[i + 1:]
            add_value(base, rest, (-1) ** i, rho[J[i]])
        for i in range(k + 1):
            for j in range(i + 1, k + 1):
                rest = J[:i] + J[i + 1:j] + J[j + 1:]
                for l in range(n):
                    x = c[J[i]][J[j]][l]
                    if x:
                        add_value(base, (l,) + rest, (-1) ** (i + j) * Fraction(x), ident)
    return M


def ce_betti_sympy(c, rho=None):
    n = len(c)
    if rho is None:
        rho = [[[0]] for _ in range(n)]
    m = len(rho[0])
    ranks = [0] * (n + 2)
    for k in range(n):
        D = ce_differential_sympy(c, rho, k)
        ranks[k + 1] = D.rank() if D.shape[0] and D.shape[1] else 0
    return tuple(comb(n, k) * m - ranks[k + 1] - ranks[k] for k in range(n + 1))


def structure_of(g):
    return [[[Fraction(x) for x in v] for v in row] for row in g.structure]


def rho_of(V):
    return [[list(r) for r in A.entries] for A in V.matrices]


def truncated_field_rep(fields, base_dim, k):
    """Matrices of vector fields acting on polynomials of degree <= k, higher terms dropped.

    fields[a][i] is a sympy expression in w0..w{base_dim-1}, the i-th component of field a.
    """
    w = sympy.symbols(f"w0:{base_dim}")
    monos = sorted(
        (m for d in range(k + 1) for m in sympy.itermonomials(w, d, d) if sympy.Poly(m, *w).total_degree() == d),
        key=lambda m: sympy.Poly(m, *w).monoms()[0],
    )
    index = {sympy.Poly(m, *w).monoms()[0]: t for t, m in enumerate(monos)}
    mats = []
    for X in fields:
        M = [[0] * len(monos) for _ in monos]
        for t, mono in enumerate(monos):
            img = sympy.expand(sum(X[i] * sympy.diff(mono, w[i]) for i in range(base_dim)))
            if img == 0:
                continue
            for exps, coeff in sympy.Poly(img, *w).terms():
                if sum(exps) <= k:
                    M[index[exps]][t] += Fraction(int(coeff.p), int(coeff.q))
        mats.append(M)
    return w, mats


def kron_lists(A, B):
    return [[A[i][j] * B[k][l] for j in range(len(A[0])) for l in range(len(B[0]))]
            for i in range(len(A)) for k in range(len(B))]


def jet_betti_sympy(c, fields, base_dim, k, rho_V=None):
    """Betti numbers of the order-k jet complex when the structure functions are constant."""
    _, mats = truncated_field_rep(fields, base_dim, k)
    n = len(c)
    if rho_V is None:
        rho_V = [[[0]] for _ in range(n)]
    P, m = len(mats[0]), len(rho_V[0])
    idP = [[1 if i == j else 0 for j in range(P)] for i in range(P)]
    idV = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    rho = []
    for a in range(n):
        X = kron_lists(mats[a], idV)
        Y = kron_lists(idP, rho_V[a])
        rho.append([[x + y for x, y in zip(rx, ry)] for rx, ry in zip(X, Y)])
    return ce_betti_sympy(c, rho)
