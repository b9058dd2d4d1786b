"""Brute-force model of twisted complexes over Perf-gen(B) as right dg-modules.

A twisted complex ((X_i, r_i), q) becomes the free right B-module with
K-basis e_{i,a} (degree gen_a - r_i) and e_{i,a}.s, and differential
D(e_j) = sum_i e_i q_ij. Hom complexes are the B-linear maps inside the full
K-linear Hom, with d f = D' f - (-1)^l f D. Ranks come from sympy, so nothing
here shares code with the package's linear algebra.
"""

import sympy


def _rat(x):
    (c,) = x.coeffs
    return sympy.Rational(c.numerator, c.denominator)


def module_data(cat, C):
    d = cat.s_degree
    basis = []
    for i, (X, r) in enumerate(C.items):
        for a, g in enumerate(X.gens):
            basis.append((g - r, i, a, 0))
            basis.append((g - r + d, i, a, 1))
    index = {(i, a, k): n for n, (_, i, a, k) in enumerate(basis)}
    N = len(basis)
    D = sympy.zeros(N, N)
    S = sympy.zeros(N, N)
    for (i, a, k), n in index.items():
        if k == 0:
            S[index[(i, a, 1)], n] = 1
    for (i, j), f in C.q:
        U, Sm = cat.unit_s_parts(f)
        for a, row in enumerate(U):
            for b, u in enumerate(row):
                u, v = _rat(u), _rat(Sm[a][b])
                D[index[(i, a, 0)], index[(j, b, 0)]] += u
                D[index[(i, a, 1)], index[(j, b, 0)]] += v
                D[index[(i, a, 1)], index[(j, b, 1)]] += u
    degs = [b[0] for b in basis]
    return degs, D, S


def hom_dims(cat, C, C2):
    degs, D, S = module_data(cat, C)
    degs2, D2, S2 = module_data(cat, C2)
    assert D * D == sympy.zeros(*D.shape)
    assert D * S == S * D and D2 * S2 == S2 * D2
    N, N2 = len(degs), len(degs2)
    if not N or not N2:
        return {}
    lo, hi = min(degs2) - max(degs), max(degs2) - min(degs)

    def space(l):
        """Columns: flattened B-linear K-maps of degree l."""
        slots = [(y, x) for y in range(N2) for x in range(N) if degs2[y] == degs[x] + l]
        if not slots:
            return sympy.zeros(N2 * N, 0)
        cons = sympy.zeros(N2 * N, len(slots))
        emb = sympy.zeros(N2 * N, len(slots))
        for c, (y, x) in enumerate(slots):
            E = sympy.zeros(N2, N)
            E[y, x] = 1
            cons[:, c] = (E * S - S2 * E).reshape(N2 * N, 1)
            emb[:, c] = E.reshape(N2 * N, 1)
        null = cons.nullspace()
        if not null:
            return sympy.zeros(N2 * N, 0)
        return emb * sympy.Matrix.hstack(*null)

    def diff(l, cols):
        out = []
        for c in range(cols.shape[1]):
            f = cols[:, c].reshape(N2, N)
            out.append((D2 * f - (-1) ** l * f * D).reshape(N2 * N, 1))
        return sympy.Matrix.hstack(*out) if out else sympy.zeros(N2 * N, 0)

    spaces = {l: space(l) for l in range(lo - 1, hi + 2)}
    ranks = {l: (diff(l, spaces[l]).rank() if spaces[l].shape[1] else 0) for l in spaces}
    dims = {}
    for l in range(lo, hi + 1):
        h = spaces[l].shape[1] - ranks[l] - ranks[l - 1]
        if h:
            dims[l] = h
    return dims
