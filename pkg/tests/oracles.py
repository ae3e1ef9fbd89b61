"""Independent reference computations used only by the tests.

The curvature oracle works in coordinates with sympy: it builds the metric
``g = sum_ab G_ab theta^a theta^b`` from the dual coframe, computes the
coordinate Christoffel symbols and Riemann tensor, then contracts with the
frame vectors.  It shares no code with the frame-based implementation.
"""

from functools import lru_cache

import sympy as sp


def frame_curvature(coords, frame_rows, G=None):
    """``R[l][k][i][j] = g(R(e_i, e_j) e_k, e_l)`` from coordinate formulas.

    ``frame_rows[a][mu]`` is the ``mu``-th coordinate component of ``e_a`` as a
    sympy expression; ``G`` the constant frame metric (identity by default).
    """
    n = len(coords)
    E = sp.Matrix(frame_rows)
    G = sp.eye(n) if G is None else sp.Matrix(G)
    theta = (E.T).inv()  # theta[a, mu] with theta^a(e_b) = delta
    g = sp.simplify(theta.T * G * theta)
    ginv = sp.simplify(g.inv())
    x = coords
    Gamma = [[[sp.expand(sum(ginv[r, s] * (sp.diff(g[s, m], x[nu]) + sp.diff(g[s, nu], x[m]) - sp.diff(g[m, nu], x[s]))
                             for s in range(n)) / 2)
               for nu in range(n)] for m in range(n)] for r in range(n)]

    @lru_cache(maxsize=None)
    def riem(r, s, m, nu):
        # R^r_{s m nu} = d_m Gamma^r_{nu s} - d_nu Gamma^r_{m s} + Gamma^r_{m l} Gamma^l_{nu s} - Gamma^r_{nu l} Gamma^l_{m s}
        val = sp.diff(Gamma[r][nu][s], x[m]) - sp.diff(Gamma[r][m][s], x[nu])
        val += sum(Gamma[r][m][l] * Gamma[l][nu][s] - Gamma[r][nu][l] * Gamma[l][m][s] for l in range(n))
        return sp.expand(val)

    def lowered(t, s, m, nu):
        return sp.expand(sum(g[t, r] * riem(r, s, m, nu) for r in range(n)))

    coord_R = {}
    for t in range(n):
        for s in range(n):
            for m in range(n):
                for nu in range(m + 1, n):
                    v = lowered(t, s, m, nu)
                    if v != 0:
                        coord_R[(t, s, m, nu)] = v
                        coord_R[(t, s, nu, m)] = -v

    out = {}
    for l in range(n):
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    total = 0
                    for (t, s, m, nu), v in coord_R.items():
                        c = E[i, m] * E[j, nu] * E[k, s] * E[l, t]
                        if c != 0:
                            total += c * v
                    total = sp.simplify(total)
                    if total != 0:
                        out[(l, k, i, j)] = total
    return out

