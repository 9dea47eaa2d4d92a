"""Exact integer linear algebra used across the package."""

from __future__ import annotations

from fractions import Fraction


def integer_kernel(rows: list[list[int]], ncols: int) -> list[list[int]]:
    """A Z-basis of {x in Z^ncols : A x = 0}.

    Column-style Hermite reduction: unimodular column operations are applied to
    A and recorded in U, so that A U is lower echelon; the columns of U past
    the pivots span the integer kernel.
    """
    m = len(rows)
    # columns of [A ; I]
    cols = [[rows[r][j] for r in range(m)] + [1 if i == j else 0 for i in range(ncols)]
            for j in range(ncols)]
    pc = 0
    for r in range(m):
        while True:
            nz = [j for j in range(pc, ncols) if cols[j][r]]
            if not nz:
                break
            jmin = min(nz, key=lambda j: (abs(cols[j][r]), j))
            piv = cols[jmin]
            for j in nz:
                if j == jmin:
                    continue
                q = cols[j][r] // piv[r]
                cj = cols[j]
                for i in range(len(cj)):
                    if piv[i]:
                        cj[i] -= q * piv[i]
            if len([j for j in nz if cols[j][r]]) == 1:
                cols[pc], cols[jmin] = cols[jmin], cols[pc]
                pc += 1
                break
    return [c[m:] for c in cols[pc:]]


def rational_rank(rows: list[list[int]]) -> int:
    """Rank over Q by fraction-exact Gaussian elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        for r in range(len(mat)):
            if r != rank and mat[r][c]:
                q = mat[r][c] / mat[rank][c]
                mat[r] = [a - q * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def identity(n: int, scale=1):
    return [[scale if i == j else 0 for j in range(n)] for i in range(n)]


def block_j(n_pairs: int) -> list[list[int]]:
    """Block-diagonal matrix with blocks [[0,1],[-1,0]]."""
    J = identity(2 * n_pairs, 0)
    for k in range(n_pairs):
        J[2 * k][2 * k + 1] = 1
        J[2 * k + 1][2 * k] = -1
    return J


def symplectic_reduce(gram: list[list[int]]):
    """Integer symplectic Gram-Schmidt for an antisymmetric integer Gram matrix.

    Returns (pairs, null) where each pair is (e, f, d) of integer coefficient
    vectors with B(e, f) = d > 0, all cross pairings zero, and ``null``
    spans the radical.  For a unimodular form every d equals 1.
    """
    n = len(gram)

    def B(x, y):
        return sum(x[i] * gram[i][j] * y[j] for i in range(n) if x[i] for j in range(n) if y[j])

    vecs = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pairs = []
    while True:
        best = None
        for a in range(len(vecs)):
            for b in range(a + 1, len(vecs)):
                val = B(vecs[a], vecs[b])
                if val and (best is None or abs(val) < abs(best[2])):
                    best = (a, b, val)
        if best is None:
            break
        a, b, d = best
        e, f = vecs[a], vecs[b]
        if d < 0:
            f = [-x for x in f]
            d = -d
        rest = [v for k, v in enumerate(vecs) if k not in (a, b)]
        reduced = []
        restart = False
        for x in rest:
            be, bf = B(x, e), B(x, f)
            if be % d or bf % d:
                # a smaller pairing exists; take a Euclid step and start over
                x = [xi - (bf // d) * ei + (be // d) * fi for xi, ei, fi in zip(x, e, f)]
                restart = True
            else:
                x = [xi - (bf // d) * ei + (be // d) * fi for xi, ei, fi in zip(x, e, f)]
            reduced.append(x)
        if restart:
            vecs = [e, f] + reduced
            continue
        pairs.append((e, f, d))
        vecs = reduced
    return pairs, vecs
