"""Exact linear algebra over Z and Q for small dense matrices.

Matrices are sequences of rows of Python ints.  Everything here is exact;
the only place a float appears is the interval estimate inside the
enumeration code in :mod:`k3lat.enumeration`, never in this module.
"""

from fractions import Fraction
from math import gcd

import numpy as np

__all__ = [
    "det", "rank", "hnf", "kernel", "row_echelon_transform", "solve_integer",
    "elementary_divisors", "signature_counts", "ldl_positive", "lll_gram",
    "inverse_unimodular", "complete_to_basis", "matmul", "gram_of", "content",
    "primitive", "rank_mod_p", "transpose",
]


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def gram_of(rows, G):
    """Gram matrix ``rows * G * rows^T``."""
    RG = [[sum(r[k] * G[k][j] for k in range(len(r)) if r[k]) for j in range(len(G))]
          for r in rows]
    return [[sum(a * b for a, b in zip(x, y)) for y in rows] for x in RG]


def content(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def primitive(v):
    g = content(v)
    if g == 0:
        raise ValueError("zero vector has no primitive part")
    return [x // g for x in v]


def det(M):
    """Determinant by Bareiss fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        for i in range(k + 1, n):
            aik = A[i][k]
            row_i, row_k = A[i], A[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


def rank(rows):
    """Rank over Q."""
    A = [list(r) for r in rows if any(r)]
    if not A:
        return 0
    ncols = len(A[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][col]
        for i in range(r + 1, len(A)):
            f = A[i][col]
            if f:
                row = [p * x - f * y for x, y in zip(A[i], A[r])]
                g = content(row)
                A[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(A):
            break
    return r


def rank_mod_p(rows, p=2147483629):
    """Rank over F_p; a lower bound for the rank over Q."""
    if len(rows) == 0:
        return 0
    A = np.array(rows, dtype=np.int64) % p
    m, n = A.shape
    r = 0
    for col in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, col])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, col]), p - 2, p)
        A[r] = (A[r] * inv) % p
        f = A[:, col].copy()
        f[r] = 0
        A = (A - np.outer(f, A[r])) % p
        r += 1
    return r


def _echelon(A, ncols):
    """In-place unimodular row reduction of ``A`` pivoting on the first
    ``ncols`` columns.  Returns the number of pivot rows; those come first,
    in Hermite form (positive pivots, entries above reduced)."""
    m = len(A)
    r = 0
    pivots = []
    for col in range(ncols):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if A[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[i0] = A[i0], A[r]
            p = A[r][col]
            clean = True
            for i in range(r + 1, m):
                a = A[i][col]
                if a:
                    q = a // p
                    if q:
                        A[i] = [x - q * y for x, y in zip(A[i], A[r])]
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if r < m and A[r][col]:
            if A[r][col] < 0:
                A[r] = [-x for x in A[r]]
            p = A[r][col]
            for i in range(r):
                q = A[i][col] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[r])]
            pivots.append(col)
            r += 1
    return r


def hnf(rows):
    """Row Hermite normal form of the row span; zero rows dropped."""
    A = [list(r) for r in rows]
    if not A:
        return []
    r = _echelon(A, len(A[0]))
    return [tuple(row) for row in A[:r]]


def row_echelon_transform(M):
    """Return ``(E, T, r)`` with ``T`` unimodular, ``T*M = E`` and the first
    ``r`` rows of ``E`` in Hermite form, the remaining rows zero."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(M[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    r = _echelon(A, n)
    E = [row[:n] for row in A]
    T = [row[n:] for row in A]
    return E, T, r


def kernel(M, ncols=None):
    """Saturated basis (Hermite form) of ``{x in Z^n : M x = 0}``."""
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    if not M:
        return [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    E, T, r = row_echelon_transform(transpose(M))
    return hnf(T[r:])


def solve_integer(M, b):
    """An integer solution ``x`` of ``M x = b`` or ``None``.

    Also returns a kernel basis, so every solution is ``x + span(kernel)``.
    """
    E, T, r = row_echelon_transform(transpose(M))
    # M T^T = E^T; solve E^T y = b for the first r entries of y
    m = len(M)
    y = [0] * r
    pivcols = []
    for i in range(r):
        pivcols.append(next(j for j in range(m) if E[i][j]))
    resid = list(b)
    for i in range(r):
        c = pivcols[i]
        if resid[c] % E[i][c]:
            return None, hnf(T[r:])
        y[i] = resid[c] // E[i][c]
        if y[i]:
            for j in range(m):
                resid[j] -= y[i] * E[i][j]
    if any(resid):
        return None, hnf(T[r:])
    n = len(T)
    x = [sum(y[i] * T[i][j] for i in range(r)) for j in range(n)]
    return x, hnf(T[r:])


def elementary_divisors(M):
    """Nonzero diagonal of the Smith normal form, in divisibility order."""
    A = [list(r) for r in M]
    m = len(A)
    n = len(A[0]) if m else 0
    divs = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < best[0]):
                    best = (abs(A[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            changed = False
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        changed = True
                        break
            if changed:
                continue
            p = A[t][t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            p = A[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        divs.append(abs(A[t][t]))
        t += 1
    return divs


def signature_counts(G):
    """(positive, negative, zero) inertia of a symmetric integer matrix,
    by exact congruence diagonalisation with symmetric pivoting."""
    n = len(G)
    A = [[Fraction(x) for x in r] for r in G]
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active
                         if i < j and A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # x_i <- x_i + x_j as a congruence: diagonal becomes 2*A[i][j]
            for k in range(n):
                A[i][k] += A[j][k]
            for k in range(n):
                A[k][i] += A[k][j]
            piv = i
        p = A[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in active if k != piv]
        col = {k: A[k][piv] for k in rest}
        for k in rest:
            if col[k]:
                f = col[k] / p
                rowk = A[k]
                for l in rest:
                    if A[piv][l]:
                        rowk[l] -= f * A[piv][l]
        active = rest
    return pos, neg, n - pos - neg


def ldl_positive(Q):
    """Coefficients ``q`` with ``Q(x) = sum_i q[i][i]*(x_i + sum_{j>i} q[i][j]*x_j)^2``.

    Raises ValueError when ``Q`` is not positive definite.
    """
    n = len(Q)
    q = [[Fraction(x) for x in r] for r in Q]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("matrix is not positive definite")
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def lll_gram(G):
    """Integral LLL on a positive definite Gram matrix (Cohen, Alg. 2.6.7).

    Returns ``(T, G2)`` with ``T`` unimodular and ``G2 = T G T^T`` reduced.
    """
    n = len(G)
    b = [list(r) for r in G]
    H = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if n <= 1:
        return H, b
    d = [0] * (n + 1)
    lam = [[0] * n for _ in range(n)]
    d[0] = 1
    d[1] = b[0][0]
    k, kmax = 1, 0

    def red(k, l):
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            H[k] = [x - q * y for x, y in zip(H[k], H[l])]
            for i in range(n):
                b[k][i] -= q * b[l][i]
            b[k][k] -= q * b[k][l]
            for i in range(n):
                if i != k:
                    b[i][k] = b[k][i]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k):
        H[k], H[k - 1] = H[k - 1], H[k]
        b[k], b[k - 1] = b[k - 1], b[k]
        for row in b:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lm = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lm * lm) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lm * t) // d[k]
            lam[i][k - 1] = (B * t + lm * lam[i][k]) // d[k + 1]
        d[k] = B

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = b[k][j]
                for i in range(j):
                    u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u == 0:
                        raise ValueError("Gram matrix is not positive definite")
                    d[k + 1] = u
        while True:
            red(k, k - 1)
            if 4 * d[k + 1] * d[k - 1] < 3 * d[k] * d[k] - 4 * lam[k][k - 1] ** 2:
                swap(k)
                k = max(1, k - 1)
            else:
                break
        for l in range(k - 2, -1, -1):
            red(k, l)
        k += 1
    return H, gram_of(H, G)


def inverse_unimodular(T):
    """Exact inverse of a unimodular integer matrix."""
    n = len(T)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(T)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    out = [[x for x in row[n:]] for row in A]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def complete_to_basis(v):
    """Unimodular integer matrix whose first row is the primitive vector ``v``."""
    n = len(v)
    if content(v) != 1:
        raise ValueError("vector is not primitive")
    w = list(v)
    # column operations on w tracked as row operations on Uinv, keeping
    # w = e_1 * Uinv invariant-free: at the end w = (1,0,...,0), so
    # v = e_1 * Uinv and Uinv has first row v.
    Uinv = [[int(i == j) for j in range(n)] for i in range(n)]
    while True:
        nz = [j for j in range(n) if w[j]]
        j0 = min(nz, key=lambda j: abs(w[j]))
        if len(nz) == 1:
            break
        for j in nz:
            if j != j0:
                q = w[j] // w[j0]
                if q:
                    # col_j -= q col_j0  <->  row_j0 += q row_j
                    w[j] -= q * w[j0]
                    Uinv[j0] = [x + q * y for x, y in zip(Uinv[j0], Uinv[j])]
    j0 = next(j for j in range(n) if w[j])
    if j0 != 0:
        w[0], w[j0] = w[j0], w[0]
        Uinv[0], Uinv[j0] = Uinv[j0], Uinv[0]
    if w[0] < 0:
        w[0] = -w[0]
        Uinv[0] = [-x for x in Uinv[0]]
    assert list(Uinv[0]) == list(v)
    return Uinv
