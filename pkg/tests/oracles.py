"""Slow, independent reference computations used to check the library.

Nothing here imports k3lat: Cartan matrices are rebuilt from Dynkin edges,
vectors are found by exhaustive boxes, and Smith invariants come from
determinantal divisors.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

DYNKIN_EDGES = {
    # branch node last so every model differs from the library's numbering
    ("A", 1): [],
    ("A", 2): [(0, 1)],
    ("A", 3): [(0, 1), (1, 2)],
    ("A", 4): [(0, 1), (1, 2), (2, 3)],
    ("A", 5): [(0, 1), (1, 2), (2, 3), (3, 4)],
    ("D", 4): [(0, 3), (1, 3), (2, 3)],
    ("D", 5): [(0, 1), (1, 4), (2, 4), (3, 4)],
    ("E", 6): [(0, 1), (1, 5), (5, 2), (2, 3), (4, 5)],
    ("E", 7): [(0, 1), (1, 2), (2, 6), (6, 3), (3, 4), (5, 6)],
    ("E", 8): [(0, 1), (1, 2), (2, 3), (3, 7), (7, 4), (4, 5), (6, 7)],
}


def cartan(kind, n):
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in DYNKIN_EDGES[(kind, n)]:
        C[i][j] = C[j][i] = -1
    return C


def frac_det(M):
    """Determinant by Gaussian elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for i in range(n):
        p = next((r for r in range(i, n) if A[r][i] != 0), None)
        if p is None:
            return 0
        if p != i:
            A[i], A[p] = A[p], A[i]
            d = -d
        d *= A[i][i]
        for r in range(i + 1, n):
            f = A[r][i] / A[i][i]
            for c in range(i, n):
                A[r][c] -= f * A[i][c]
    return int(d)


def frac_inverse(M):
    n = len(M)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for i in range(n):
        p = next(r for r in range(i, n) if A[r][i] != 0)
        A[i], A[p] = A[p], A[i]
        piv = A[i][i]
        A[i] = [x / piv for x in A[i]]
        for r in range(n):
            if r != i and A[r][i] != 0:
                f = A[r][i]
                A[r] = [x - f * y for x, y in zip(A[r], A[i])]
    return [row[n:] for row in A]


def smith_by_minors(M):
    """Elementary divisors as ratios of gcds of k x k minors (small matrices only)."""
    n, m = len(M), len(M[0]) if M else 0
    gs = [1]
    for k in range(1, min(n, m) + 1):
        g = 0
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                g = math.gcd(g, frac_det([[M[r][c] for c in cols] for r in rows]))
        if g == 0:
            break
        gs.append(g)
    return [gs[k] // gs[k - 1] for k in range(1, len(gs))]


def definite_box_vectors(Q, m):
    """Every ``x`` with ``x^T Q x = m`` for positive definite ``Q``.

    The box uses ``|x_i| <= sqrt(m (Q^-1)_ii)``, which follows from
    Cauchy-Schwarz in the dual basis.
    """
    n = len(Q)
    inv = frac_inverse(Q)
    bounds = [math.isqrt(int(m * inv[i][i])) for i in range(n)]
    Qa = np.array(Q, dtype=np.int64)
    axes = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    out = []
    # split on the first coordinate to keep memory small
    rest = np.array(np.meshgrid(*axes[1:], indexing="ij")).reshape(n - 1, -1).T \
        if n > 1 else np.zeros((1, 0), dtype=np.int64)
    for x0 in axes[0]:
        X = np.concatenate([np.full((len(rest), 1), x0, dtype=np.int64), rest], axis=1)
        vals = np.einsum("ij,jk,ik->i", X, Qa, X)
        out.extend(tuple(int(v) for v in row) for row in X[vals == m])
    return out


def indefinite_box_vectors(G, m, bound, primitive=False):
    """Every ``x`` with ``|x|_inf <= bound`` and ``x^T G x = m``, plain itertools."""
    n = len(G)
    out = []
    for x in itertools.product(range(-bound, bound + 1), repeat=n):
        if not any(x):
            continue
        if sum(x[i] * G[i][j] * x[j] for i in range(n) for j in range(n)) != m:
            continue
        if primitive and math.gcd(*x) != 1:
            continue
        out.append(x)
    return out


def canon(v):
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def root_count_coordinate_model(kind, n):
    """Root counts from the standard coordinate models, no lattice search."""
    if kind == "A":
        return n * (n + 1)
    if kind == "D":
        return 2 * n * (n - 1)
    if kind == "E" and n == 8:
        # +-e_i +- e_j, plus (+-1/2)^8 with an even number of minus signs
        return 4 * math.comb(8, 2) + 2 ** 7
    if kind == "E" and n == 7:
        # roots of E8 orthogonal to a fixed root
        return 126
    if kind == "E" and n == 6:
        return 72
    raise ValueError(kind)


def gram_rank(M):
    """Rank over Q by fraction elimination."""
    A = [[Fraction(x) for x in row] for row in M]
    if not A:
        return 0
    rows, cols, r = len(A), len(A[0]), 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c] / A[r][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


def signature_by_eigenvalues(G):
    """(positive, negative, zero) from numpy eigenvalues; fine for small entries."""
    w = np.linalg.eigvalsh(np.array(G, dtype=float))
    tol = 1e-9 * max(1.0, float(np.abs(w).max(initial=0.0)))
    return (int((w > tol).sum()), int((w < -tol).sum()), int((np.abs(w) <= tol).sum()))


def charpoly(G):
    """Coefficients of det(tI - G), leading first, by Faddeev-LeVerrier in fractions."""
    n = len(G)
    A = [[Fraction(x) for x in row] for row in G]
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{k-1} I, then c_k = -tr(A M) / k
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        M = [[AM[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    return coeffs


def signature_by_charpoly(G):
    """Exact (positive, negative, zero) of a symmetric matrix.

    All roots of the characteristic polynomial are real, so Descartes' rule
    of signs counts the positive ones exactly, and the negative ones through
    p(-t).
    """
    n = len(G)
    c = charpoly(G)
    zero = 0
    while zero < n and c[n - zero] == 0:
        zero += 1
    p = c[:n + 1 - zero]

    def changes(seq):
        s = [x for x in seq if x != 0]
        return sum(1 for a, b in zip(s, s[1:]) if (a > 0) != (b > 0))

    deg = len(p) - 1
    pos = changes(p)
    neg = changes([x * (-1) ** (deg - i) for i, x in enumerate(p)])
    return pos, neg, zero
