"""Exact integer and rational linear algebra.

Everything in this package computes over Python ints (arbitrary precision)
and ``fractions.Fraction``; no floats enter any core computation.  Matrices
are plain lists of row lists, vectors are sequences.  Row convention: a
lattice point with coordinates ``c`` relative to basis rows ``B`` is the
row-vector product ``vec_mat(c, B)``.

All functions are pure and never mutate their arguments.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence


class SingularMatrixError(ValueError):
    """Square system has no unique solution (determinant zero)."""


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Matrix product a @ b for list-of-rows matrices."""
    cols_b = len(b[0]) if b else 0
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(cols_b)]
        for i in range(len(a))
    ]


def vec_mat(v: Sequence, m) -> list:
    """Row vector times matrix: sum_i v[i] * m[i]."""
    cols = len(m[0]) if m else 0
    return [sum(v[i] * m[i][j] for i in range(len(m))) for j in range(cols)]


def mat_vec(m, v: Sequence) -> list:
    """Matrix times column vector."""
    return [sum(row[j] * v[j] for j in range(len(v))) for row in m]


def transpose(m):
    return [list(col) for col in zip(*m)]


def det_bareiss(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix.

    Bareiss fraction-free elimination: every intermediate value is an exact
    minor, so entry growth stays polynomial instead of exponential.
    """
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det(m) -> Fraction:
    """Determinant of a square matrix with Fraction (or int) entries."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    int_rows = []
    for row in m:
        row = [Fraction(x) for x in row]
        d = math.lcm(*(x.denominator for x in row))
        scale /= d
        int_rows.append([int(x * d) for x in row])
    return scale * det_bareiss(int_rows)


def rank(m) -> int:
    """Exact rank of a rectangular matrix over the rationals."""
    if not m:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def hnf(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns (H, U) with H = U @ m, U unimodular.  Convention: pivots are
    positive and strictly to the right of the pivot in the row above,
    entries above each pivot are reduced into [0, pivot), zero rows sink to
    the bottom.  With this convention H is the unique canonical form of the
    row lattice of m.
    """
    h = [list(row) for row in m]
    rows = len(h)
    cols = len(h[0]) if rows else 0
    u = identity(rows)
    r = 0
    for c in range(cols):
        # gcd out column c below row r using unimodular row ops
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            if h[r][c] == 0:
                h[r], h[i] = h[i], h[r]
                u[r], u[i] = u[i], u[r]
                continue
            g, x, y = xgcd(h[r][c], h[i][c])
            p, q = h[r][c] // g, h[i][c] // g
            h[r], h[i] = (
                [x * a + y * b for a, b in zip(h[r], h[i])],
                [-q * a + p * b for a, b in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * a + y * b for a, b in zip(u[r], u[i])],
                [-q * a + p * b for a, b in zip(u[r], u[i])],
            )
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-a for a in h[r]]
            u[r] = [-a for a in u[r]]
        for i in range(r):  # reduce entries above the pivot into [0, pivot)
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
        if r == rows:
            break
    return h, u


def snf(m: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form of an integer matrix.

    Returns (S, U, V) with S = U @ m @ V, U and V unimodular, S diagonal
    with nonnegative entries s_1 | s_2 | ... .
    """
    s = [list(row) for row in m]
    rows = len(s)
    cols = len(s[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def clear_position(k: int) -> None:
        # Bring gcd of the trailing block to (k, k), zero its row and column.
        while True:
            # pick a nonzero entry with minimal absolute value as pivot
            pivot = None
            for i in range(k, rows):
                for j in range(k, cols):
                    if s[i][j] != 0 and (pivot is None or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                return
            pi, pj = pivot
            if pi != k:
                s[k], s[pi] = s[pi], s[k]
                u[k], u[pi] = u[pi], u[k]
            if pj != k:
                for row in s:
                    row[k], row[pj] = row[pj], row[k]
                for row in v:
                    row[k], row[pj] = row[pj], row[k]
            done = True
            for i in range(k + 1, rows):
                q = s[i][k] // s[k][k]
                if q:
                    s[i] = [a - q * b for a, b in zip(s[i], s[k])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[k])]
                if s[i][k] != 0:
                    done = False
            for j in range(k + 1, cols):
                q = s[k][j] // s[k][k]
                if q:
                    for row in s:
                        row[j] -= q * row[k]
                    for row in v:
                        row[j] -= q * row[k]
                if s[k][j] != 0:
                    done = False
            if done:
                return

    for k in range(min(rows, cols)):
        clear_position(k)
        if s[k][k] == 0:
            break
        # enforce the divisibility chain: fold an offending column into
        # column k, then re-clear; the pivot drops to a gcd each round
        while True:
            bad_col = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if s[i][j] % s[k][k] != 0:
                        bad_col = j
                        break
                if bad_col is not None:
                    break
            if bad_col is None:
                break
            for row in s:
                row[k] += row[bad_col]
            for row in v:
                row[k] += row[bad_col]
            clear_position(k)
    for k in range(min(rows, cols)):
        if s[k][k] < 0:
            s[k] = [-a for a in s[k]]
            u[k] = [-a for a in u[k]]
    return s, u, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form, without trailing zeros beyond min(shape)."""
    s, _, _ = snf(m)
    return [s[i][i] for i in range(min(len(s), len(s[0]) if s else 0))]


def solve_exact(a, b: Sequence) -> list[Fraction]:
    """Solve A x = b exactly for square nonsingular A (column convention).

    Raises SingularMatrixError when det(A) = 0.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise ValueError("solve_exact needs a square system")
    aug = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular at column {c}")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def inverse(a) -> list[list[Fraction]]:
    """Exact inverse of a square nonsingular matrix."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"matrix is singular at column {c}")
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def integer_row_kernel(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the left integer kernel {x in Z^rows : x @ m = 0}.

    The returned rows extend to a basis of Z^rows (they come from a
    unimodular transform), so the kernel is returned saturated.
    """
    s, u, _ = snf(m)
    rows = len(m)
    cols = len(m[0]) if m else 0
    kernel = []
    for i in range(rows):
        diag = s[i][i] if i < min(rows, cols) else 0
        if diag == 0:
            kernel.append(list(u[i]))
    return kernel


def iroot_floor(n: int, k: int) -> int:
    """Largest integer r with r**k <= n, for n >= 0, k >= 1."""
    if n < 0 or k < 1:
        raise ValueError("iroot_floor needs n >= 0, k >= 1")
    if n == 0:
        return 0
    r = int(round(n ** (1.0 / k)))
    while r > 0 and r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r
