"""Exact integer and rational linear algebra.

Matrices are lists of rows of ints (or Fractions where stated).  The
Smith normal form is computed with explicit unimodular transforms, which
is what the homology computations need; sympy is reserved for polynomial
work elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

Matrix = List[List[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def eye(n: int) -> Matrix:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    m, k, n = len(A), len(B), len(B[0]) if B else 0
    out = zeros(m, n)
    for i in range(m):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(n):
                    row[j] += a * Bt[j]
    return out


def mat_vec(A: Matrix, v: list) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)] if A else []


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return A == B


@dataclass
class SmithForm:
    """D = U * A * V with U, V unimodular; D diagonal with d_i | d_{i+1}.

    Uinv and Vinv are maintained alongside so that A = Uinv * D * Vinv.
    """

    D: Matrix
    U: Matrix
    V: Matrix
    Uinv: Matrix
    Vinv: Matrix

    @property
    def rank(self) -> int:
        r = 0
        for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)):
            if self.D[i][i] != 0:
                r += 1
        return r

    def invariant_factors(self) -> list:
        return [self.D[i][i] for i in range(self.rank)]


def smith_normal_form(A: Matrix) -> SmithForm:
    m = len(A)
    n = len(A[0]) if m else 0
    D = [row[:] for row in A]
    U, Uinv = eye(m), eye(m)
    V, Vinv = eye(n), eye(n)

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def row_add(i, j, c):  # row_i += c * row_j
        for t in range(n):
            D[i][t] += c * D[j][t]
        for t in range(m):
            U[i][t] += c * U[j][t]
        for r in Uinv:
            r[j] -= c * r[i]

    def row_neg(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        for r in Uinv:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def col_add(i, j, c):  # col_i += c * col_j
        for r in D:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]
        for t in range(n):
            Vinv[j][t] -= c * Vinv[i][t]

    def col_neg(i):
        for r in D:
            r[i] = -r[i]
        for r in V:
            r[i] = -r[i]
        Vinv[i] = [-x for x in Vinv[i]]

    k = 0
    while k < min(m, n):
        # find a pivot
        piv = None
        for i in range(k, m):
            for j in range(k, n):
                if D[i][j] != 0:
                    if piv is None or abs(D[i][j]) < abs(D[piv[0]][piv[1]]):
                        piv = (i, j)
        if piv is None:
            break
        i, j = piv
        if i != k:
            row_swap(k, i)
        if j != k:
            col_swap(k, j)
        if D[k][k] < 0:
            row_neg(k)
        # clear column and row; restart if a remainder shrinks the pivot
        dirty = False
        for i in range(k + 1, m):
            if D[i][k]:
                q = D[i][k] // D[k][k]
                row_add(i, k, -q)
                if D[i][k]:
                    dirty = True
        for j in range(k + 1, n):
            if D[k][j]:
                q = D[k][j] // D[k][k]
                col_add(j, k, -q)
                if D[k][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility d_k | D[i][j]
        fixed = True
        for i in range(k + 1, m):
            for j in range(k + 1, n):
                if D[i][j] % D[k][k] != 0:
                    row_add(k, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            k += 1
    return SmithForm(D, U, V, Uinv, Vinv)


def kernel_basis(A: Matrix) -> Matrix:
    """Columns spanning ker(A) over Z, returned as a list of columns."""
    m = len(A)
    n = len(A[0]) if m else 0
    if n == 0:
        return []
    snf = smith_normal_form(A)
    r = snf.rank
    cols = []
    for j in range(r, n):
        cols.append([snf.V[i][j] for i in range(n)])
    return cols


def solve_int(A: Matrix, b: list) -> Optional[list]:
    """One integer solution x of A x = b, or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    snf = smith_normal_form(A)
    c = mat_vec(snf.U, b)
    y = [0] * n
    for i in range(m):
        d = snf.D[i][i] if i < min(m, n) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return mat_vec(snf.V, y)


def solve_rational(A: List[List[Fraction]], b: List[Fraction]) -> Optional[List[Fraction]]:
    """Unique-or-none solve of a square (or overdetermined consistent)
    system by fraction-free Gaussian elimination with back-substitution."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(A)]
    row = 0
    pivots = []
    for col in range(n):
        p = next((r for r in range(row, m) if M[r][col] != 0), None)
        if p is None:
            return None  # not full column rank: no unique solution
        M[row], M[p] = M[p], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    if len(pivots) < n:
        return None
    for r in range(row, m):
        if M[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def det_int(A: Matrix) -> int:
    """Determinant via fraction-free elimination."""
    n = len(A)
    M = [[Fraction(x) for x in row] for row in A]
    det = Fraction(1)
    for col in range(n):
        p = next((r for r in range(col, n) if M[r][col] != 0), None)
        if p is None:
            return 0
        if p != col:
            M[col], M[p] = M[p], M[col]
            det = -det
        det *= M[col][col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(col + 1, n):
            if M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    assert det.denominator == 1
    return int(det)


def gf2_rank(vectors: List[list]) -> int:
    """Rank over the two-element field."""
    basis: List[int] = []
    rank = 0
    for v in vectors:
        bits = 0
        for i, x in enumerate(v):
            if x % 2:
                bits |= 1 << i
        for b in basis:
            low = b & -b
            if bits & low:
                bits ^= b
        if bits:
            basis.append(bits)
            rank += 1
    return rank
