"""Exact dense linear algebra over Q on lists of lists."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import PreconditionError
from .poly import Poly

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_mul(c, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = [list(map(Fraction, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{x : a x = 0}``; one free variable set to 1 per vector."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    r, pivots = rref(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for row, pc in enumerate(pivots):
            vec[pc] = -r[row][fcol]
        basis.append(vec)
    return basis


def det(a: Matrix) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    if any(len(row) != n for row in a):
        raise PreconditionError("determinant of a non-square matrix")
    m = [list(map(Fraction, row)) for row in a]
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            result = -result
        piv = m[c][c]
        result *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    return [row[n:] for row in r]


def charpoly(a: Matrix, var: str = "lam") -> Poly:
    """``det(var*I - a)`` by the Faddeev-LeVerrier recursion."""
    n = len(a)
    if n == 0:
        return Poly([1], var)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = zeros(n, n)
    for k in range(1, n + 1):
        am = mat_mul(a, mk)
        c_prev = coeffs[n - k + 1]
        mk = [[am[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        amk = mat_mul(a, mk)
        coeffs[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return Poly(coeffs, var)


def solve(a: Matrix, b: Sequence) -> list[Fraction]:
    """Unique solution of a square system."""
    inv = inverse(a)
    return [sum((x * Fraction(y) for x, y in zip(row, b)), Fraction(0)) for row in inv]
