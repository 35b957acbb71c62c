"""Exact rational linear algebra and certified scalar bounds.

Everything here works over ``fractions.Fraction`` (or plain ints) so that
the callers never depend on floating point for a correctness-critical
quantity.  The square-root helpers return one-sided rational bounds; the
eigenvalue helper returns a rational lower bound for the smallest
eigenvalue of a symmetric positive definite integer matrix together with
an exact positive-definiteness certificate.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

_SQRT_SCALE = 1 << 64


def sqrt_lower(x: Fraction | int) -> Fraction:
    """Rational lower bound for sqrt(x), x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative argument")
    n = (x.numerator * _SQRT_SCALE * _SQRT_SCALE) // x.denominator
    return Fraction(isqrt(n), _SQRT_SCALE)


def sqrt_upper(x: Fraction | int) -> Fraction:
    """Rational upper bound for sqrt(x), x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("negative argument")
    n = -((-x.numerator * _SQRT_SCALE * _SQRT_SCALE) // x.denominator)  # ceil
    return Fraction(isqrt(n) + 1, _SQRT_SCALE)


def det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by fraction-preserving Gaussian elimination."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c] != 0:
                f = m[r][c] * inv
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def invert_matrix(rows) -> list[list[Fraction]]:
    """Exact inverse of a square matrix; raises on singular input."""
    n = len(rows)
    m = [[Fraction(v) for v in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [row[n:] for row in m]


def is_positive_definite(rows) -> bool:
    """Sylvester criterion with exact arithmetic."""
    n = len(rows)
    for k in range(1, n + 1):
        minor = [[Fraction(rows[i][j]) for j in range(k)] for i in range(k)]
        if det_fraction(minor) <= 0:
            return False
    return True


def min_eigenvalue_lower(rows, iters: int = 48) -> Fraction:
    """Certified rational lower bound for the least eigenvalue.

    The matrix must be symmetric positive definite.  Bisection on lambda
    with the exact test "rows - lambda*I is positive definite"; the
    returned value always satisfies the test, so x^T A x >= lambda |x|^2
    holds for every real x.
    """
    n = len(rows)
    if not is_positive_definite(rows):
        raise ValueError("matrix is not positive definite")
    hi = Fraction(max(sum(abs(v) for v in r) for r in rows))  # Gershgorin
    lo = Fraction(0)
    for _ in range(iters):
        mid = (lo + hi) / 2
        shifted = [[Fraction(rows[i][j]) - (mid if i == j else 0)
                    for j in range(n)] for i in range(n)]
        if is_positive_definite(shifted):
            lo = mid
        else:
            hi = mid
    return lo


def solve_linear(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly.

    Returns ``(solution, nullspace, consistent)`` where ``solution`` is a
    particular solution with free variables set to zero (or None when the
    system is inconsistent), ``nullspace`` is a basis of the homogeneous
    solution space, and ``consistent`` flags solvability.
    """
    nrows = len(matrix)
    ncols = len(matrix[0]) if nrows else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)]
           for row, b in zip(matrix, rhs)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [v * inv for v in aug[r]]
        for i in range(nrows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if aug[i][ncols] != 0:
            return None, [], False
    free = [c for c in range(ncols) if c not in pivots]
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -aug[i][f]
        basis.append(vec)
    return sol, basis, True
