"""Integer and rational row normal forms: Hermite form, Smith form, kernels.

All matrices are lists of rows. The heavy inner loops live in a compiled
extension when it was built (`cyclostark._normcore`); otherwise the identical
pure-Python implementation is used. Set ``CYCLOSTARK_PURE=1`` to force the
fallback, e.g. for benchmarking.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm

from cyclostark import _normpure

if os.environ.get("CYCLOSTARK_PURE"):
    _kernel = _normpure
    BACKEND = "pure"
else:
    try:
        from cyclostark import _normcore as _kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _kernel = _normpure
        BACKEND = "pure"

__all__ = [
    "BACKEND",
    "hnf",
    "hnf_rational",
    "integer_kernel",
    "integer_row_span",
    "reduce_row",
    "reduce_row_rational",
    "snf",
    "snf_invariants",
]


def _check_int_matrix(mat: list[list[int]]) -> None:
    if not mat:
        return
    width = len(mat[0])
    for row in mat:
        if len(row) != width:
            raise ValueError("matrix rows have inconsistent lengths")


def integer_row_span(mat: list[list[int]]) -> list[list[int]]:
    """Canonical Hermite basis of the Z-span of the rows; zero rows dropped."""
    _check_int_matrix(mat)
    return _kernel.hnf_span_rows(mat)


def hnf(mat: list[list[int]]) -> list[list[int]]:
    """Hermite normal form of a matrix with Z-independent rows.

    Raises ValueError for rank-deficient input, identifying the first row
    that is dependent on the rows before it.
    """
    _check_int_matrix(mat)
    span = integer_row_span(mat)
    if len(span) == len(mat):
        return span
    for i in range(len(mat)):
        if len(integer_row_span(mat[: i + 1])) < i + 1:
            raise ValueError(
                f"rank-deficient input: row {i} is linearly dependent on rows 0..{i - 1}"
                if i
                else "rank-deficient input: row 0 is zero"
            )
    raise AssertionError("unreachable")


def hnf_rational(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    """Hermite form over Q of a full-row-rank matrix of Fractions.

    Computed by clearing denominators, running the integer Hermite form, and
    scaling back, so the result is the canonical basis of the Q-row-space
    intersected with the scaled integer lattice. Rows must be independent.
    """
    if not mat:
        return []
    scale = lcm(*(f.denominator for row in mat for f in row)) if mat[0] else 1
    imat = [[int(f * scale) for f in row] for row in mat]
    return [[Fraction(x, scale) for x in row] for row in hnf(imat)]


def reduce_row(vec: list[int], hnf_rows: list[list[int]]) -> tuple[bool, list[int] | None]:
    """Test membership of an integer vector in the Z-span of Hermite rows.

    Returns (True, coeffs) with vec == sum(coeffs[i] * hnf_rows[i]), or
    (False, None).
    """
    rem = list(vec)
    coeffs: list[int] = []
    for row in hnf_rows:
        j = next(k for k, x in enumerate(row) if x)
        q, r = divmod(rem[j], row[j])
        if r:
            return False, None
        coeffs.append(q)
        if q:
            rem = [rem[k] - q * row[k] for k in range(len(rem))]
    if any(rem):
        return False, None
    return True, coeffs


def reduce_row_rational(
    vec: list[Fraction], rows: list[list[Fraction]]
) -> tuple[bool, list[Fraction] | None]:
    """Express a rational vector as a Q-combination of the given rows."""
    sol = _resolve_rational_coeffs([Fraction(x) for x in vec], rows)
    if sol is None:
        return False, None
    return True, sol


def _resolve_rational_coeffs(
    vec: list[Fraction], rows: list[list[Fraction]]
) -> list[Fraction] | None:
    """Solve x * rows == vec exactly by Gaussian elimination on the transpose."""
    n = len(rows)
    width = len(vec)
    # augmented system: columns are equations
    aug = [[Fraction(rows[i][k]) for i in range(n)] + [Fraction(vec[k])] for k in range(width)]
    pivots: list[tuple[int, int]] = []
    row_at = 0
    for col in range(n):
        sel = next((r for r in range(row_at, width) if aug[r][col]), None)
        if sel is None:
            continue
        aug[row_at], aug[sel] = aug[sel], aug[row_at]
        prow = aug[row_at]
        inv = 1 / prow[col]
        for k in range(col, n + 1):
            prow[k] *= inv
        for r in range(width):
            if r != row_at and aug[r][col]:
                f = aug[r][col]
                for k in range(col, n + 1):
                    aug[r][k] -= f * prow[k]
        pivots.append((row_at, col))
        row_at += 1
    for r in range(row_at, width):
        if aug[r][n]:
            return None
    sol = [Fraction(0)] * n
    for r, col in pivots:
        sol[col] = aug[r][n]
    return sol


def snf(mat: list[list[int]]) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form: (invariants, U, V) with U*mat*V diagonal.

    U and V are unimodular; the invariants satisfy d1 | d2 | ... with zeros
    last, and have length min(rows, cols).
    """
    _check_int_matrix(mat)
    if not mat or not mat[0]:
        size = len(mat)
        return [], [[1 if i == j else 0 for j in range(size)] for i in range(size)], []
    return _kernel.snf_core(mat)


def snf_invariants(mat: list[list[int]]) -> list[int]:
    """Diagonal of the Smith normal form (length min(rows, cols))."""
    return snf(mat)[0]


def integer_kernel(mat: list[list[int]]) -> list[list[int]]:
    """Basis of the left kernel {x in Z^rows : x * mat == 0}."""
    _check_int_matrix(mat)
    rows = len(mat)
    if rows == 0:
        return []
    cols = len(mat[0])
    aug = [list(mat[i]) + [1 if k == i else 0 for k in range(rows)] for i in range(rows)]
    span = integer_row_span(aug)
    kernel = [row[cols:] for row in span if not any(row[:cols])]
    return kernel
