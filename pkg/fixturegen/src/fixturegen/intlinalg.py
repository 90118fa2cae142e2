"""Small exact integer-lattice helpers used by the generators.

Three operations are needed: the canonical row Hermite normal form of a
lattice given by spanning rows (upper triangular, positive pivots, entries
above each pivot reduced into [0, pivot)), the left kernel of an integer
matrix, and the sublattice of integer vectors whose weighted sum vanishes
modulo a given modulus.
"""

from typing import List, Sequence


def row_hnf(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Canonical upper-triangular row HNF of the span of ``rows``.

    Zero rows are dropped, pivots are positive, and every entry above a
    pivot is reduced into [0, pivot).
    """
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return []
    cols = len(mat[0])
    for r in mat:
        if len(r) != cols:
            raise ValueError("ragged matrix")
    pivot_row = 0
    for col in range(cols):
        row = pivot_row
        while True:
            nonzero = [i for i in range(row, len(mat)) if mat[i][col]]
            if not nonzero:
                break
            i0 = min(nonzero, key=lambda i: abs(mat[i][col]))
            mat[row], mat[i0] = mat[i0], mat[row]
            if mat[row][col] < 0:
                mat[row] = [-x for x in mat[row]]
            p = mat[row][col]
            done = True
            for i in range(row + 1, len(mat)):
                if mat[i][col]:
                    q = mat[i][col] // p
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
                    if mat[i][col]:
                        done = False
            if done:
                break
        if row < len(mat) and mat[row][col]:
            p = mat[row][col]
            for i in range(row):
                q = mat[i][col] // p
                if q:
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
            pivot_row += 1
    return [r for r in mat[:pivot_row]]


def left_kernel(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """HNF basis of {v in Z^n : v * M == 0} for the n-row matrix M."""
    mat = [list(map(int, r)) for r in rows]
    n = len(mat)
    if n == 0:
        return []
    cols = len(mat[0])
    for r in mat:
        if len(r) != cols:
            raise ValueError("ragged matrix")
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pivot_row = 0
    for col in range(cols):
        row = pivot_row
        while True:
            nonzero = [i for i in range(row, n) if mat[i][col]]
            if not nonzero:
                break
            i0 = min(nonzero, key=lambda i: abs(mat[i][col]))
            mat[row], mat[i0] = mat[i0], mat[row]
            u[row], u[i0] = u[i0], u[row]
            if mat[row][col] < 0:
                mat[row] = [-x for x in mat[row]]
                u[row] = [-x for x in u[row]]
            p = mat[row][col]
            done = True
            for i in range(row + 1, n):
                if mat[i][col]:
                    q = mat[i][col] // p
                    mat[i] = [a - q * b for a, b in zip(mat[i], mat[row])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[row])]
                    if mat[i][col]:
                        done = False
            if done:
                break
        if row < n and mat[row][col]:
            pivot_row += 1
    return row_hnf(u[pivot_row:])


def congruence_kernel(weights: Sequence[int], modulus: int) -> List[List[int]]:
    """HNF basis of {v in Z^r : sum(v_i * weights_i) == 0 mod modulus}."""
    r = len(weights)
    if modulus <= 0:
        raise ValueError("modulus must be positive")
    # Left kernel of the single-column matrix (w_1, ..., w_r, modulus)^T,
    # projected onto the first r coordinates.
    column = [int(w) for w in weights] + [int(modulus)]
    n = len(column)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    # Fold every entry into the first one by extended-gcd row moves on
    # (column | u); afterwards rows 2..n of u span the left kernel.
    for i in range(1, n):
        a, b = column[0], column[i]
        if b == 0:
            continue
        # extended gcd of a and b
        old_r, r_ = a, b
        old_s, s_ = 1, 0
        old_t, t_ = 0, 1
        while r_:
            q = old_r // r_
            old_r, r_ = r_, old_r - q * r_
            old_s, s_ = s_, old_s - q * s_
            old_t, t_ = t_, old_t - q * t_
        g = old_r
        x, y = old_s, old_t  # x*a + y*b == g
        row0 = [x * p + y * q for p, q in zip(u[0], u[i])]
        rowi = [-(b // g) * p + (a // g) * q for p, q in zip(u[0], u[i])]
        u[0], u[i] = row0, rowi
        column[0], column[i] = g, 0
    kernel_rows = [row[:r] for row in u[1:]]
    return row_hnf(kernel_rows)
