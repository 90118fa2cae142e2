"""Pure-Python integer normal-form kernels (fallback for the compiled core).

`hnf_span_rows` and `snf_core` are the hot loops of the whole library; the
Cython twin in `_normcore.pyx` implements the same algorithms with typed
indices. Keep the two files in sync.
"""

from __future__ import annotations

from math import gcd


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hnf_span_rows(mat: list[list[int]]) -> list[list[int]]:
    """Canonical row Hermite form of the Z-span of the rows (zero rows dropped).

    Output rows have strictly increasing pivot columns, positive pivots, and
    entries above each pivot reduced into [0, pivot).
    """
    if not mat:
        return []
    ncols = len(mat[0])
    basis: list[list[int]] = []  # echelon rows, pivot col strictly increasing
    pivot_col: list[int] = []
    pending = [list(row) for row in mat]
    while pending:
        vec = pending.pop()
        while True:
            j = -1
            for k in range(ncols):
                if vec[k]:
                    j = k
                    break
            if j < 0:
                break
            # find insertion point among current pivots
            pos = 0
            while pos < len(basis) and pivot_col[pos] < j:
                pos += 1
            if pos == len(basis) or pivot_col[pos] != j:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                basis.insert(pos, vec)
                pivot_col.insert(pos, j)
                break
            row = basis[pos]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for k in range(j, ncols):
                    vec[k] -= q * row[k]
            else:
                g, x, y = _xgcd(a, b)
                if g < 0:
                    g, x, y = -g, -x, -y
                new = [x * row[k] + y * vec[k] for k in range(ncols)]
                qa, qb = a // g, b // g
                old = [row[k] - qa * new[k] for k in range(ncols)]
                vec = [vec[k] - qb * new[k] for k in range(ncols)]
                basis[pos] = new
                if any(old):
                    pending.append(old)
    # reduce entries above each pivot, left to right so later columns stay fixed
    for i in range(len(basis)):
        j = pivot_col[i]
        p = basis[i][j]
        for r in range(i):
            q = basis[r][j] // p
            if q:
                row_r, row_i = basis[r], basis[i]
                for k in range(j, ncols):
                    row_r[k] -= q * row_i[k]
    return basis


def snf_core(
    mat: list[list[int]],
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form with unimodular transforms: U*mat*V = diag(d1|d2|...).

    Returns (diagonal of length min(r,c), U, V).
    """
    r = len(mat)
    c = len(mat[0]) if r else 0
    m = [list(row) for row in mat]
    u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        if q:
            md, ms = m[dst], m[src]
            for k in range(c):
                md[k] += q * ms[k]
            ud, us = u[dst], u[src]
            for k in range(r):
                ud[k] += q * us[k]

    def add_col(dst, src, q):
        if q:
            for row in m:
                row[dst] += q * row[src]
            for row in v:
                row[dst] += q * row[src]

    n = min(r, c)
    for t in range(n):
        # Gcd-descent pivoting: re-select the smallest-magnitude entry of the
        # whole trailing block before every clearing pass, and only accept a
        # pivot once it also divides every entry of the block.  Each repeat of
        # the loop leaves a nonzero floor remainder (strictly smaller than the
        # current pivot) somewhere in the block, so the pivot magnitude
        # strictly decreases and the loop terminates; keeping the pivot equal
        # to the running gcd is what stops intermediate entries exploding.
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    if m[i][j] and (best is None or abs(m[i][j]) < best[0]):
                        best = (abs(m[i][j]), i, j)
            if best is None:
                break  # trailing block is zero: remaining diagonal stays 0
            _, bi, bj = best
            if bi != t:
                swap_rows(t, bi)
            if bj != t:
                swap_cols(t, bj)
            if m[t][t] < 0:
                m[t] = [-x for x in m[t]]
                u[t] = [-x for x in u[t]]
            p = m[t][t]
            clean = True
            for i in range(t + 1, r):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
                    if m[i][t]:
                        clean = False
            if not clean:
                continue
            for j in range(t + 1, c):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
                    if m[t][j]:
                        clean = False
            if not clean:
                continue
            witness = -1
            for i in range(t + 1, r):
                if any(m[i][j] % p for j in range(t + 1, c)):
                    witness = i
                    break
            if witness < 0:
                break
            # pull a non-divisible entry into row t; the next pass shrinks p
            add_row(t, witness, 1)
        if m[t][t] == 0:
            break
    for t in range(n):
        if m[t][t] < 0:
            for k in range(c):
                m[t][k] = -m[t][k]
            for k in range(r):
                u[t][k] = -u[t][k]
    # enforce the divisibility chain with exact 2x2 fixes
    changed = True
    while changed:
        changed = False
        for t in range(n - 1):
            a, b = m[t][t], m[t + 1][t + 1]
            if a and b % a != 0:
                changed = True
                g, x, y = _xgcd(a, b)
                lcm_ab = a // g * b
                # U-side 2x2 block [[x, y], [-b/g, a/g]], V-side [[1, -y*b/g], [1, x*a/g]]
                bq, aq = b // g, a // g
                for k in range(r):
                    s, w = u[t][k], u[t + 1][k]
                    u[t][k] = x * s + y * w
                    u[t + 1][k] = -bq * s + aq * w
                for row in v:
                    s, w = row[t], row[t + 1]
                    row[t] = s + w
                    row[t + 1] = -y * bq * s + x * aq * w
                m[t][t], m[t + 1][t + 1] = g, lcm_ab
            elif a == 0 and b != 0:
                # push zeros to the end of the chain
                changed = True
                swap_rows(t, t + 1)
                swap_cols(t, t + 1)
    diag = [m[t][t] for t in range(n)]
    return diag, u, v
