# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled integer normal-form kernels.

Twin of `_normpure.py`: same algorithms, typed loop indices. Matrix entries
stay Python ints (they grow past machine size in real workloads), so the win
comes from the tight index arithmetic, not from C integer math.
"""


cdef tuple _xgcd(old_r, old_s, old_t, r, s, t):
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hnf_span_rows(mat):
    """Canonical row Hermite form of the Z-span of the rows (zero rows dropped)."""
    cdef Py_ssize_t ncols, nbasis, j, k, pos, i, rr
    if not mat:
        return []
    ncols = len(mat[0])
    cdef list basis = []
    cdef list pivot_col = []
    cdef list pending = [list(row) for row in mat]
    cdef list vec, row, new, old, row_r, row_i
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
            nbasis = len(basis)
            pos = 0
            while pos < nbasis and <Py_ssize_t> pivot_col[pos] < j:
                pos += 1
            if pos == nbasis or <Py_ssize_t> pivot_col[pos] != j:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                basis.insert(pos, vec)
                pivot_col.insert(pos, j)
                break
            row = basis[pos]
            a = row[j]
            b = vec[j]
            if b % a == 0:
                q = b // a
                for k in range(j, ncols):
                    vec[k] = vec[k] - q * row[k]
            else:
                g, x, y = _xgcd(a, 1, 0, b, 0, 1)
                if g < 0:
                    g, x, y = -g, -x, -y
                new = [x * row[k] + y * vec[k] for k in range(ncols)]
                qa = a // g
                qb = b // g
                old = [row[k] - qa * new[k] for k in range(ncols)]
                vec = [vec[k] - qb * new[k] for k in range(ncols)]
                basis[pos] = new
                if any(old):
                    pending.append(old)
    nbasis = len(basis)
    for i in range(nbasis):
        j = pivot_col[i]
        p = basis[i][j]
        for rr in range(i):
            q = basis[rr][j] // p
            if q:
                row_r = basis[rr]
                row_i = basis[i]
                for k in range(j, ncols):
                    row_r[k] = row_r[k] - q * row_i[k]
    return basis


def snf_core(mat):
    """Smith normal form with unimodular transforms: U*mat*V = diag(d1|d2|...)."""
    cdef Py_ssize_t r, c, n, t, i, j, k, bi, bj
    cdef bint changed
    r = len(mat)
    c = len(mat[0]) if r else 0
    cdef list m = [list(row) for row in mat]
    cdef list u = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    cdef list v = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    cdef list md, ms, ud, us, row

    n = r if r < c else c
    cdef bint clean
    cdef Py_ssize_t witness
    for t in range(n):
        # Gcd-descent pivoting: re-select the smallest-magnitude entry of the
        # whole trailing block before every clearing pass, and only accept a
        # pivot once it also divides every entry of the block.  Each repeat
        # leaves a nonzero floor remainder strictly smaller than the current
        # pivot, so the pivot magnitude strictly decreases and the loop
        # terminates; pinning the pivot to the running gcd is what stops
        # intermediate entries exploding.
        while True:
            best = None
            bi = -1
            bj = -1
            for i in range(t, r):
                row = m[i]
                for j in range(t, c):
                    e = row[j]
                    if e:
                        ae = -e if e < 0 else e
                        if best is None or ae < best:
                            best = ae
                            bi = i
                            bj = j
            if best is None:
                break  # trailing block is zero: remaining diagonal stays 0
            if bi != t:
                m[t], m[bi] = m[bi], m[t]
                u[t], u[bi] = u[bi], u[t]
            if bj != t:
                for row in m:
                    row[t], row[bj] = row[bj], row[t]
                for row in v:
                    row[t], row[bj] = row[bj], row[t]
            if m[t][t] < 0:
                m[t] = [-x for x in m[t]]
                u[t] = [-x for x in u[t]]
            p = m[t][t]
            clean = True
            for i in range(t + 1, r):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        md = m[i]
                        ms = m[t]
                        for k in range(c):
                            md[k] = md[k] - q * ms[k]
                        ud = u[i]
                        us = u[t]
                        for k in range(r):
                            ud[k] = ud[k] - q * us[k]
                    if m[i][t]:
                        clean = False
            if not clean:
                continue
            for j in range(t + 1, c):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        for row in m:
                            row[j] = row[j] - q * row[t]
                        for row in v:
                            row[j] = row[j] - q * row[t]
                    if m[t][j]:
                        clean = False
            if not clean:
                continue
            witness = -1
            for i in range(t + 1, r):
                md = m[i]
                for j in range(t + 1, c):
                    if md[j] % p:
                        witness = i
                        break
                if witness >= 0:
                    break
            if witness < 0:
                break
            # pull a non-divisible entry into row t; the next pass shrinks p
            md = m[t]
            ms = m[witness]
            for k in range(c):
                md[k] = md[k] + ms[k]
            ud = u[t]
            us = u[witness]
            for k in range(r):
                ud[k] = ud[k] + us[k]
        if m[t][t] == 0:
            break
    for t in range(n):
        if m[t][t] < 0:
            md = m[t]
            for k in range(c):
                md[k] = -md[k]
            ud = u[t]
            for k in range(r):
                ud[k] = -ud[k]
    changed = True
    while changed:
        changed = False
        for t in range(n - 1):
            a = m[t][t]
            b = m[t + 1][t + 1]
            if a and b % a != 0:
                changed = True
                g, x, y = _xgcd(a, 1, 0, b, 0, 1)
                lcm_ab = a // g * b
                bq = b // g
                aq = a // g
                for k in range(r):
                    s = u[t][k]
                    w = u[t + 1][k]
                    u[t][k] = x * s + y * w
                    u[t + 1][k] = aq * w - bq * s
                for row in v:
                    s = row[t]
                    w = row[t + 1]
                    row[t] = s + w
                    row[t + 1] = x * aq * w - y * bq * s
                m[t][t] = g
                m[t + 1][t + 1] = lcm_ab
            elif a == 0 and b != 0:
                changed = True
                m[t], m[t + 1] = m[t + 1], m[t]
                u[t], u[t + 1] = u[t + 1], u[t]
                for row in m:
                    row[t], row[t + 1] = row[t + 1], row[t]
                for row in v:
                    row[t], row[t + 1] = row[t + 1], row[t]
    cdef list diag = [m[t][t] for t in range(n)]
    return diag, u, v
