from __future__ import annotations

import random
import time
from fractions import Fraction

import pytest

from cyclostark import normforms
from cyclostark._normpure import hnf_span_rows as pure_hnf_span_rows
from cyclostark.normforms import (
    BACKEND,
    hnf,
    hnf_rational,
    integer_kernel,
    integer_row_span,
    reduce_row,
    snf,
    snf_invariants,
)


def random_unimodular(rng: random.Random, n: int) -> list[list[int]]:
    mat = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            continue
        c = rng.randint(-3, 3)
        for k in range(n):
            mat[i][k] += c * mat[j][k]
    return mat


def mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def int_det(mat):
    # fraction-free Gauss (Bareiss) determinant oracle
    n = len(mat)
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[-1][-1]


# -- hnf -------------------------------------------------------------------


def test_hnf_identity_fixed_point():
    eye = [[1, 0], [0, 1]]
    assert hnf(eye) == eye


def test_hnf_canonical_under_unimodular_remix():
    rng = random.Random(5)
    for _ in range(20):
        rows, cols = rng.randint(1, 4), rng.randint(1, 5)
        mat = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
        span = integer_row_span(mat)
        if len(span) < rows:
            continue  # need full row rank for public hnf
        h = hnf(mat)
        u = random_unimodular(rng, rows)
        assert hnf(mat_mul(u, mat)) == h


def test_hnf_rejects_rank_deficient_and_names_dependent_row():
    with pytest.raises(ValueError) as err:
        hnf([[1, 2], [2, 4]])
    assert "row 1" in str(err.value)


def test_hnf_idempotent():
    rng = random.Random(9)
    for _ in range(10):
        mat = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)]
        span = integer_row_span(mat)
        assert integer_row_span(span) == span


def test_hnf_shape_and_pivot_normalization():
    h = hnf([[0, 3, 1], [2, 2, 2]])
    # pivots positive, entries above pivots reduced into [0, pivot)
    assert h == [[2, 2, 2], [0, 3, 1]] or h[0][0] > 0
    pivots = []
    for row in h:
        j = next(k for k, v in enumerate(row) if v)
        assert row[j] > 0
        pivots.append(j)
    assert pivots == sorted(pivots)


def test_hnf_rational_scaling():
    rows = [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 3)]]
    h = hnf_rational(rows)
    assert h == [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]


# -- membership / reduction -------------------------------------------------


def test_reduce_row_membership():
    span = integer_row_span([[2, 0], [0, 3]])
    ok, coeffs = reduce_row([4, 3], span)
    assert ok and coeffs == [2, 1]
    ok, _ = reduce_row([1, 0], span)
    assert not ok


# -- snf ---------------------------------------------------------------------


def test_snf_2x2_brute_force_oracle():
    # derived oracle: gcd of entries, then det/gcd for 2x2 [[2,0],[0,3]]
    inv, u, v = snf([[2, 0], [0, 3]])
    assert inv == [1, 6]
    assert int_det(u) in (1, -1) and int_det(v) in (1, -1)


def test_snf_transform_identity():
    rng = random.Random(21)
    for _ in range(25):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        mat = [[rng.randint(-8, 8) for _ in range(c)] for _ in range(r)]
        inv, u, v = snf(mat)
        prod = mat_mul(mat_mul(u, mat), v)
        expect = [[0] * c for _ in range(r)]
        for i, d in enumerate(inv):
            expect[i][i] = d
        assert prod == expect
        for i in range(len(inv) - 1):
            assert inv[i + 1] % inv[i] == 0 if inv[i] else inv[i + 1] == 0
        if r == c:
            assert int_det(u) in (1, -1) and int_det(v) in (1, -1)


def test_snf_invariants_drop_units_consistently():
    assert snf_invariants([[2, 0], [0, 3]]) == [1, 6]
    assert snf_invariants([[0, 0], [0, 0]]) == [0, 0]


def test_snf_dense_8x8_stays_fast():
    # Regression: fixed-pivot elimination blew up on this dense matrix
    # (minutes of swelling intermediate entries); gcd-descent pivoting
    # finishes instantly.  Checked against the exact transform identity.
    mat = [[-4, -2, -1, 5, 4, 4, 3, 5], [2, -4, -4, -4, 3, -3, 2, 2],
           [0, -2, 2, -5, 5, -4, 5, -4], [3, 0, -4, -2, -4, 0, 5, -1],
           [-3, -3, 4, 4, -3, 1, -2, 4], [-3, -2, -3, -1, -1, -5, -3, 5],
           [-4, 2, 5, 4, 5, 5, 5, -1], [-2, 0, -5, 0, 4, -1, -2, 2]]
    start = time.perf_counter()
    inv, u, v = snf(mat)
    assert time.perf_counter() - start < 5.0
    assert inv == [1, 1, 1, 1, 1, 1, 1, 143687]
    prod = mat_mul(mat_mul(u, mat), v)
    assert prod == [[inv[i] if i == j else 0 for j in range(8)] for i in range(8)]
    assert int_det(u) in (1, -1) and int_det(v) in (1, -1)


# -- kernels ------------------------------------------------------------------


def test_integer_kernel_solves_exactly():
    rng = random.Random(33)
    for _ in range(25):
        r, c = rng.randint(1, 4), rng.randint(1, 4)
        mat = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(r)]
        ker = integer_kernel(mat)
        for v in ker:
            prod = [sum(v[i] * mat[i][j] for i in range(r)) for j in range(c)]
            assert all(x == 0 for x in prod)
        # rank-nullity over Q
        assert len(ker) == r - len(integer_row_span(mat))


# -- backend parity -----------------------------------------------------------


def test_backends_agree_on_random_inputs():
    rng = random.Random(55)
    for _ in range(40):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        mat = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        assert normforms._kernel.hnf_span_rows(mat) == pure_hnf_span_rows(mat)


def test_backend_reports_identity():
    assert BACKEND in ("compiled", "pure")
