"""Exact integer-lattice helpers: canonical form, kernels, congruence
sublattices.  Cross-checked against sympy's linear algebra."""

import random

import pytest
from sympy import Matrix

from fixturegen.intlinalg import congruence_kernel, left_kernel, row_hnf


def det(rows):
    return int(Matrix(rows).det())


# ---------------------------------------------------------------------------
# row_hnf


def test_hnf_fixed_examples():
    assert row_hnf([[2, 1], [0, 2]]) == [[2, 1], [0, 2]]
    assert row_hnf([[0, 2], [2, 1]]) == [[2, 1], [0, 2]]
    assert row_hnf([[1, 1], [2, 0]]) == [[1, 1], [0, 2]]
    assert row_hnf([[4], [6]]) == [[2]]
    assert row_hnf([]) == []
    assert row_hnf([[0, 0], [0, 0]]) == []


def test_hnf_pivots_positive_and_reduced():
    rows = row_hnf([[3, 7, 1], [-2, 4, 9], [5, 0, -3]])
    pivots = []
    for r in rows:
        lead = next(i for i, v in enumerate(r) if v)
        pivots.append(lead)
        assert r[lead] > 0
    assert pivots == sorted(pivots)
    for i, r in enumerate(rows):
        lead = next(j for j, v in enumerate(r) if v)
        for k in range(i):
            assert 0 <= rows[k][lead] < r[lead]


def test_hnf_is_invariant_under_unimodular_row_mixing():
    rng = random.Random(7)
    for _ in range(25):
        n = rng.randint(1, 4)
        c = rng.randint(1, 4)
        rows = [[rng.randint(-9, 9) for _ in range(c)] for _ in range(n)]
        mixed = [r[:] for r in rows]
        for _ in range(12):
            i, j = rng.randrange(n), rng.randrange(n)
            if i == j:
                continue
            q = rng.randint(-3, 3)
            mixed[i] = [a + q * b for a, b in zip(mixed[i], mixed[j])]
        rng.shuffle(mixed)
        assert row_hnf(rows) == row_hnf(mixed)


def test_hnf_ragged_matrix_is_rejected():
    with pytest.raises(ValueError, match="ragged"):
        row_hnf([[1, 2], [3]])


# ---------------------------------------------------------------------------
# left_kernel


def test_left_kernel_annihilates_and_has_full_corank():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.randint(1, 5)
        c = rng.randint(0, 4)
        mat = [[rng.randint(-6, 6) for _ in range(c)] for _ in range(n)]
        ker = left_kernel(mat)
        for v in ker:
            prod = [sum(v[i] * mat[i][j] for i in range(n)) for j in range(c)]
            assert all(x == 0 for x in prod)
        rank = Matrix(mat).rank() if c else 0
        assert len(ker) == n - rank


def test_left_kernel_of_zero_column_matrix_is_everything():
    assert left_kernel([[], [], []]) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_left_kernel_empty_matrix():
    assert left_kernel([]) == []


def test_left_kernel_is_saturated():
    # the kernel of a linear map contains every vector a multiple of which
    # it contains; check by HNF pivot products on a worked example
    ker = left_kernel([[2, 0], [0, 3], [2, 3]])
    assert ker == [[1, 1, -1]]


# ---------------------------------------------------------------------------
# congruence_kernel


def test_congruence_kernel_reproduces_the_worked_example():
    assert congruence_kernel([5, 6], 4) == [[2, 1], [0, 2]]


def test_congruence_kernel_membership_and_index():
    rng = random.Random(13)
    for _ in range(30):
        r = rng.randint(1, 4)
        modulus = rng.randint(2, 40)
        weights = [rng.randrange(modulus) for _ in range(r)]
        rows = congruence_kernel(weights, modulus)
        assert len(rows) == r
        for v in rows:
            assert sum(a * w for a, w in zip(v, weights)) % modulus == 0
        # the index of the kernel equals the order of the subgroup the
        # weights generate in Z/modulus
        g = modulus
        for w in weights:
            from math import gcd
            g = gcd(g, w)
        assert det(rows) == modulus // g


def test_congruence_kernel_rejects_bad_modulus():
    with pytest.raises(ValueError, match="modulus"):
        congruence_kernel([1, 2], 0)
