"""Tests for exact group-ring arithmetic, characters, idempotents, norms."""

from __future__ import annotations

import copy
import json
import random
from fractions import Fraction
from pathlib import Path

import pytest

from cyclostark.cyclotomic import CyclotomicNumber, zeta_power
from cyclostark.groupring import (
    FiniteAbelianGroup,
    GCharacter,
    GroupRingElement,
    IdealLattice,
    WedderburnData,
    character_idempotent,
    characters_of,
    inversion_involution,
    reduced_norm,
    whitehead_sublattice,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def rand_element(group: FiniteAbelianGroup, rng: random.Random) -> GroupRingElement:
    coeffs = {}
    for g in group.elements():
        if rng.random() < 0.6:
            coeffs[g] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return GroupRingElement(group, coeffs)


def cofactor_det(rows):
    """Independent determinant oracle: recursive cofactor expansion."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = None
    for j in range(n):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


# --------------------------------------------------------------------------
# FiniteAbelianGroup


def test_group_basics():
    g = FiniteAbelianGroup([2, 4])
    assert g.order == 8
    assert g.exponent == 4
    assert g.identity == (0, 0)
    assert g.mul((1, 3), (1, 2)) == (0, 1)
    assert g.inv((1, 3)) == (1, 1)
    els = g.elements()
    assert len(els) == 8
    assert els[0] == g.identity
    for e in els:
        assert g.mul(e, g.inv(e)) == g.identity


def test_trivial_group():
    g = FiniteAbelianGroup([])
    assert g.order == 1
    assert g.exponent == 1
    assert g.elements() == [()]


def test_invariant_factor_validation():
    assert FiniteAbelianGroup([1, 2]).invariants == (2,)
    with pytest.raises(ValueError):
        FiniteAbelianGroup([2, 3])
    assert FiniteAbelianGroup.from_cyclic_factors([2, 3]).invariants == (6,)
    assert FiniteAbelianGroup.from_cyclic_factors([2, 4, 3]).invariants == (2, 12)


def test_unit_quotient_mod5():
    g = FiniteAbelianGroup.from_unit_quotient(5, [1, 4])
    assert g.invariants == (2,)
    assert g.class_of(4) == g.identity
    assert g.class_of(2) != g.identity
    assert g.class_of(3) == g.class_of(2)
    units = [1, 2, 3, 4]
    for a in units:
        for b in units:
            assert g.class_of(a * b % 5) == g.mul(g.class_of(a), g.class_of(b))
    kernel = [a for a in units if g.class_of(a) == g.identity]
    assert kernel == [1, 4]
    assert g.residue_of(g.class_of(2)) in (2, 3)


def test_unit_quotient_structures():
    cases = {
        (12, (1, 11)): (2,),
        (8, (1, 7)): (2,),
        (15, (1, 14)): (4,),
        (16, (1, 15)): (4,),
        (21, (1, 20)): (6,),
        (5, (1,)): (4,),
    }
    for (m, h), expected in cases.items():
        g = FiniteAbelianGroup.from_unit_quotient(m, list(h))
        assert g.invariants == expected, (m, h)


def test_unit_quotient_label_roundtrip():
    g = FiniteAbelianGroup.from_unit_quotient(15, [1, 14])
    units = [a for a in range(1, 15) if __import__("math").gcd(a, 15) == 1]
    for a in units:
        assert g.class_of(g.residue_of(g.class_of(a))) == g.class_of(a)


# --------------------------------------------------------------------------
# Characters


def test_characters_trivial_group():
    g = FiniteAbelianGroup([])
    chars = characters_of(g)
    assert len(chars) == 1
    assert chars[0].is_trivial()


def test_characters_z2():
    g = FiniteAbelianGroup([2])
    chars = characters_of(g)
    assert len(chars) == 2
    values = sorted(c.value((1,)).rational_value() for c in chars)
    assert values == [Fraction(-1), Fraction(1)]


def test_characters_unit_quotient_mod5():
    g = FiniteAbelianGroup.from_unit_quotient(5, [1, 4])
    chars = characters_of(g)
    assert len(chars) == 2
    nontriv = next(c for c in chars if not c.is_trivial())
    assert nontriv.value(g.class_of(2)) == -1


def test_characters_orthogonal_and_distinct():
    g = FiniteAbelianGroup([2, 4])
    chars = characters_of(g)
    assert len(chars) == 8
    assert len({c.exponents for c in chars}) == 8
    for chi in chars:
        for psi in chars:
            total = sum(
                (chi.value(x) * psi.value(g.inv(x)) for x in g.elements()),
                start=CyclotomicNumber.zero(g.exponent),
            )
            assert total == (8 if chi == psi else 0)


def test_characters_multiplicative():
    g = FiniteAbelianGroup([2, 4])
    for chi in characters_of(g):
        for x in g.elements():
            for y in g.elements():
                assert chi.value(g.mul(x, y)) == chi.value(x) * chi.value(y)


def test_character_group_ops():
    g = FiniteAbelianGroup([4])
    chars = characters_of(g)
    chi = next(c for c in chars if c.order() == 4)
    inv = chi.inverse()
    for x in g.elements():
        assert chi.value(x) * inv.value(x) == 1
        assert inv.value(x) == chi.value(g.inv(x))


# --------------------------------------------------------------------------
# Group ring arithmetic


def test_convolution_definition():
    g = FiniteAbelianGroup([6])
    rng = random.Random(12)
    for _ in range(5):
        x = rand_element(g, rng)
        y = rand_element(g, rng)
        prod = x * y
        for h in g.elements():
            direct = sum(
                x.coefficient(a) * y.coefficient(g.mul(g.inv(a), h))
                for a in g.elements()
            )
            assert prod.coefficient(h) == direct


def test_ring_axioms():
    g = FiniteAbelianGroup([2, 4])
    rng = random.Random(3)
    one = GroupRingElement.one(g)
    zero = GroupRingElement.zero(g)
    for _ in range(5):
        x, y, z = (rand_element(g, rng) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x
        assert x + zero == x
        assert x * one == x
        assert x - x == zero


def test_canonical_pruning():
    g = FiniteAbelianGroup([2])
    c = (1,)
    x = GroupRingElement(g, {g.identity: Fraction(0), c: Fraction(2)})
    assert x.support() == [c]
    assert GroupRingElement(g, {}).is_zero()
    y = GroupRingElement(g, {c: Fraction(2)})
    assert x == y


def test_scalar_multiplication():
    g = FiniteAbelianGroup([4])
    rng = random.Random(8)
    x = rand_element(g, rng)
    assert x * 2 + x == x * 3
    assert x * Fraction(1, 2) * 2 == x
    half = x.scale(Fraction(1, 2))
    assert half + half == x


# --------------------------------------------------------------------------
# Idempotents


def test_idempotent_trivial_character():
    g = FiniteAbelianGroup([2])
    triv = next(c for c in characters_of(g) if c.is_trivial())
    e = character_idempotent(triv)
    assert e.coefficient(g.identity) == Fraction(1, 2)
    assert e.coefficient((1,)) == Fraction(1, 2)


def test_idempotent_sign_character():
    g = FiniteAbelianGroup([2])
    sign = next(c for c in characters_of(g) if not c.is_trivial())
    e = character_idempotent(sign)
    assert e.coefficient(g.identity) == Fraction(1, 2)
    assert e.coefficient((1,)) == Fraction(-1, 2)
    assert isinstance(e.coefficient((1,)), Fraction)


def test_idempotent_system():
    for invariants in ([4], [2, 2], [6]):
        g = FiniteAbelianGroup(invariants)
        chars = characters_of(g)
        idems = [character_idempotent(c) for c in chars]
        total = GroupRingElement.zero(g)
        for i, ei in enumerate(idems):
            total = total + ei
            for j, ej in enumerate(idems):
                prod = ei * ej
                assert prod == (ei if i == j else GroupRingElement.zero(g))
        assert total == GroupRingElement.one(g)


# --------------------------------------------------------------------------
# Involution


def test_involution_basics():
    g = FiniteAbelianGroup([2])
    one = GroupRingElement.one(g)
    assert inversion_involution(one) == one
    x = GroupRingElement(g, {g.identity: Fraction(2), (1,): Fraction(3)})
    assert inversion_involution(x) == x


def test_involution_moves_elements():
    g = FiniteAbelianGroup([4])
    for el in g.elements():
        x = GroupRingElement.from_element(g, el)
        assert inversion_involution(x) == GroupRingElement.from_element(g, g.inv(el))


def test_involution_antiautomorphism():
    g = FiniteAbelianGroup([2, 4])
    rng = random.Random(5)
    for _ in range(5):
        x = rand_element(g, rng)
        y = rand_element(g, rng)
        assert inversion_involution(x * y) == inversion_involution(y) * inversion_involution(x)
        assert inversion_involution(inversion_involution(x)) == x


# --------------------------------------------------------------------------
# Reduced norm (abelian)


def test_reduced_norm_identity_matrix():
    g = FiniteAbelianGroup([6])
    one = GroupRingElement.one(g)
    zero = GroupRingElement.zero(g)
    mat = [[one if i == j else zero for j in range(3)] for i in range(3)]
    assert reduced_norm(mat) == one


def test_reduced_norm_single_element():
    g = FiniteAbelianGroup([4])
    x = GroupRingElement.from_element(g, (1,))
    assert reduced_norm([[x]]) == x


def test_reduced_norm_diag_example():
    g = FiniteAbelianGroup([2])
    one = GroupRingElement.one(g)
    c = GroupRingElement.from_element(g, (1,))
    zero = GroupRingElement.zero(g)
    mat = [[one + c, zero], [zero, one]]
    assert reduced_norm(mat) == one + c


def test_reduced_norm_matches_commutative_determinant():
    rng = random.Random(17)
    for invariants in ([5], [2, 4]):
        g = FiniteAbelianGroup(invariants)
        for size in (2, 3):
            mat = [[rand_element(g, rng) for _ in range(size)] for _ in range(size)]
            assert reduced_norm(mat) == cofactor_det(mat)


def test_reduced_norm_multiplicative_and_transpose():
    g = FiniteAbelianGroup([6])
    rng = random.Random(23)
    for _ in range(3):
        m1 = [[rand_element(g, rng) for _ in range(2)] for _ in range(2)]
        m2 = [[rand_element(g, rng) for _ in range(2)] for _ in range(2)]
        prod = [
            [sum((m1[i][k] * m2[k][j] for k in range(2)), GroupRingElement.zero(g)) for j in range(2)]
            for i in range(2)
        ]
        assert reduced_norm(prod) == reduced_norm(m1) * reduced_norm(m2)
        transpose = [[m1[j][i] for j in range(2)] for i in range(2)]
        assert reduced_norm(transpose) == reduced_norm(m1)


def test_reduced_norm_output_rational():
    g = FiniteAbelianGroup([4])
    rng = random.Random(29)
    mat = [[rand_element(g, rng) for _ in range(2)] for _ in range(2)]
    out = reduced_norm(mat)
    for g_el in out.support():
        assert isinstance(out.coefficient(g_el), Fraction)


def test_reduced_norm_nonsquare_error():
    g = FiniteAbelianGroup([2])
    one = GroupRingElement.one(g)
    with pytest.raises(ValueError):
        reduced_norm([[one, one]])


# --------------------------------------------------------------------------
# Wedderburn data and non-abelian reduced norms


@pytest.fixture(scope="module")
def wd_s3() -> WedderburnData:
    return WedderburnData.load(FIXTURES / "wedderburn_s3.json")


@pytest.fixture(scope="module")
def wd_d4() -> WedderburnData:
    return WedderburnData.load(FIXTURES / "wedderburn_d4.json")


def test_wedderburn_load_and_validate(wd_s3, wd_d4):
    assert wd_s3.group.order == 6
    assert wd_d4.group.order == 8
    assert [c.degree for c in wd_s3.components] == [1, 1, 2]
    assert [c.degree for c in wd_d4.components] == [1, 1, 1, 1, 2]
    # sum of squared degrees equals the group order
    assert sum(c.degree**2 for c in wd_s3.components) == 6
    assert sum(c.degree**2 for c in wd_d4.components) == 8


def test_wedderburn_tampered_data_rejected():
    data = json.loads((FIXTURES / "wedderburn_s3.json").read_text())
    bad = copy.deepcopy(data)
    bad["components"][0]["idempotent"]["r"] = "1/3"
    with pytest.raises(ValueError):
        WedderburnData.from_dict(bad)
    bad2 = copy.deepcopy(data)
    bad2["components"][2]["rep"]["r"] = [["1", "0"], ["0", "1"]]
    with pytest.raises(ValueError):
        WedderburnData.from_dict(bad2)


def test_reduced_norm_s3_units(wd_s3):
    group = wd_s3.group
    one = GroupRingElement.one(group)
    r = GroupRingElement.from_element(group, wd_s3.element_from_word("r"))
    s = GroupRingElement.from_element(group, wd_s3.element_from_word("s"))
    assert reduced_norm([[one]], wd_s3) == one
    assert reduced_norm([[r]], wd_s3) == one
    e_triv = wd_s3.components[0].idempotent
    assert reduced_norm([[s]], wd_s3) == e_triv + e_triv - one


def test_reduced_norm_d4_reflection(wd_d4):
    group = wd_d4.group
    s = GroupRingElement.from_element(group, wd_d4.element_from_word("s"))
    e = [c.idempotent for c in wd_d4.components]
    expected = e[0] + e[1] - e[2] - e[3] - e[4]
    assert reduced_norm([[s]], wd_d4) == expected


def test_reduced_norm_s3_multiplicative(wd_s3):
    group = wd_s3.group
    rng = random.Random(31)
    els = group.elements()
    zero = GroupRingElement.zero(group)

    def rand_mat():
        out = []
        for _ in range(2):
            row = []
            for _ in range(2):
                coeffs = {}
                for el in rng.sample(els, 2):
                    coeffs[el] = Fraction(rng.randint(-2, 2))
                row.append(GroupRingElement(group, coeffs))
            out.append(row)
        return out

    for _ in range(3):
        m1, m2 = rand_mat(), rand_mat()
        prod = [
            [sum((m1[i][k] * m2[k][j] for k in range(2)), zero) for j in range(2)]
            for i in range(2)
        ]
        lhs = reduced_norm(prod, wd_s3)
        rhs = reduced_norm(m1, wd_s3) * reduced_norm(m2, wd_s3)
        assert lhs == rhs


def test_reduced_norm_nonabelian_requires_data(wd_s3):
    one = GroupRingElement.one(wd_s3.group)
    with pytest.raises(ValueError):
        reduced_norm([[one]])


# --------------------------------------------------------------------------
# Whitehead sublattices and ideal lattices


def test_whitehead_commutative_full_ring():
    g = FiniteAbelianGroup([2])
    lat = whitehead_sublattice(g, 3)
    assert lat == IdealLattice.full(g)
    assert lat.is_ideal
    assert lat.verify_ideal()
    triv = whitehead_sublattice(FiniteAbelianGroup([]), 1)
    assert triv.rows == [[1]]
    assert triv.denominator == 1


def test_whitehead_s3_monotone_and_central(wd_s3):
    lat1 = whitehead_sublattice(wd_s3, 1)
    lat2 = whitehead_sublattice(wd_s3, 2)
    group = wd_s3.group
    for vec in lat1.basis_elements():
        assert lat2.contains(vec)
    # every member of the sublattice is central in Q[G]
    for vec in lat2.basis_elements():
        for el in group.elements():
            ge = GroupRingElement.from_element(group, el)
            assert ge * vec == vec * ge
    # identity has reduced norm 1, so 1 is always a member
    assert lat1.contains(GroupRingElement.one(group))


def test_ideal_lattice_canonical_and_contains():
    g = FiniteAbelianGroup([2])
    one = GroupRingElement.one(g)
    c = GroupRingElement.from_element(g, (1,))
    lat_a = IdealLattice.from_elements(g, [one, c])
    lat_b = IdealLattice.from_elements(g, [c, one + c])
    assert lat_a == lat_b
    assert lat_a == IdealLattice.full(g)
    assert lat_a.contains(one + c)
    assert not lat_a.contains(one.scale(Fraction(1, 2)))
    sub = IdealLattice.from_elements(g, [one + c, (one + c).scale(2)])
    assert sub.rows == [[1, 1]]
    assert not sub.contains(one)
