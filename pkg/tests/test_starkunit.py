"""Tests for distinguished units, their evaluation ideals, and verification."""

import json
from fractions import Fraction
from pathlib import Path

import pytest
from mpmath import mp

from cyclostark.cyclotomic import CyclotomicNumber, zeta_power
from cyclostark.groupring import GroupRingElement, IdealLattice
from cyclostark.lattice import Presentation, classical_fitting_ideal, presentation_of
from cyclostark.numberfield import (
    MultiplicativeElement,
    PlaceSet,
    RealAbelianField,
    SUnitBasis,
    build_place_modules,
)
from cyclostark.starkunit import (
    REGULATOR_SIGN,
    SelmerFixture,
    StarkUnit,
    cyclotomic_stark_unit,
    euler_factor_product,
    evaluation_ideal,
    isotypic_dimension_check,
    rank_one_idempotent,
    t_modified_unit,
    verify_annihilation,
    verify_fitting_equality,
    verify_integrality,
    verify_regulator_identity,
)

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_json(name):
    with open(FIXTURES / name, "r", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="module")
def field5():
    return RealAbelianField(5, [4])


@pytest.fixture(scope="module")
def field12():
    return RealAbelianField(12, [11])


@pytest.fixture(scope="module")
def basis5():
    return SUnitBasis.load(FIXTURES / "field_m5_H4_sunits.json")


@pytest.fixture(scope="module")
def basis5_t3():
    return SUnitBasis.load(FIXTURES / "field_m5_H4_T3_sunits.json")


@pytest.fixture(scope="module")
def basis12():
    return SUnitBasis.load(FIXTURES / "field_m12_H11_sunits.json")


@pytest.fixture(scope="module")
def basis12_t5():
    return SUnitBasis.load(FIXTURES / "field_m12_H11_T5_sunits.json")


@pytest.fixture(scope="module")
def stark5(field5, basis5):
    return cyclotomic_stark_unit(field5, basis5)


@pytest.fixture(scope="module")
def stark12(field12, basis12):
    return cyclotomic_stark_unit(field12, basis12)


@pytest.fixture(scope="module")
def stark5_t3(stark5, basis5_t3):
    return t_modified_unit(stark5, basis5_t3)


@pytest.fixture(scope="module")
def stark12_t5(stark12, basis12_t5):
    return t_modified_unit(stark12, basis12_t5)


@pytest.fixture(scope="module")
def selmer5(field5):
    return SelmerFixture.load(FIXTURES / "field_m5_H4_T3_selmer.json")


@pytest.fixture(scope="module")
def selmer12(field12):
    return SelmerFixture.load(FIXTURES / "field_m12_H11_T5_selmer.json")


def sqrt5():
    return CyclotomicNumber.from_strings(5, ["-1", "0", "-2", "-2"])


def sqrt3():
    return CyclotomicNumber.from_strings(12, ["0", "2", "0", "-1"])


class TestRankOneIdempotent:
    def test_full_ring_when_every_order_is_one(self, field5):
        e = rank_one_idempotent(field5, PlaceSet.canonical(field5))
        assert e == GroupRingElement.one(field5.group)

    def test_m12_isolates_the_nontrivial_character(self, field12):
        e = rank_one_idempotent(field12, PlaceSet.canonical(field12))
        group = field12.group
        assert e.coefficient(group.identity) == Fraction(1, 2)
        assert e.coefficient(group.class_of(5)) == Fraction(-1, 2)

    def test_m15_coefficients_and_idempotency(self):
        field = RealAbelianField(15, [14])
        e = rank_one_idempotent(field, PlaceSet.canonical(field))
        group = field.group
        assert e.coefficient(group.identity) == Fraction(3, 4)
        for el in group.elements():
            if el != group.identity:
                assert e.coefficient(el) == Fraction(-1, 4)
        assert e * e == e

    def test_idempotent_m12(self, field12):
        e = rank_one_idempotent(field12, PlaceSet.canonical(field12))
        assert e * e == e

    def test_rejects_noncanonical_place_set(self, field5):
        bigger = PlaceSet(field5, ["inf", 5, 11])
        with pytest.raises(ValueError, match="canonical"):
            rank_one_idempotent(field5, bigger)


class TestEulerFactorProduct:
    def test_empty_product_is_one(self, field5):
        assert euler_factor_product(field5, []) == GroupRingElement.one(field5.group)

    def test_split_prime_gives_rational_factor(self, field5):
        gamma = euler_factor_product(field5, [11])
        group = field5.group
        assert gamma.coefficient(group.identity) == Fraction(-10)
        assert gamma.support() == [group.identity]

    def test_inert_prime_m5(self, field5):
        gamma = euler_factor_product(field5, [3])
        group = field5.group
        assert gamma.coefficient(group.identity) == Fraction(1)
        assert gamma.coefficient(group.class_of(3)) == Fraction(-3)

    def test_m12(self, field12):
        gamma = euler_factor_product(field12, [5])
        group = field12.group
        assert gamma.coefficient(group.identity) == Fraction(1)
        assert gamma.coefficient(group.class_of(5)) == Fraction(-5)

    def test_multiplicative_over_disjoint_sets(self, field5):
        both = euler_factor_product(field5, [3, 11])
        parts = euler_factor_product(field5, [3]) * euler_factor_product(field5, [11])
        assert both == parts

    def test_rejects_prime_dividing_conductor(self, field5):
        with pytest.raises(ValueError, match="conductor"):
            euler_factor_product(field5, [5])

    def test_rejects_composite(self, field5):
        with pytest.raises(ValueError, match="prime"):
            euler_factor_product(field5, [9])

    def test_rejects_duplicate(self, field5):
        with pytest.raises(ValueError, match="repeat"):
            euler_factor_product(field5, [3, 3])


class TestCyclotomicStarkUnit:
    def test_m5_exponents(self, stark5):
        assert stark5.element.exponents == (Fraction(-1, 2), Fraction(1, 2))

    def test_m5_square_certificate(self, stark5):
        square = stark5.element.scale(2).value()
        five = CyclotomicNumber.from_rational(5, Fraction(5))
        half = CyclotomicNumber.from_rational(5, Fraction(1, 2))
        assert square == (five - sqrt5()) * half

    def test_m12_exponents(self, stark12):
        assert stark12.element.exponents == (Fraction(-1, 2), Fraction(0), Fraction(0))

    def test_m12_square_certificate(self, stark12):
        square = stark12.element.scale(2).value()
        two = CyclotomicNumber.from_rational(12, Fraction(2))
        assert square == two - sqrt3()

    def test_double_is_integral_but_element_is_not(self, stark5):
        assert stark5.element.scale(2).is_integral
        assert not stark5.element.is_integral

    def test_idempotent_fixes_element(self, stark12):
        moved = stark12.element.apply_ring(stark12.e_pi)
        assert moved == stark12.element

    def test_complementary_idempotent_kills_element(self, stark12, field12):
        one = GroupRingElement.one(field12.group)
        complement = one + stark12.e_pi.scale(-1)
        killed = stark12.element.apply_ring(complement)
        assert all(q == 0 for q in killed.exponents)

    def test_inverse_generates_same_module(self, stark5, field5):
        from cyclostark.normforms import hnf

        def span(elem):
            rows = []
            for g in field5.group.elements():
                moved = elem.apply_element(g)
                rows.append([int(2 * q) for q in moved.exponents])
            return hnf(rows)

        assert span(stark5.element) == span(stark5.element.scale(-1))

    def test_rejects_basis_with_auxiliary_primes(self, field5, basis5_t3):
        with pytest.raises(ValueError, match="T"):
            cyclotomic_stark_unit(field5, basis5_t3)

    def test_rejects_field_mismatch(self, field12, basis5):
        with pytest.raises(ValueError, match="field"):
            cyclotomic_stark_unit(field12, basis5)

    def test_incomplete_basis_reports_fixture_inconsistency(self, field5):
        # phi^2 and -5 span an index-4 subgroup of the S-units mod torsion,
        # so the half-power expression needs denominator 4 and must fail.
        data = {
            "field": {"conductor": 5, "subgroup_gens": [4]},
            "S": ["inf", 5],
            "T": [],
            "basis": [["1", "0", "-1", "-1"], ["-5", "0", "0", "0"]],
            "action": {"2": {"matrix": [[-1, 0], [0, 1]], "signs": [1, 1]}},
        }
        basis = SUnitBasis.from_dict(data)
        with pytest.raises(ValueError, match="fixture"):
            cyclotomic_stark_unit(field5, basis)

    def test_attributes(self, stark5, field5, basis5):
        assert stark5.field == field5
        assert stark5.placeset == basis5.placeset
        assert stark5.T == ()


class TestStarkUnitConstruction:
    def test_rejects_non_half_integral_element(self, field5, basis5, stark5):
        bad = MultiplicativeElement(basis5, (Fraction(1, 3), Fraction(0)))
        with pytest.raises(ValueError, match="integer"):
            StarkUnit(bad, field5, stark5.e_pi)

    def test_rejects_element_not_fixed_by_idempotent(self, field12, basis12, stark12):
        # the second basis element has a nonzero trivial-character component,
        # so the rank-one idempotent moves it
        bad = MultiplicativeElement(basis12, (Fraction(0), Fraction(1), Fraction(0)))
        with pytest.raises(ValueError, match="idempotent"):
            StarkUnit(bad, field12, stark12.e_pi)


class TestTModified:
    def test_m5_exponents(self, stark5_t3):
        assert stark5_t3.element.exponents == (Fraction(-1), Fraction(0))
        assert stark5_t3.element.is_integral

    def test_m5_value(self, stark5_t3):
        expected = CyclotomicNumber.from_strings(5, ["1", "0", "-3", "-3"]).inverse()
        assert stark5_t3.element.value() == expected

    def test_m5_matches_euler_factor_applied_to_base(self, stark5, stark5_t3, field5):
        gamma = euler_factor_product(field5, [3])
        moved = stark5.element.apply_ring(gamma)
        assert moved.exponents == (Fraction(-2), Fraction(-1))
        assert moved.value() == stark5_t3.element.value()

    def test_m12_exponents(self, stark12_t5):
        assert stark12_t5.element.exponents == (Fraction(-3), Fraction(1), Fraction(0))
        assert stark12_t5.element.is_integral

    def test_m12_value(self, stark12_t5):
        two = CyclotomicNumber.from_rational(12, Fraction(2))
        u = two + sqrt3()
        assert stark12_t5.element.value() == u ** (-3)

    def test_preserves_idempotent_and_records_T(self, stark5, stark5_t3, stark12_t5):
        assert stark5_t3.e_pi == stark5.e_pi
        assert stark5_t3.T == (3,)
        assert stark12_t5.T == (5,)

    def test_rejects_mismatched_auxiliary_basis(self, stark5, basis12_t5):
        with pytest.raises(ValueError, match="field|place"):
            t_modified_unit(stark5, basis12_t5)

    def test_rejects_empty_T_basis(self, stark5, basis5):
        with pytest.raises(ValueError, match="T"):
            t_modified_unit(stark5, basis5)


class TestIntegrality:
    def test_m5_membership_and_index(self, stark5_t3):
        report = verify_integrality(stark5_t3)
        assert report["passed"] is True
        assert report["member"] is True
        assert report["index_invariants"] == []
        assert report["witness"] is None

    def test_m12_membership(self, stark12_t5):
        report = verify_integrality(stark12_t5)
        assert report["passed"] is True
        assert report["member"] is True
        assert report["index_invariants"] == []

    def test_negative_control_half(self, stark5_t3, field5):
        bad = StarkUnit(stark5_t3.element.scale(Fraction(1, 2)), field5, stark5_t3.e_pi)
        report = verify_integrality(bad)
        assert report["passed"] is False
        assert report["member"] is False
        assert report["witness"] is not None

    def test_negative_control_three_halves(self, stark5_t3, field5):
        bad = StarkUnit(stark5_t3.element.scale(Fraction(3, 2)), field5, stark5_t3.e_pi)
        report = verify_integrality(bad)
        assert report["passed"] is False

    def test_requires_auxiliary_primes(self, stark5):
        with pytest.raises(ValueError, match="T"):
            verify_integrality(stark5)


class TestEvaluationIdeal:
    def test_m5_is_the_whole_ring(self, stark5_t3, field5):
        ideal = evaluation_ideal(stark5_t3)
        assert ideal == IdealLattice.full(field5.group)

    def test_m12_is_the_augmentation_twist(self, stark12_t5, field12):
        ideal = evaluation_ideal(stark12_t5)
        group = field12.group
        gen = GroupRingElement.from_vector(group, [Fraction(1), Fraction(-1)])
        expected = IdealLattice.from_elements(group, [gen], claim_ideal=True)
        assert ideal == expected

    def test_integer_denominator_on_genuine_units(self, stark5_t3, stark12_t5):
        assert evaluation_ideal(stark5_t3).denominator == 1
        assert evaluation_ideal(stark12_t5).denominator == 1

    def test_zero_element_gives_zero_ideal(self, field5, basis5_t3, stark5_t3):
        zero = MultiplicativeElement(basis5_t3, (Fraction(0), Fraction(0)))
        unit = StarkUnit(zero, field5, stark5_t3.e_pi)
        ideal = evaluation_ideal(unit)
        assert ideal.rows == []

    def test_scaling_scales_the_ideal(self, field5, basis5_t3, stark5_t3):
        tripled = StarkUnit(stark5_t3.element.scale(3), field5, stark5_t3.e_pi)
        ideal = evaluation_ideal(tripled)
        assert ideal.denominator == 1
        assert ideal.rows == [[3, 0], [0, 3]]


class TestSelmerFixture:
    def test_load_m5(self, field5, selmer5):
        assert selmer5.field == field5
        assert selmer5.placeset == PlaceSet.canonical(field5)
        assert selmer5.T == (3,)
        assert selmer5.sprime.entries == ("inf", 5)
        assert selmer5.cl_ST.order == 1
        assert selmer5.cl_SprimeT.order == 1

    def test_load_m12(self, field12, selmer12):
        assert selmer12.sprime.entries == ("inf", 2)
        assert selmer12.cl_ST.order == 1
        assert selmer12.cl_SprimeT.order == 1

    def test_derived_presentation_matches_place_kernel(self, field5, selmer5):
        pres = selmer5.selmer_presentation()
        assert isinstance(pres, Presentation)
        # the place kernel for m=5 is free of rank one over the group ring
        assert classical_fitting_ideal(pres, 0).rows == []
        assert classical_fitting_ideal(pres, 1) == IdealLattice.full(field5.group)

    def test_nontrivial_class_module_requires_presentation(self, field5):
        data = load_json("field_m5_H4_T3_selmer.json")
        data["cl_ST"] = {"invariants": [2], "action": {"2": [[1]]}}
        fixture = SelmerFixture.from_dict(data)
        with pytest.raises(ValueError, match="presentation"):
            fixture.selmer_presentation()

    def test_supplied_presentation_is_verified_when_class_module_trivial(self, field5):
        _, place_kernel, _ = build_place_modules(field5, PlaceSet.canonical(field5))
        pres = presentation_of(place_kernel)
        rows = [
            [[str(int(c)) for c in entry.to_vector()] for entry in row]
            for row in pres.matrix
        ]
        data = load_json("field_m5_H4_T3_selmer.json")
        data["selmer_presentation"] = {"rows": rows}
        fixture = SelmerFixture.from_dict(data)
        assert fixture.selmer_presentation().matrix == pres.matrix

        corrupted = [[list(entry) for entry in row] for row in rows]
        corrupted[0][0] = [str(2 * int(x)) for x in corrupted[0][0]]
        data["selmer_presentation"] = {"rows": corrupted}
        with pytest.raises(ValueError, match="[Ff]itting|presentation"):
            SelmerFixture.from_dict(data)

    def test_rejects_two_nonsplit_primes_in_sprime(self, field12):
        data = load_json("field_m12_H11_T5_selmer.json")
        data["Sprime"] = ["inf", 2, 3]
        with pytest.raises(ValueError, match="split|one"):
            SelmerFixture.from_dict(data)

    def test_rejects_sprime_prime_outside_S(self, field12):
        data = load_json("field_m12_H11_T5_selmer.json")
        data["Sprime"] = ["inf", 7]
        with pytest.raises(ValueError, match="outside|subset|S"):
            SelmerFixture.from_dict(data)

    def test_rejects_sprime_without_finite_place(self, field12):
        data = load_json("field_m12_H11_T5_selmer.json")
        data["Sprime"] = ["inf"]
        with pytest.raises(ValueError, match="one"):
            SelmerFixture.from_dict(data)


class TestFittingEquality:
    def test_m5(self, stark5_t3, selmer5):
        report = verify_fitting_equality(stark5_t3, selmer5)
        assert report["passed"] is True
        assert report["equal"] is True
        assert report["fit0_contained_in_fit1"] is True

    def test_m12(self, stark12_t5, selmer12):
        report = verify_fitting_equality(stark12_t5, selmer12)
        assert report["passed"] is True
        assert report["equal"] is True

    def test_corrupted_element_fails(self, stark5_t3, selmer5, field5):
        bad = StarkUnit(stark5_t3.element.scale(3), field5, stark5_t3.e_pi)
        report = verify_fitting_equality(bad, selmer5)
        assert report["passed"] is False
        assert report["equal"] is False
        assert report["witness"] is not None

    def test_rejects_mismatched_fixture(self, stark5_t3, selmer12):
        with pytest.raises(ValueError, match="field|match"):
            verify_fitting_equality(stark5_t3, selmer12)


class TestAnnihilation:
    def test_m5_trivial_module_is_vacuous(self, stark5_t3, selmer5):
        report = verify_annihilation(stark5_t3, selmer5)
        assert report["passed"] is True
        assert report["vacuous"] is True
        assert report["baseline_passed"] is True

    def test_unit_ideal_cannot_annihilate_nontrivial_module(self, stark5_t3):
        data = load_json("field_m5_H4_T3_selmer.json")
        data["cl_SprimeT"] = {"invariants": [2], "action": {"2": [[1]]}}
        fixture = SelmerFixture.from_dict(data)
        report = verify_annihilation(stark5_t3, fixture)
        assert report["passed"] is False
        assert report["vacuous"] is False
        assert report["witness"] is not None
        assert report["baseline_passed"] is True

    def test_augmentation_twist_annihilates_trivial_action_module(self, stark12_t5):
        data = load_json("field_m12_H11_T5_selmer.json")
        data["cl_SprimeT"] = {"invariants": [3], "action": {"5": [[1]]}}
        fixture = SelmerFixture.from_dict(data)
        report = verify_annihilation(stark12_t5, fixture)
        assert report["passed"] is True
        assert report["vacuous"] is False
        assert report["generators_integral"] is True


class TestDimensionCheck:
    def test_m5_all_degrees(self, field5, basis5):
        for degree, dims in [(0, [1, 1]), (1, [1, 1]), (2, [0, 0])]:
            report = isotypic_dimension_check(field5, basis5, degree)
            assert report["passed"] is True, report
            assert [c["dimension"] for c in report["characters"]] == dims
            assert [c["expected"] for c in report["characters"]] == dims

    def test_m12_all_degrees(self, field12, basis12):
        for degree, dims in [(0, [1, 1]), (1, [2, 1]), (2, [1, 0])]:
            report = isotypic_dimension_check(field12, basis12, degree)
            assert report["passed"] is True, report
            assert [c["dimension"] for c in report["characters"]] == dims

    def test_auxiliary_basis_variant(self, field5, basis5_t3):
        report = isotypic_dimension_check(field5, basis5_t3, 1)
        assert report["passed"] is True

    def test_labels(self, field5, basis5):
        report = isotypic_dimension_check(field5, basis5, 1)
        assert [c["character"] for c in report["characters"]] == ["chi(0)", "chi(1)"]


class TestRegulatorIdentity:
    def test_sign_constant(self):
        assert REGULATOR_SIGN == -1

    def test_m5(self, stark5):
        report = verify_regulator_identity(stark5, precision=60)
        assert report["passed"] is True
        with mp.workdps(70):
            assert mp.mpf(report["max_error"]) < mp.mpf(10) ** -30

    def test_m12(self, stark12):
        report = verify_regulator_identity(stark12, precision=60)
        assert report["passed"] is True

    def test_corrupted_element_fails(self, stark5, field5):
        bad = StarkUnit(stark5.element.scale(2), field5, stark5.e_pi)
        report = verify_regulator_identity(bad, precision=60)
        assert report["passed"] is False

    def test_lower_precision(self, stark12):
        report = verify_regulator_identity(stark12, precision=40)
        assert report["passed"] is True
        assert report["precision"] == 40

    def test_rejects_modified_element(self, stark5_t3):
        with pytest.raises(ValueError, match="T"):
            verify_regulator_identity(stark5_t3)
