"""Validation behaviour of the request object: everything the generators
cannot produce sound fixtures for is refused at construction time."""

import pytest

from fixturegen import FieldRequest


def test_minimal_valid_request_normalizes_fields():
    req = FieldRequest(5, [4], ["inf", 5])
    assert req.conductor == 5
    assert req.subgroup_gens == (4,)
    assert req.s_places == ("inf", 5)
    assert req.t_primes == ()
    assert req.sprime_places is None
    assert req.finite_s == (5,)
    assert req.degree == 2


def test_subgroup_without_minus_one_is_refused():
    with pytest.raises(ValueError, match="must contain -1"):
        FieldRequest(5, [1], ["inf", 5])
    with pytest.raises(ValueError, match="must contain -1"):
        FieldRequest(12, [5], ["inf", 2, 3])


def test_conductor_beyond_desk_scale_is_refused():
    with pytest.raises(ValueError, match="exceeds the supported scale"):
        FieldRequest(401, [400], ["inf"])


def test_conductor_400_is_still_in_scale():
    req = FieldRequest(400, [399, 7], ["inf"])
    assert req.conductor == 400


def test_subgroup_generator_must_be_a_unit():
    with pytest.raises(ValueError, match="not a unit"):
        FieldRequest(12, [11, 4], ["inf", 2, 3])


def test_s_must_contain_the_infinite_place():
    with pytest.raises(ValueError, match="infinite place"):
        FieldRequest(5, [4], [5])


def test_s_entries_must_be_primes_or_inf():
    with pytest.raises(ValueError, match="'inf' or primes"):
        FieldRequest(5, [4], ["inf", 6])
    with pytest.raises(ValueError, match="repeats"):
        FieldRequest(5, [4], ["inf", 5, 5])


def test_congruence_primes_must_be_odd_primes_coprime_to_everything():
    with pytest.raises(ValueError, match="primes >= 3"):
        FieldRequest(5, [4], ["inf", 5], t_primes=[2])
    with pytest.raises(ValueError, match="primes >= 3"):
        FieldRequest(5, [4], ["inf", 5], t_primes=[9])
    with pytest.raises(ValueError, match="divides the conductor"):
        FieldRequest(5, [4], ["inf", 5], t_primes=[5])
    with pytest.raises(ValueError, match="already appears in S"):
        FieldRequest(15, [14], ["inf", 3, 5, 7], t_primes=[7])
    with pytest.raises(ValueError, match="repeats"):
        FieldRequest(5, [4], ["inf", 5], t_primes=[3, 3])


def test_reduced_set_must_sit_inside_s():
    with pytest.raises(ValueError, match="does not appear in S"):
        FieldRequest(5, [4], ["inf", 5], sprime_places=["inf", 3])
    req = FieldRequest(5, [4], ["inf", 5], sprime_places=["inf", 5])
    assert req.sprime_places == ("inf", 5)


def test_default_names_match_the_corpus_convention():
    assert FieldRequest(5, [4], ["inf", 5]).default_name("sunits") == \
        "field_m5_H4_sunits.json"
    assert FieldRequest(40, [3, 13], ["inf", 2, 5], t_primes=[17]) \
        .default_name("sunits") == "field_m40_H3-13_T17_sunits.json"
    assert FieldRequest(60, [7, 11], ["inf", 2, 3, 5], t_primes=[13],
                        sprime_places=["inf", 2]).default_name("selmer") == \
        "field_m60_H7-11_T13_selmer.json"
