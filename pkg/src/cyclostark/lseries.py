"""Derivatives at the origin of truncated Dirichlet L-functions.

For a real abelian field of conductor m the relevant truncation keeps the
Euler factors away from the archimedean place and the primes dividing m.
With that set fixed, the first derivative at 0 of the L-function of a
character of G = (Z/m)^x / H has a finite closed form: a character-weighted
sum of logarithms of |1 - zeta_m^a| over the units a mod m.  This module
evaluates that sum at high precision, computes the (combinatorial) order of
vanishing at 0, and assembles the equivariant leading term - the
group-ring element whose chi-component carries the derivative of the
inverse character.

Characters are evaluated by pullback to (Z/m)^x; characters that are not
primitive are deliberately kept at modulus m, because the imprimitive sum
is exactly the truncated derivative.
"""

from __future__ import annotations

from math import gcd

from mpmath import mp

from .groupring import GCharacter, characters_of
from .numberfield import PlaceSet, RealAbelianField, _check_precision

__all__ = [
    "LValueReport",
    "all_reports",
    "character_label",
    "equivariant_leading_term",
    "l_derivative_at_zero",
    "vanishing_order",
]


def character_label(chi: GCharacter) -> str:
    return "chi(" + ",".join(str(k) for k in chi.exponents) + ")"


class LValueReport:
    """Vanishing order and first derivative at 0 for one character."""

    __slots__ = ("character", "vanishing_order", "derivative", "precision")

    def __init__(self, character: str, vanishing_order: int, derivative, precision: int):
        self.character = character
        self.vanishing_order = vanishing_order
        self.derivative = derivative
        self.precision = precision

    def to_dict(self) -> dict:
        with mp.workdps(self.precision + 10):
            value = mp.mpc(self.derivative)
            return {
                "character": self.character,
                "vanishing_order": self.vanishing_order,
                "derivative": {
                    "re": mp.nstr(value.real, self.precision),
                    "im": mp.nstr(value.imag, self.precision),
                },
                "precision": self.precision,
            }

    def __repr__(self):
        return (
            f"LValueReport({self.character}, order={self.vanishing_order}, "
            f"derivative={mp.nstr(self.derivative, 12)})"
        )


def _require_canonical(field: RealAbelianField, placeset: PlaceSet):
    if placeset.field != field:
        raise ValueError("place set belongs to a different field")
    if not placeset.is_canonical:
        raise ValueError(
            "the truncation is only defined for the canonical place set "
            "(infinity together with the primes dividing the conductor)"
        )


def vanishing_order(chi: GCharacter, field: RealAbelianField, placeset: PlaceSet) -> int:
    """Order of vanishing at 0: the number of places whose decomposition
    group is in the kernel of chi (one less for the trivial character)."""
    _require_canonical(field, placeset)
    if chi.group != field.group:
        raise ValueError("character belongs to a different group")
    if chi.is_trivial():
        return len(placeset.entries) - 1
    count = 1  # the archimedean place: its decomposition group is trivial
    for p in placeset.primes:
        dec = placeset.decomposition(p)
        if all(_char_exponent_total(chi, el) == 0 for el in dec):
            count += 1
    return count


def _char_exponent_total(chi: GCharacter, el) -> int:
    group = chi.group
    e = group.exponent
    t = 0
    for k, x, d in zip(chi.exponents, el, group.invariants):
        t += k * x * (e // d)
    return t % e


def _numeric_character(chi: GCharacter, precision: int) -> dict:
    """chi(g) for every g, as unit complex numbers at working precision."""
    group = chi.group
    e = group.exponent
    out = {}
    with mp.workdps(precision + 10):
        for el in group.elements():
            t = _char_exponent_total(chi, el)
            out[el] = mp.expjpi(mp.mpf(2 * t) / e)
    return out


def l_derivative_at_zero(chi: GCharacter, field: RealAbelianField,
                         precision: int = 60):
    """-(1/2) * sum over units a mod m of chi(a) log|1 - zeta_m^a|.

    This is the first derivative at 0 of the modulus-m (truncated)
    L-function of chi: writing the Dirichlet series through Hurwitz zeta
    functions and using zeta_H'(0, x) = log Gamma(x) - log(2 pi)/2, the
    a and m-a terms of an even character combine to the closed form above.
    """
    precision = _check_precision(precision)
    if chi.group != field.group:
        raise ValueError("character belongs to a different group")
    m = field.conductor
    group = field.group
    values = _numeric_character(chi, precision)
    with mp.workdps(precision + 10):
        total = mp.mpc(0)
        for a in range(1, m):
            if gcd(a, m) != 1:
                continue
            weight = values[group.class_of(a)]
            z = mp.expjpi(mp.mpf(2 * a) / m)
            total += weight * mp.log(abs(1 - z))
        return mp.mpc(total) * mp.mpf("-0.5")


def equivariant_leading_term(field: RealAbelianField, placeset: PlaceSet,
                             precision: int = 60) -> dict:
    """The group-ring element sum over chi of L'(chi^{-1}, 0) e_chi,
    returned as a real coefficient for each group element."""
    precision = _check_precision(precision)
    _require_canonical(field, placeset)
    group = field.group
    n = group.order
    derivs = {}
    numeric = {}
    for chi in characters_of(group):
        derivs[chi] = l_derivative_at_zero(chi.inverse(), field, precision)
        numeric[chi] = _numeric_character(chi, precision)
    out = {}
    with mp.workdps(precision + 10):
        tol = mp.power(10, -mp.mpf(precision) / 2)
        for el in group.elements():
            inv = group.inv(el)
            total = mp.mpc(0)
            for chi in characters_of(group):
                total += derivs[chi] * numeric[chi][inv]
            total = total / n
            if abs(total.imag) > tol:
                raise ValueError("leading term has a non-real coefficient")
            out[el] = total.real
    return out


def all_reports(field: RealAbelianField, precision: int = 60) -> list:
    """One LValueReport per character, in character enumeration order."""
    placeset = PlaceSet.canonical(field)
    reports = []
    for chi in characters_of(field.group):
        reports.append(
            LValueReport(
                character_label(chi),
                vanishing_order(chi, field, placeset),
                l_derivative_at_zero(chi, field, precision),
                precision,
            )
        )
    return reports
