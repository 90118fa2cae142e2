"""Generation of S-unit basis fixtures with certified Galois action.

Two presentation recipes cover the curated corpus:

``cyclotomic-pool``
    For a full real cyclotomic field (the subgroup is {+-1}).  Basis
    elements are the real positive products (1 - z^a)(1 - z^-a); for a
    prime-power conductor all coprime indices up to m/2 are used, for a
    conductor with two prime factors the largest coprime index is dropped
    (it is recovered by the product relation over units) and one index
    per prime factor carries that prime's valuation.

``quadratic``
    For a field whose degree over Q is 2.  The basis is the fundamental
    unit (derived from the Pell equation by the engine) followed by an
    S-part: generators of the finite-place valuation lattice, either
    pinned by the caller for reproducibility or found by bounded search.
    The engine proves the S-part complete: the valuation vectors must
    span the full lattice of principal valuation patterns, whose index
    equals the order of the subgroup of the class group generated by the
    S-primes.

When congruence primes T are requested (quadratic recipe only), the
basis is replaced by the sublattice of S-units congruent to 1 modulo
every prime above T, computed from discrete logarithms in the residue
field and certified by exact residue arithmetic, allowing the sign twist
by -1.

Every fixture is passed through the verifier's own loading checks before
it is returned.
"""

from fractions import Fraction
from math import gcd, isqrt
from typing import List, Optional, Sequence

from sympy import factorint

from cyclostark import (
    CyclotomicNumber,
    PlaceSet,
    RealAbelianField,
    SUnitBasis,
    places_of,
    zeta_power,
)

from . import quadratic as quad
from .actions import action_table
from .embed import detect_radicand, pair_to_cyclotomic, sqrt_embedding
from .engine import BuiltinEngine, cross_check
from .intlinalg import congruence_kernel, row_hnf
from .request import FieldRequest

_GENERATOR_SEARCH_SLACK = 4


# ---------------------------------------------------------------------------
# cyclotomic-pool recipe

def _pool_element(m: int, a: int) -> CyclotomicNumber:
    one = CyclotomicNumber.one(m)
    return (one - zeta_power(m, a % m)) * (one - zeta_power(m, (-a) % m))


def _pool_indices(m: int) -> List[int]:
    primes = sorted(factorint(m))
    units = [a for a in range(1, m // 2 + 1) if gcd(a, m) == 1]
    if len(primes) == 1:
        return units
    if len(primes) != 2:
        raise NotImplementedError(
            "the pool recipe covers prime-power conductors and conductors "
            "with exactly two prime factors")
    finite = []
    for p in primes:
        vp = 0
        n = m
        while n % p == 0:
            n //= p
            vp += 1
        finite.append(m // p ** vp)
    return units[:-1] + finite


def _pool_basis(req: FieldRequest) -> List[CyclotomicNumber]:
    m = req.conductor
    expected_s = ("inf",) + tuple(sorted(factorint(m)))
    if req.s_places != expected_s:
        raise NotImplementedError(
            f"the pool recipe derives S-units for S = {list(expected_s)}; "
            f"got {list(req.s_places)}")
    return [_pool_element(m, a) for a in _pool_indices(m)]


# ---------------------------------------------------------------------------
# quadratic recipe

def _pair_from_strings(entry: Sequence[str]) -> quad.Pair:
    if len(entry) != 2:
        raise ValueError(f"an S-part pin must be a pair of rationals: {entry}")
    return (Fraction(str(entry[0])), Fraction(str(entry[1])))


def _principal_valuation_lattice(field: quad.QuadraticField,
                                 s_primes: Sequence[int]) -> List[List[int]]:
    """HNF basis of the lattice of valuation vectors of S-units.

    The classes of ramified primes square to the trivial class, so the
    lattice contains 2 Z^r; parity patterns are tested for principality
    one by one.
    """
    r = len(s_primes)
    rows = [[2 if i == j else 0 for j in range(r)] for i in range(r)]
    for mask in range(1, 2 ** r):
        vec = [(mask >> i) & 1 for i in range(r)]
        if field.ramified_product_principal(s_primes, vec):
            rows.append(vec)
    return row_hnf(rows)


def _hnf_determinant(rows: List[List[int]], r: int) -> int:
    if len(rows) != r:
        return 0
    det = 1
    for i in range(r):
        det *= rows[i][i]
    return abs(det)


def _search_generator(field: quad.QuadraticField, s_primes: Sequence[int],
                      target: Sequence[int]) -> quad.Pair:
    """Smallest element whose divisor matches the target valuation vector."""
    D = field.D
    norm_mag = 1
    for p, e in zip(s_primes, target):
        weight = 1 if field.splitting_type(p) == "ramified" else 2
        norm_mag *= p ** (e * weight)
    unit_mag = float(field.fundamental_unit[0]) + \
        float(field.fundamental_unit[1]) * D ** 0.5
    vbound = int(((unit_mag + 1.0) * (4 * norm_mag) ** 0.5) / D ** 0.5) + \
        _GENERATOR_SEARCH_SLACK
    for v in range(0, vbound + 1):
        for n4 in (4 * norm_mag + D * v * v, D * v * v - 4 * norm_mag):
            if n4 <= 0:
                continue
            u = isqrt(n4)
            if u * u != n4:
                continue
            if not ((u % 2 == 0 and v % 2 == 0)
                    or (D % 4 == 1 and (u - v) % 2 == 0)):
                continue
            cand = (Fraction(u, 2), Fraction(v, 2))
            if cand == (Fraction(0), Fraction(0)):
                continue
            if field.valuation_vector(cand, s_primes) == list(target):
                return cand
    raise ArithmeticError(
        f"no generator with valuation pattern {list(target)} found within "
        f"the search bound; the pattern may not be principal")


def _quadratic_sunit_pairs(field: quad.QuadraticField,
                           s_primes: Sequence[int],
                           pinned_s_part) -> List[quad.Pair]:
    """Fundamental unit plus a complete S-part, verified against the
    class group."""
    lattice = _principal_valuation_lattice(field, s_primes)
    expected_index = field.prime_subgroup_order(s_primes)
    r = len(s_primes)
    if _hnf_determinant(lattice, r) != expected_index:
        raise ArithmeticError(
            "principal-valuation lattice disagrees with the class group")

    if pinned_s_part is not None:
        s_part = [_pair_from_strings(e) for e in pinned_s_part]
        if len(s_part) != r:
            raise ValueError(
                f"S-part pin has {len(s_part)} elements, need {r}")
        vectors = [field.valuation_vector(x, s_primes) for x in s_part]
        if row_hnf(vectors) != lattice:
            raise ValueError(
                "pinned S-part does not span the full S-unit valuation "
                "lattice")
    else:
        s_part = [_search_generator(field, s_primes, row) for row in lattice]
    return [field.fundamental_unit] + s_part


def _congruence_rows(field: quad.QuadraticField, residue: quad.ResidueData,
                     pairs: Sequence[quad.Pair]) -> List[List[int]]:
    dlogs = [residue.dlog(x) for x in pairs]
    return congruence_kernel(dlogs, residue.half)


def _congruence_sublattice(m: int, field: quad.QuadraticField,
                           residue: quad.ResidueData,
                           pairs: Sequence[quad.Pair],
                           elems: Sequence[CyclotomicNumber]):
    """Products of the S-unit basis congruent to 1 modulo T, with the
    sign twist by -1 when the plain product is congruent to -1."""
    dlogs = [residue.dlog(x) for x in pairs]
    rows = congruence_kernel(dlogs, residue.half)
    out_elems = []
    out_pairs = []
    for row in rows:
        elem = CyclotomicNumber.one(m)
        pr = (Fraction(1), Fraction(0))
        for b, bq, e in zip(elems, pairs, row):
            if e > 0:
                elem = elem * b ** e
            elif e < 0:
                elem = elem * b.inverse() ** (-e)
            pr = quad.pmul(pr, quad.ppow(bq, e, field.D), field.D)
        s = sum(e * d for e, d in zip(row, dlogs)) % residue.order
        if s == residue.half:
            elem = -elem
            pr = quad.pneg(pr)
        elif s != 0:
            raise ArithmeticError("congruence row escaped its own lattice")
        if quad.reduce_pair(pr, residue.t) != (1, 0):
            raise ArithmeticError(
                "product is not congruent to 1 modulo T despite its "
                "discrete logarithm")
        out_elems.append(elem)
        out_pairs.append(pr)
    return out_elems, out_pairs


# ---------------------------------------------------------------------------
# entry point

def gen_units(req: FieldRequest, presentation: Optional[dict] = None,
              engine=None, cross_check_engine=None,
              precision: int = 60) -> dict:
    """Derive the S-unit (or congruence-unit) basis fixture for a request.

    ``presentation`` may pin {"recipe": ..., "s_part": [[num, num], ...]}
    to reproduce a checked-in fixture byte for byte; without it the
    recipe is chosen from the field degree and S-part generators are
    searched for.  The returned dict has already passed the verifier's
    own loading checks.
    """
    engine = engine or BuiltinEngine()
    presentation = presentation or {}
    recipe = presentation.get("recipe", "auto")
    if recipe == "auto":
        recipe = "quadratic" if req.degree == 2 else "cyclotomic-pool"

    m = req.conductor
    field = RealAbelianField(m, list(req.subgroup_gens))
    placeset = PlaceSet(field, list(req.s_places))
    places = places_of(field, placeset)

    if recipe == "cyclotomic-pool":
        if req.t_primes:
            raise NotImplementedError(
                "congruence sublattices are implemented for the quadratic "
                "recipe only")
        basis_elems = _pool_basis(req)
    elif recipe == "quadratic":
        if req.degree != 2:
            raise ValueError(
                f"quadratic recipe requested but the field has degree "
                f"{req.degree}")
        D = detect_radicand(m, req.subgroup_gens)
        qfield = engine.analyze(D, req.finite_s)
        if cross_check_engine is not None:
            report = cross_check_engine.quadratic_report(D, req.finite_s)
            cross_check(qfield, report, req.finite_s)
        pairs = _quadratic_sunit_pairs(qfield, req.finite_s,
                                       presentation.get("s_part"))
        sqrt_d = sqrt_embedding(m, D)
        basis_elems = [pair_to_cyclotomic(m, x, sqrt_d) for x in pairs]
        if req.t_primes:
            if len(req.t_primes) != 1:
                raise NotImplementedError(
                    "the embedded engine supports a single congruence prime")
            t = req.t_primes[0]
            if qfield.splitting_type(t) != "inert":
                raise NotImplementedError(
                    f"congruence prime {t} is not inert in Q(sqrt({D})); "
                    f"use the PARI/GP driver for split or ramified primes")
            residue = quad.ResidueData(qfield, t)
            basis_elems, pairs = _congruence_sublattice(
                m, qfield, residue, pairs, basis_elems)
    else:
        raise ValueError(f"unknown recipe {recipe!r}")

    if len(basis_elems) != len(places) - 1:
        raise ArithmeticError(
            f"basis size {len(basis_elems)} does not match the S-unit rank "
            f"{len(places) - 1}")

    fixture = {
        "field": req.field_dict(),
        "S": list(req.s_places),
    }
    if req.t_primes or presentation.get("explicit_empty_t"):
        fixture["T"] = list(req.t_primes)
    fixture["basis"] = [list(b.to_strings()) for b in basis_elems]
    fixture["action"] = action_table(field, places, basis_elems, precision)

    SUnitBasis.from_dict(fixture)  # the verifier's own exactness checks
    return fixture
