"""Distinguished units with prescribed logarithmic leading terms.

This module constructs, from a verified S-unit fixture of a real abelian
field, the distinguished element whose square is the norm of ``1 - zeta``
to the field, together with its congruence-modified variants, and provides
the verification battery around it:

* ``rank_one_idempotent`` -- the sum of the character idempotents whose
  attached L-series vanish to order exactly one at the origin;
* ``euler_factor_product`` -- the product of group-ring Euler factors
  ``1 - p * sigma_p^{-1}`` over a set of auxiliary congruence primes;
* ``verify_integrality`` -- membership of the group orbit of the modified
  element in the dual-integral first wedge lattice, with the index of the
  orbit span inside the idempotent-fixed part;
* ``evaluation_ideal`` -- the lattice of values of an integral functional
  basis on the modified element;
* ``verify_fitting_equality`` -- comparison of the evaluation lattice with
  the first determinantal ideal of a presented companion module;
* ``verify_annihilation`` -- the evaluation lattice acting on a finite
  class module;
* ``isotypic_dimension_check`` -- character-by-character dimensions of the
  dual-integral wedge lattices against binomial predictions;
* ``verify_regulator_identity`` -- the high-precision identity between the
  place-indexed logarithm vector of the element and the equivariant
  leading-term coefficients applied to a difference of places.

All algebraic verification is exact rational arithmetic; only the final
regulator identity is floating point, at a caller-chosen precision.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction

from mpmath import mp

from . import normforms
from .cyclotomic import CyclotomicNumber, zeta_power
from .groupring import (
    GroupRingElement,
    IdealLattice,
    character_idempotent,
    characters_of,
)
from .lattice import (
    FiniteGModule,
    GLattice,
    Presentation,
    WedgeSpace,
    annihilates,
    classical_fitting_ideal,
    presentation_of,
    quotient_invariants,
    rubin_lattice,
)
from .lseries import character_label, equivariant_leading_term, vanishing_order
from .numberfield import (
    MultiplicativeElement,
    PlaceSet,
    RealAbelianField,
    SUnitBasis,
    _is_prime,
    build_place_modules,
    decomposition_group,
    dirichlet_regulator,
    express_in_basis,
    norm_to_subfield,
    places_of,
)

__all__ = [
    "REGULATOR_SIGN",
    "SelmerFixture",
    "StarkUnit",
    "cyclotomic_stark_unit",
    "euler_factor_product",
    "evaluation_ideal",
    "isotypic_dimension_check",
    "rank_one_idempotent",
    "t_modified_unit",
    "verify_annihilation",
    "verify_fitting_equality",
    "verify_integrality",
    "verify_regulator_identity",
]

# The shipped distinguished element is the positive square root of the
# norm of 1 - zeta; the leading-term identity holds for its inverse, so
# regulator vectors are compared after multiplication by this sign.
REGULATOR_SIGN = -1


def _rational_coefficient(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if c.is_rational():
        return c.rational_value()
    raise ValueError("expected a rational group-ring coefficient")


def rank_one_idempotent(field: RealAbelianField, placeset: PlaceSet) -> GroupRingElement:
    """Sum of the character idempotents with vanishing order exactly one.

    The set of such characters is stable under inversion, so the sum has
    rational coefficients and is itself an idempotent of the group ring.
    """
    group = field.group
    total = None
    for chi in characters_of(group):
        if vanishing_order(chi, field, placeset) == 1:
            e = character_idempotent(chi)
            total = e if total is None else total + e
    if total is None:
        return GroupRingElement.zero(group)
    coeffs = {}
    for g, c in total.coeffs.items():
        f = _rational_coefficient(c)
        if f:
            coeffs[g] = f
    return GroupRingElement(group, coeffs)


def euler_factor_product(field: RealAbelianField, T) -> GroupRingElement:
    """Product over ``t`` in ``T`` of the group-ring factors ``1 - t * sigma_t^{-1}``,
    where ``sigma_t`` is the residue class of ``t`` in the field's group."""
    group = field.group
    out = GroupRingElement.one(group)
    seen = set()
    for t in T:
        t = int(t)
        if not _is_prime(t):
            raise ValueError(f"auxiliary modulus {t} is not prime")
        if field.conductor % t == 0:
            raise ValueError(f"auxiliary prime {t} divides the conductor {field.conductor}")
        if t in seen:
            raise ValueError(f"auxiliary prime {t} repeats")
        seen.add(t)
        sigma_inv = group.inv(group.class_of(t))
        coeffs = {group.identity: Fraction(1)}
        coeffs[sigma_inv] = coeffs.get(sigma_inv, Fraction(0)) - Fraction(t)
        out = out * GroupRingElement(group, coeffs)
    return out


class StarkUnit:
    """A half-integral exponent vector over a verified S-unit basis that is
    fixed by the rank-one idempotent and integral after doubling."""

    __slots__ = ("element", "field", "placeset", "T", "e_pi")

    def __init__(self, element: MultiplicativeElement, field: RealAbelianField,
                 e_pi: GroupRingElement):
        basis = element.basis
        if basis.field != field:
            raise ValueError("element basis belongs to a different field")
        if not element.scale(2).is_integral:
            raise ValueError("twice the element must have integer exponents")
        fixed = element.apply_ring(e_pi)
        if fixed != element:
            raise ValueError("element is not fixed by the rank-one idempotent")
        self.element = element
        self.field = field
        self.placeset = basis.placeset
        self.T = basis.T
        self.e_pi = e_pi

    def __repr__(self):
        return (f"StarkUnit(conductor={self.field.conductor}, T={list(self.T)}, "
                f"exponents={[str(q) for q in self.element.exponents]})")


def cyclotomic_stark_unit(field: RealAbelianField, basis: SUnitBasis,
                          precision: int = 60) -> StarkUnit:
    """The half-power of the norm of ``1 - zeta`` expressed over the basis.

    The basis must carry no auxiliary congruence primes and must use the
    canonical place set.  Failure to express the half-power with
    denominator at most two means the basis does not span the full S-unit
    group and is reported as a fixture inconsistency.
    """
    if basis.field != field:
        raise ValueError("basis belongs to a different field")
    if basis.T:
        raise ValueError("expected a basis with empty T (no auxiliary congruence primes)")
    if not basis.placeset.is_canonical:
        raise ValueError("the distinguished element lives over the canonical place set")
    m = field.conductor
    norm_value = norm_to_subfield(field, CyclotomicNumber.one(m) - zeta_power(m, 1))
    try:
        element = express_in_basis([(norm_value, Fraction(1, 2))], basis,
                                   precision=precision)
    except ValueError as exc:
        raise ValueError(f"fixture inconsistency: {exc}") from exc
    e_pi = rank_one_idempotent(field, basis.placeset)
    return StarkUnit(element, field, e_pi)


def t_modified_unit(stark: StarkUnit, t_basis: SUnitBasis,
                    precision: int = 60) -> StarkUnit:
    """Apply the Euler-factor product of the auxiliary primes of ``t_basis``
    to the element and re-express the result over that congruence basis."""
    if t_basis.field != stark.field:
        raise ValueError("auxiliary basis belongs to a different field")
    if t_basis.placeset != stark.placeset:
        raise ValueError("auxiliary basis uses a different place set")
    if not t_basis.T:
        raise ValueError("auxiliary basis carries no congruence primes (empty T)")
    gamma = euler_factor_product(stark.field, t_basis.T)
    moved = stark.element.apply_ring(gamma)
    factors = [(b, q) for b, q in zip(stark.element.basis.elements, moved.exponents) if q]
    if not factors:
        element = MultiplicativeElement(t_basis, (Fraction(0),) * t_basis.rank)
    else:
        try:
            element = express_in_basis(factors, t_basis, precision=precision)
        except ValueError as exc:
            raise ValueError(f"fixture inconsistency: {exc}") from exc
    return StarkUnit(element, stark.field, stark.e_pi)


# --------------------------------------------------------------------------
# integrality


def _ring_action_matrix(lattice: GLattice, x: GroupRingElement):
    """Matrix of a rational group-ring element on the ambient coordinates."""
    dim = lattice.ambient_dim
    out = [[Fraction(0)] * dim for _ in range(dim)]
    for g, c in x.coeffs.items():
        mat = lattice.element_action(g)
        for i in range(dim):
            row = mat[i]
            for j in range(dim):
                if row[j]:
                    out[i][j] += c * row[j]
    return out


def verify_integrality(stark: StarkUnit) -> dict:
    """Check that every group translate of the modified element pairs
    integrally against the functional basis, and measure the index of the
    translate span inside the idempotent-fixed part of the dual lattice."""
    if not stark.T:
        raise ValueError("integrality verification needs auxiliary congruence primes (nonempty T)")
    basis = stark.element.basis
    module = basis.unit_lattice()
    wedge = WedgeSpace(module, 1)
    dual = wedge.integral_dual_lattice()
    group = stark.field.group
    rows = []
    member = True
    witness = None
    for g in group.elements():
        vec = list(stark.element.apply_element(g).exponents)
        row = wedge.wedge_coordinates([vec])
        rows.append(row)
        if member and not dual.contains(row):
            member = False
            witness = (f"translate by group element {tuple(g)} pairs "
                       f"non-integrally against the functional basis")
    report = {
        "check": "integrality",
        "passed": bool(member),
        "member": bool(member),
        "index_invariants": None,
        "witness": witness,
    }
    if not member:
        return report
    action = _ring_action_matrix(dual, stark.e_pi)
    dim = dual.ambient_dim
    drift = []
    for brow in dual.basis:
        out = [Fraction(0)] * dim
        for i, x in enumerate(brow):
            if x:
                arow = action[i]
                for j in range(dim):
                    if arow[j]:
                        out[j] += x * arow[j]
        drift.append([out[j] - brow[j] for j in range(dim)])
    den = 1
    for row in drift:
        for x in row:
            den = math.lcm(den, x.denominator)
    kernel = normforms.integer_kernel([[int(x * den) for x in row] for row in drift])
    fixed_rows = []
    for comb in kernel:
        vec = [Fraction(0)] * dim
        for k, c in enumerate(comb):
            if c:
                for j in range(dim):
                    vec[j] += c * dual.basis[k][j]
        fixed_rows.append(vec)
    fixed = GLattice(group, dim, fixed_rows, list(dual.actions), validate=False)
    orbit = GLattice(group, dim, rows, list(dual.actions), validate=False)
    try:
        report["index_invariants"] = quotient_invariants(fixed, orbit)
    except ValueError as exc:
        report["passed"] = False
        report["witness"] = f"orbit span is not commensurable with the fixed part: {exc}"
    return report


# --------------------------------------------------------------------------
# evaluation ideal, Fitting comparison, annihilation


def evaluation_ideal(stark: StarkUnit) -> IdealLattice:
    """Lattice of values of an integral functional basis on the element.

    The functionals form a module over the group ring, so the value span
    is automatically stable under the group action.
    """
    basis = stark.element.basis
    module = basis.unit_lattice()
    wedge = WedgeSpace(module, 1)
    vec = list(stark.element.exponents)
    group = stark.field.group
    values = []
    for phi in wedge.hom_basis:
        value = module.apply_functional(list(phi), vec)
        if not value.is_zero():
            values.append(value)
    if not values:
        return IdealLattice(group, 1, [], is_ideal=True)
    return IdealLattice.from_elements(group, values, claim_ideal=True)


def _ideal_contained(small: IdealLattice, big: IdealLattice) -> bool:
    return all(big.contains(el) for el in small.basis_elements())


def verify_fitting_equality(stark: StarkUnit, selmer: "SelmerFixture") -> dict:
    """Compare the evaluation lattice of the modified element with the first
    determinantal ideal of the fixture's companion presentation."""
    _require_matching_fixture(stark, selmer)
    ideal = evaluation_ideal(stark)
    pres = selmer.selmer_presentation()
    fit1 = classical_fitting_ideal(pres, 1)
    fit0 = classical_fitting_ideal(pres, 0)
    equal = ideal == fit1
    report = {
        "check": "fitting",
        "passed": bool(equal),
        "equal": bool(equal),
        "evaluation_contains_fitting": _ideal_contained(fit1, ideal),
        "fitting_contains_evaluation": _ideal_contained(ideal, fit1),
        "fit0_contained_in_fit1": _ideal_contained(fit0, fit1),
        "witness": None,
    }
    if not equal:
        report["witness"] = (
            f"evaluation lattice rows {ideal.rows} over {ideal.denominator} != "
            f"first determinantal ideal rows {fit1.rows} over {fit1.denominator}"
        )
    if not report["fit0_contained_in_fit1"]:
        report["passed"] = False
        report["witness"] = (report["witness"] or "") + \
            " zeroth determinantal ideal escapes the first"
    return report


def verify_annihilation(stark: StarkUnit, selmer: "SelmerFixture") -> dict:
    """Check that every generator of the evaluation lattice has integer
    coefficients and kills the fixture's extended class module."""
    _require_matching_fixture(stark, selmer)
    ideal = evaluation_ideal(stark)
    module = selmer.cl_SprimeT
    integral = ideal.denominator == 1
    vacuous = module.order == 1
    witness = None
    killed = True
    if not integral:
        killed = False
        witness = (f"evaluation lattice has denominator {ideal.denominator}, "
                   "so its generators are not integral")
    else:
        for gen in ideal.basis_elements():
            if not annihilates(gen, module):
                killed = False
                witness = (f"generator {gen.to_vector()} does not annihilate the "
                           f"class module with invariants {module.invariants}")
                break
    baseline = GroupRingElement.one(stark.field.group).scale(module.order)
    baseline_ok = annihilates(baseline, module)
    return {
        "check": "annihilation",
        "passed": bool(integral and killed and baseline_ok),
        "vacuous": bool(vacuous),
        "generators_integral": bool(integral),
        "baseline_passed": bool(baseline_ok),
        "witness": witness,
    }


def _require_matching_fixture(stark: StarkUnit, selmer: "SelmerFixture") -> None:
    if selmer.field != stark.field:
        raise ValueError("fixture field does not match the element's field")
    if selmer.placeset != stark.placeset:
        raise ValueError("fixture place set does not match the element's place set")
    if tuple(selmer.T) != tuple(stark.T):
        raise ValueError("fixture congruence primes do not match the element's")


# --------------------------------------------------------------------------
# isotypic dimensions


def isotypic_dimension_check(field: RealAbelianField, basis: SUnitBasis,
                             degree: int) -> dict:
    """Character-by-character dimensions of the dual-integral wedge lattice
    of the unit lattice, compared with binomial coefficients of the
    vanishing orders."""
    if degree < 0:
        raise ValueError("wedge degree must be nonnegative")
    group = field.group
    n = group.order
    module = basis.unit_lattice()
    dual = rubin_lattice(module, degree)
    traces = {}
    for g in group.elements():
        if dual.rank == 0:
            traces[g] = Fraction(0)
            continue
        total = Fraction(0)
        for i, brow in enumerate(dual.basis):
            coords = dual.coords_of(dual.apply_element(g, list(brow)))
            total += coords[i]
        traces[g] = total
    rows = []
    passed = True
    for chi in characters_of(group):
        acc = None
        for g in group.elements():
            val = chi.value(group.inv(g))
            term = val * CyclotomicNumber.from_rational(val.conductor, traces[g])
            acc = term if acc is None else acc + term
        acc = acc * CyclotomicNumber.from_rational(acc.conductor, Fraction(1, n))
        if not acc.is_rational():
            raise AssertionError("character multiplicity must be rational")
        mult = acc.rational_value()
        if mult.denominator != 1:
            raise AssertionError("character multiplicity must be an integer")
        dimension = int(mult)
        expected = math.comb(vanishing_order(chi, field, basis.placeset), degree)
        if dimension != expected:
            passed = False
        rows.append({
            "character": character_label(chi),
            "dimension": dimension,
            "expected": expected,
        })
    return {"check": "dimensions", "degree": degree, "passed": bool(passed),
            "characters": rows}


# --------------------------------------------------------------------------
# regulator identity


def verify_regulator_identity(stark: StarkUnit, precision: int = 60,
                              tolerance_exponent: int | None = None) -> dict:
    """Compare the place-indexed logarithm vector of the element (after the
    global sign) with the equivariant leading-term coefficients applied to
    the difference of the distinguished infinite place and the first place
    over the smallest prime divisor of the conductor.

    The vectors must agree to ``10**-tolerance_exponent``; the exponent
    defaults to half the working precision and may not exceed it.
    """
    if stark.T:
        raise ValueError("the leading-term identity applies to the base element (empty T)")
    if tolerance_exponent is None:
        tolerance_exponent = precision // 2
    if 2 * tolerance_exponent > precision:
        raise ValueError("tolerance exponent may not exceed half the precision")
    field = stark.field
    placeset = stark.placeset
    m = field.conductor
    p0 = min(p for p in range(2, m + 1) if m % p == 0 and _is_prime(p))
    places = places_of(field, placeset)
    w0 = next(i for i, w in enumerate(places) if w.kind == "fin" and w.prime == p0)
    term = equivariant_leading_term(field, placeset, precision)
    ymodule, _, _ = build_place_modules(field, placeset)
    with mp.workdps(precision + 10):
        lhs = [REGULATOR_SIGN * x for x in
               dirichlet_regulator(stark.element, placeset, precision)]
        vec = [Fraction(0)] * len(places)
        vec[0] = Fraction(1)
        vec[w0] = Fraction(-1)
        rhs = [mp.mpf(0)] * len(places)
        for g, coeff in term.items():
            moved = ymodule.apply_element(g, vec)
            for j, val in enumerate(moved):
                if val:
                    rhs[j] += coeff * int(val)
        errors = [abs(a - b) for a, b in zip(lhs, rhs)]
        max_error = max(errors)
        tolerance = mp.mpf(10) ** (-tolerance_exponent)
        passed = bool(max_error < tolerance)
        worst = places[errors.index(max_error)].label if not passed else None
        return {
            "check": "regulator",
            "passed": passed,
            "max_error": mp.nstr(max_error, 12),
            "precision": precision,
            "witness": worst,
        }


# --------------------------------------------------------------------------
# companion module fixtures


def _module_from_dict(field: RealAbelianField, data: dict) -> FiniteGModule:
    group = field.group
    invariants = [int(x) for x in data.get("invariants", [])]
    table = data.get("action", {})
    gens = [tuple(int(i == j) for j in range(len(group.invariants)))
            for i in range(len(group.invariants))]
    actions = []
    for gen in gens:
        if not invariants:
            actions.append([])
            continue
        key = str(group.residue_of(gen))
        if key not in table:
            raise ValueError(f"class module action table is missing generator key {key!r}")
        actions.append([[int(x) for x in row] for row in table[key]])
    return FiniteGModule(group, invariants, actions)


def _presentation_from_dict(group, data: dict) -> Presentation:
    rows = data.get("rows")
    if not rows:
        raise ValueError("presentation data must contain nonempty rows")
    matrix = []
    for row in rows:
        entries = []
        for entry in row:
            vec = [Fraction(str(x)) for x in entry]
            entries.append(GroupRingElement.from_vector(group, vec))
        matrix.append(entries)
    return Presentation(group, matrix)


class SelmerFixture:
    """Checked-in description of the companion modules of a modified unit:
    the finite class modules for the full and the reduced place sets, and
    optionally an explicit presentation of the transposed companion module.

    When the class module for the full place set is trivial, the companion
    module is the kernel of the degree map on the place module, so a
    supplied presentation is verified against it through the full chain of
    determinantal ideals.
    """

    __slots__ = ("field", "placeset", "T", "sprime", "cl_ST", "cl_SprimeT",
                 "presentation")

    def __init__(self, field, placeset, T, sprime, cl_ST, cl_SprimeT,
                 presentation=None):
        self.field = field
        self.placeset = placeset
        self.T = tuple(T)
        self.sprime = sprime
        self.cl_ST = cl_ST
        self.cl_SprimeT = cl_SprimeT
        self.presentation = presentation

    @classmethod
    def load(cls, path) -> "SelmerFixture":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_dict(cls, data: dict) -> "SelmerFixture":
        field = RealAbelianField.from_dict(data["field"])
        placeset = PlaceSet(field, data["S"])
        T = []
        for t in data.get("T", []):
            t = int(t)
            if not _is_prime(t) or t == 2:
                raise ValueError(f"congruence prime {t} must be an odd prime")
            if field.conductor % t == 0:
                raise ValueError(f"congruence prime {t} divides the conductor")
            if t in placeset.entries:
                raise ValueError(f"congruence prime {t} lies in S")
            T.append(t)
        T = tuple(sorted(T))
        sprime = PlaceSet(field, data["Sprime"])
        _validate_sprime(field, placeset, sprime)
        cl_st = _module_from_dict(field, data["cl_ST"])
        cl_sprime_t = _module_from_dict(field, data["cl_SprimeT"])
        presentation = None
        raw = data.get("selmer_presentation")
        if raw is not None:
            presentation = _presentation_from_dict(field.group, raw)
            if cl_st.order == 1:
                _verify_presentation_against_place_kernel(field, placeset, presentation)
        return cls(field, placeset, T, sprime, cl_st, cl_sprime_t, presentation)

    def selmer_presentation(self) -> Presentation:
        if self.presentation is not None:
            return self.presentation
        if self.cl_ST.order != 1:
            raise ValueError(
                "the companion module needs an explicit presentation when the "
                "class module is nontrivial"
            )
        _, place_kernel, _ = build_place_modules(self.field, self.placeset)
        return presentation_of(place_kernel)

    def __repr__(self):
        return (f"SelmerFixture(conductor={self.field.conductor}, T={list(self.T)}, "
                f"cl_ST={self.cl_ST.invariants}, cl_SprimeT={self.cl_SprimeT.invariants})")


def _validate_sprime(field, placeset: PlaceSet, sprime: PlaceSet) -> None:
    s_primes = [p for p in placeset.entries if p != "inf"]
    sp_primes = [p for p in sprime.entries if p != "inf"]
    for p in sp_primes:
        if p not in s_primes:
            raise ValueError(f"reduced place set contains {p} outside S")
    split = [p for p in s_primes if len(decomposition_group(field, p)) == 1]
    for p in split:
        if p not in sp_primes:
            raise ValueError(
                f"reduced place set must contain every completely split place of S "
                f"(missing {p})"
            )
    extra = [p for p in sp_primes if p not in split]
    if len(extra) != 1:
        raise ValueError(
            f"reduced place set needs exactly one non-split place of S, got {len(extra)}"
        )


def _verify_presentation_against_place_kernel(field, placeset, pres: Presentation) -> None:
    _, place_kernel, _ = build_place_modules(field, placeset)
    reference = presentation_of(place_kernel)
    top = max(pres.generators, reference.generators) + 1
    for a in range(top + 1):
        if classical_fitting_ideal(pres, a) != classical_fitting_ideal(reference, a):
            raise ValueError(
                f"supplied presentation disagrees with the place kernel at "
                f"determinantal ideal index {a}"
            )
