"""Real abelian number fields presented inside cyclotomic fields.

A field is the fixed field L of a subgroup H of (Z/m)^x acting on the m-th
cyclotomic field; H must contain -1 so that L is real, and m must be the
true conductor of L.  On top of the field this module provides:

* decomposition and inertia subgroups of rational primes in G = (Z/m)^x / H,
* places of L above a chosen set of rational places, the permutation module
  Y built from them, its augmentation kernel X, and the projection of Y onto
  the archimedean block,
* numerical embeddings, normalized absolute values, and the logarithmic
  (Dirichlet) regulator vector of S-units,
* fixture-backed S-unit bases: a JSON file carrying exact cyclotomic
  coordinates for a basis of the S-units (or T-modified S-units) together
  with the Galois action on exponent vectors, re-verified exactly on load,
* exact expression of a multiplicative element as a rational-exponent
  combination of a loaded basis, certified by an exact power identity.

Everything exact is computed with rational cyclotomic arithmetic; floating
point enters only through mpmath evaluations at a stated decimal precision,
with tolerances of 10^(-precision/2).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from mpmath import mp

from .cyclotomic import CyclotomicNumber
from .groupring import FiniteAbelianGroup, GroupRingElement
from .lattice import GLattice, coset_representatives
from . import normforms

__all__ = [
    "RealAbelianField",
    "PlaceSet",
    "Place",
    "SUnitBasis",
    "MultiplicativeElement",
    "decomposition_group",
    "inertia_group",
    "places_of",
    "build_place_modules",
    "embed",
    "log_abs",
    "dirichlet_regulator",
    "express_in_basis",
    "field_norm",
    "norm_to_subfield",
    "congruent_to_one_mod_prime",
]

PRECISION_FLOOR = 20


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _ord_p(value: Fraction, p: int) -> int:
    if value == 0:
        raise ValueError("order of zero is undefined")
    ord_ = 0
    num = value.numerator
    while num % p == 0:
        num //= p
        ord_ += 1
    den = value.denominator
    while den % p == 0:
        den //= p
        ord_ -= 1
    return ord_


def _mpq(q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def _tolerance(precision: int):
    return mp.power(10, -mp.mpf(precision) / 2)


def _check_precision(precision: int) -> int:
    precision = int(precision)
    if precision < PRECISION_FLOOR:
        raise ValueError(f"precision below floor: need at least {PRECISION_FLOOR} digits")
    return precision


def _crt(r1: int, n1: int, r2: int, n2: int) -> int:
    inv = pow(n1, -1, n2)
    return (r1 + n1 * (((r2 - r1) * inv) % n2)) % (n1 * n2)


# --------------------------------------------------------------------------
# fields


class RealAbelianField:
    """The fixed field of H <= (Z/m)^x inside the m-th cyclotomic field."""

    __slots__ = ("conductor", "subgroup_gens", "subgroup", "group", "degree")

    def __init__(self, conductor: int, subgroup_gens):
        m = int(conductor)
        if m < 3:
            raise ValueError("conductor must be at least 3 for a nontrivial field")
        gens = tuple(int(a) % m for a in subgroup_gens)
        for a in gens:
            if gcd(a, m) != 1:
                raise ValueError(f"subgroup generator {a} is not a unit mod {m}")
        sub = {1}
        frontier = [1]
        while frontier:
            x = frontier.pop()
            for a in gens:
                y = (x * a) % m
                if y not in sub:
                    sub.add(y)
                    frontier.append(y)
        if (m - 1) not in sub:
            raise ValueError("subgroup does not contain -1 mod m: the field is not real")
        units = [a for a in range(1, m) if gcd(a, m) == 1]
        for m2 in range(1, m):
            if m % m2 != 0:
                continue
            kernel = {a for a in units if a % m2 == 1 % m2}
            if kernel <= sub:
                raise ValueError(
                    f"conductor is not minimal: the fixed field is already defined modulo {m2}"
                )
        self.conductor = m
        self.subgroup_gens = gens
        self.subgroup = tuple(sorted(sub))
        self.group = FiniteAbelianGroup.from_unit_quotient(m, gens)
        self.degree = self.group.order

    @classmethod
    def from_dict(cls, data: dict) -> "RealAbelianField":
        return cls(data["conductor"], data["subgroup_gens"])

    def lift(self, x: CyclotomicNumber) -> CyclotomicNumber:
        if x.conductor == self.conductor:
            return x
        if self.conductor % x.conductor == 0:
            return x.lift(self.conductor)
        raise ValueError(
            f"cyclotomic number of conductor {x.conductor} does not sit inside "
            f"conductor {self.conductor}"
        )

    def contains(self, x: CyclotomicNumber) -> bool:
        try:
            x = self.lift(x)
        except ValueError:
            return False
        return all(x.conjugate(a) == x for a in self.subgroup_gens)

    def apply_galois(self, el, x: CyclotomicNumber) -> CyclotomicNumber:
        residue = self.group.residue_of(tuple(el))
        return self.lift(x).conjugate(residue)

    def __eq__(self, other):
        if not isinstance(other, RealAbelianField):
            return NotImplemented
        return self.conductor == other.conductor and self.subgroup == other.subgroup

    def __hash__(self):
        return hash((self.conductor, self.subgroup))

    def __repr__(self):
        return f"RealAbelianField(conductor={self.conductor}, subgroup={list(self.subgroup)})"


def _require_in_field(field: RealAbelianField, x: CyclotomicNumber) -> CyclotomicNumber:
    x = field.lift(x)
    if not all(x.conjugate(a) == x for a in field.subgroup_gens):
        raise ValueError("element is not fixed by the field's subgroup")
    return x


def _subgroup_closure(group, elements) -> tuple:
    seen = {group.identity}
    frontier = [group.identity]
    gens = [tuple(e) for e in elements]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = group.mul(x, g)
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return tuple(sorted(seen))


def decomposition_group(field: RealAbelianField, p: int) -> tuple:
    """Elements of G fixing a place of L over p (Frobenius and inertia)."""
    p = int(p)
    if not _is_prime(p):
        raise ValueError(f"{p} is not a prime")
    m = field.conductor
    group = field.group
    rest = m
    while rest % p == 0:
        rest //= p
    if rest == m:
        return _subgroup_closure(group, [group.class_of(p % m)])
    gens = [group.class_of(a) for a in _inertia_residues(m, p, rest)]
    if rest > 1:
        frob = _crt(1, m // rest, p % rest, rest)
        gens.append(group.class_of(frob))
    return _subgroup_closure(group, gens)


def _inertia_residues(m: int, p: int, rest: int):
    return [a for a in range(1, m) if gcd(a, m) == 1 and a % rest == 1 % rest]


def inertia_group(field: RealAbelianField, p: int) -> tuple:
    """Elements of G acting trivially on the residue field at p."""
    p = int(p)
    if not _is_prime(p):
        raise ValueError(f"{p} is not a prime")
    m = field.conductor
    rest = m
    while rest % p == 0:
        rest //= p
    if rest == m:
        return (field.group.identity,)
    gens = [field.group.class_of(a) for a in _inertia_residues(m, p, rest)]
    return _subgroup_closure(field.group, gens)


# --------------------------------------------------------------------------
# places


class PlaceSet:
    """The archimedean place plus a set of rational primes, with their
    decomposition subgroups in G."""

    __slots__ = ("field", "entries", "primes", "_decomposition")

    def __init__(self, field: RealAbelianField, entries):
        primes = []
        has_inf = False
        for entry in entries:
            if entry == "inf":
                has_inf = True
                continue
            p = int(entry)
            if not _is_prime(p):
                raise ValueError(f"place entry {p} is not a prime")
            primes.append(p)
        if not has_inf:
            raise ValueError('a place set must contain "inf"')
        if len(set(primes)) != len(primes):
            raise ValueError("duplicate primes in the place set")
        self.field = field
        self.primes = tuple(sorted(primes))
        self.entries = ("inf",) + self.primes
        self._decomposition = {p: decomposition_group(field, p) for p in self.primes}

    @classmethod
    def canonical(cls, field: RealAbelianField) -> "PlaceSet":
        m = field.conductor
        primes = [p for p in range(2, m + 1) if _is_prime(p) and m % p == 0]
        return cls(field, ["inf"] + primes)

    def decomposition(self, p: int) -> tuple:
        return self._decomposition[int(p)]

    @property
    def is_canonical(self) -> bool:
        m = self.field.conductor
        want = tuple(p for p in range(2, m + 1) if _is_prime(p) and m % p == 0)
        return self.primes == want

    def __eq__(self, other):
        if not isinstance(other, PlaceSet):
            return NotImplemented
        return self.field == other.field and self.entries == other.entries

    def __hash__(self):
        return hash((self.field, self.entries))

    def __repr__(self):
        return f"PlaceSet({self.field!r}, {list(self.entries)})"


class Place:
    """A place of L lying over a rational place."""

    __slots__ = (
        "kind",
        "prime",
        "coset",
        "residue_degree",
        "ramification_index",
        "decomposition_order",
        "residue",
    )

    def __init__(self, kind, prime, coset, residue_degree, ramification_index,
                 decomposition_order, residue):
        self.kind = kind
        self.prime = prime
        self.coset = coset
        self.residue_degree = residue_degree
        self.ramification_index = ramification_index
        self.decomposition_order = decomposition_order
        self.residue = residue

    @property
    def norm(self):
        if self.kind != "fin":
            return None
        return self.prime ** self.residue_degree

    @property
    def label(self) -> str:
        head = "inf" if self.kind == "inf" else str(self.prime)
        return f"{head}[{self.residue}]"

    def __repr__(self):
        return f"Place({self.label})"


def places_of(field: RealAbelianField, placeset: PlaceSet) -> list:
    """The places of L over the place set, in the coordinate order of Y."""
    group = field.group
    out = []
    for entry in placeset.entries:
        if entry == "inf":
            for el in coset_representatives(group, [group.identity]):
                out.append(Place("inf", None, el, 1, 1, 1, group.residue_of(el)))
            continue
        dec = placeset.decomposition(entry)
        ine = inertia_group(field, entry)
        e = len(ine)
        f = len(dec) // e
        for el in coset_representatives(group, dec):
            out.append(Place("fin", entry, el, f, e, len(dec), group.residue_of(el)))
    return out


def build_place_modules(field: RealAbelianField, placeset: PlaceSet):
    """The permutation module Y over the places, its augmentation kernel X,
    and the projection matrix of Y onto the archimedean block."""
    group = field.group
    blocks = [GLattice.coset_module(group, [group.identity])]
    for p in placeset.primes:
        blocks.append(GLattice.coset_module(group, placeset.decomposition(p)))
    y = blocks[0]
    for block in blocks[1:]:
        y = GLattice.direct_sum(y, block)
    ones = [[1] for _ in range(y.ambient_dim)]
    kernel = normforms.integer_kernel(ones)
    x = GLattice(group, y.ambient_dim, kernel, y.actions)
    proj = [
        [int(i == j) for j in range(group.order)]
        for i in range(y.ambient_dim)
    ]
    return y, x, proj


# --------------------------------------------------------------------------
# numerical embeddings and logarithms


def embed(x: CyclotomicNumber, precision: int) -> dict:
    """Numerical values of x under every embedding of its cyclotomic field,
    keyed by the residue a of the map sending the root of unity to its a-th
    power."""
    precision = _check_precision(precision)
    if x.is_zero():
        raise ValueError("cannot embed zero")
    m = x.conductor
    out = {}
    for a in range(1, max(m, 2)):
        if gcd(a, m) == 1:
            out[a] = x.embed(a, precision)
    return out


def log_abs(field: RealAbelianField, x: CyclotomicNumber, place: Place,
            precision: int):
    """log of the normalized absolute value of x at a place of L.

    Archimedean places are labeled so that the place carried by a group
    element c evaluates x through the inverse residue; this makes the
    regulator map commute with the group action.  Finite places use
    (norm)^(-ord), with the valuation computed exactly from the rational
    field norm; this requires the place to be the only one over its prime.
    """
    precision = _check_precision(precision)
    if x.is_zero():
        raise ValueError("cannot take log_abs of zero")
    x = _require_in_field(field, x)
    if place.kind == "inf":
        m = field.conductor
        residue = field.group.residue_of(place.coset)
        inv = pow(residue, -1, m)
        with mp.workdps(precision + 10):
            value = x.embed(inv, precision)
            return mp.log(abs(value))
    if place.decomposition_order < field.group.order:
        raise ValueError(
            "finite place over a split prime: exact valuations are only "
            "supported when a single place lies over the prime"
        )
    norm = field_norm(field, x)
    o = _ord_p(norm, place.prime)
    f = place.residue_degree
    if o % f != 0:
        raise ValueError("valuation bookkeeping failed: norm order not divisible by f")
    ow = o // f
    if ow == 0:
        return mp.mpf(0)
    with mp.workdps(precision + 10):
        return -ow * f * mp.log(place.prime)


# --------------------------------------------------------------------------
# exact norms and congruences


def field_norm(field: RealAbelianField, x: CyclotomicNumber) -> Fraction:
    """The norm of x from L down to the rationals, computed exactly."""
    x = _require_in_field(field, x)
    group = field.group
    acc = CyclotomicNumber.one(field.conductor)
    for el in group.elements():
        acc = acc * x.conjugate(group.residue_of(el))
    if not acc.is_rational():
        raise ValueError("norm computation did not land in the rationals")
    return acc.rational_value()


def norm_to_subfield(field: RealAbelianField, x: CyclotomicNumber) -> CyclotomicNumber:
    """The norm of x from the cyclotomic field down to L (product of the
    conjugates over the fixing subgroup)."""
    x = field.lift(x)
    acc = CyclotomicNumber.one(field.conductor)
    for a in field.subgroup:
        acc = acc * x.conjugate(a)
    return acc


def congruent_to_one_mod_prime(x: CyclotomicNumber, t: int) -> bool:
    """Exact test that x = 1 at every place over t (t odd, unramified).

    For such t the radical of t in the cyclotomic integers is t itself, so
    the congruence holds at every place over t iff d*(x - 1) has all
    coefficients divisible by t, where d is the coefficient denominator
    (necessarily prime to t)."""
    t = int(t)
    if not _is_prime(t) or t == 2 or x.conductor % t == 0:
        raise ValueError("congruence test requires an odd unramified prime")
    denom = 1
    for c in x.coeffs:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    if denom % t == 0:
        return False
    scaled = [c * denom for c in x.coeffs]
    head = scaled[0] - denom
    if head.numerator % t != 0:
        return False
    return all(c.numerator % t == 0 for c in scaled[1:])


# --------------------------------------------------------------------------
# S-unit bases (fixture-backed)


class SUnitBasis:
    """A verified basis of the S-units (or T-modified S-units) of L.

    Loaded from JSON fixtures; every invariant is re-verified on load:
    the Dirichlet rank, membership in L, the torsion-aware Galois action
    matrices (exactly, in the cyclotomic field), and for T-fixtures the
    congruence of each basis element to 1 at the places over T."""

    __slots__ = ("field", "placeset", "T", "elements", "rank", "places", "_action")

    def __init__(self, field, placeset, T, elements, action):
        self.field = field
        self.placeset = placeset
        self.T = T
        self.elements = elements
        self.rank = len(elements)
        self.places = places_of(field, placeset)
        self._action = action

    @classmethod
    def load(cls, path) -> "SUnitBasis":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    @classmethod
    def from_dict(cls, data: dict) -> "SUnitBasis":
        field = RealAbelianField.from_dict(data["field"])
        placeset = PlaceSet(field, data["S"])
        m = field.conductor
        t_list = tuple(sorted(int(t) for t in data.get("T", [])))
        for t in t_list:
            if not _is_prime(t):
                raise ValueError(f"T entry {t} is not a prime")
            if t == 2:
                raise ValueError("T must consist of odd primes (torsion-freeness)")
            if t in placeset.primes or m % t == 0:
                raise ValueError(f"T entry {t} collides with S or with the ramified primes")
        if len(t_list) != len(set(t_list)):
            raise ValueError("duplicate T entries")

        elements = tuple(
            CyclotomicNumber.from_strings(m, coeffs) for coeffs in data["basis"]
        )
        places = places_of(field, placeset)
        n = len(places) - 1
        if len(elements) != n:
            raise ValueError(
                f"basis has {len(elements)} elements but the S-unit rank is {n}"
            )
        one = CyclotomicNumber.one(m)
        for i, b in enumerate(elements):
            if b.is_zero():
                raise ValueError(f"basis element {i} is zero")
            if not all(b.conjugate(a) == b for a in field.subgroup_gens):
                raise ValueError(f"basis element {i} is not fixed by the field subgroup")
        if t_list:
            for i, b in enumerate(elements):
                if b == one:
                    raise ValueError(f"basis element {i} equals 1")
                norm = field_norm(field, b - one)
                for t in t_list:
                    if _ord_p(norm, t) < 1:
                        raise ValueError(
                            f"basis element {i} violates the T-congruence at {t}"
                        )
                _numeric_norm_check(field, b - one, norm)

        action = _verify_action(field, elements, data["action"], bool(t_list))
        return cls(field, placeset, t_list, elements, action)

    def action_matrix(self, el) -> tuple:
        return self._action[tuple(el)][0]

    def action_signs(self, el) -> tuple:
        return self._action[tuple(el)][1]

    def unit_lattice(self) -> GLattice:
        """Exponent vectors of S-units as a lattice with the Galois action."""
        group = self.field.group
        actions = []
        for gi in range(len(group.invariants)):
            gen = tuple(int(j == gi) for j in range(len(group.invariants)))
            mat = [[Fraction(v) for v in row] for row in self.action_matrix(gen)]
            actions.append(mat)
        basis = [[Fraction(int(i == j)) for j in range(self.rank)] for i in range(self.rank)]
        return GLattice(group, self.rank, basis, actions)

    def log_matrix(self, precision: int) -> list:
        """Rows: basis elements; columns: places, log of the absolute value."""
        return [
            [log_abs(self.field, b, w, precision) for w in self.places]
            for b in self.elements
        ]


def _numeric_norm_check(field, x, exact_norm: Fraction, precision: int = 60):
    group = field.group
    with mp.workdps(precision + 10):
        product = mp.mpf(1)
        for el in group.elements():
            residue = group.residue_of(el)
            product *= abs(x.embed(residue, precision))
        target = abs(_mpq(exact_norm))
        scale = max(mp.mpf(1), target)
        if abs(product - target) > scale * _tolerance(precision):
            raise ValueError("numeric norm check failed for a T-congruence")


def _verify_action(field, elements, table: dict, torsion_free: bool) -> dict:
    group = field.group
    n = len(elements)
    expected = {}
    for el in group.elements():
        if el == group.identity:
            continue
        expected[str(group.residue_of(el))] = el
    if set(table) != set(expected):
        missing = sorted(set(expected) - set(table))
        extra = sorted(set(table) - set(expected))
        raise ValueError(
            f"action table keys do not match the group: missing {missing}, unknown {extra}"
        )
    action = {
        group.identity: (
            tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
            tuple(1 for _ in range(n)),
        )
    }
    for key, el in expected.items():
        entry = table[key]
        matrix = tuple(tuple(int(v) for v in row) for row in entry["matrix"])
        signs = tuple(int(s) for s in entry["signs"])
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ValueError(f"action matrix for residue {key} has the wrong shape")
        if len(signs) != n or any(s not in (1, -1) for s in signs):
            raise ValueError(f"action signs for residue {key} must be +-1")
        if torsion_free and any(s != 1 for s in signs):
            raise ValueError(
                "T-unit fixtures are torsion-free: action signs must all be +1"
            )
        residue = int(key)
        for i in range(n):
            lhs = elements[i].conjugate(residue)
            rhs = CyclotomicNumber.one(field.conductor)
            for j in range(n):
                e = matrix[i][j]
                if e > 0:
                    rhs = rhs * elements[j] ** e
                elif e < 0:
                    lhs = lhs * elements[j] ** (-e)
            if signs[i] == -1:
                rhs = -rhs
            if lhs != rhs:
                raise ValueError(
                    f"action matrix for residue {key} does not reproduce the "
                    f"conjugate of basis element {i}"
                )
        action[el] = (matrix, signs)
    return action


# --------------------------------------------------------------------------
# multiplicative elements


class MultiplicativeElement:
    """A rational-exponent combination of the elements of an SUnitBasis."""

    __slots__ = ("basis", "exponents")

    def __init__(self, basis: SUnitBasis, exponents):
        exps = tuple(Fraction(e) for e in exponents)
        if len(exps) != basis.rank:
            raise ValueError("exponent vector length does not match the basis rank")
        self.basis = basis
        self.exponents = exps

    def apply_element(self, el) -> "MultiplicativeElement":
        mat = self.basis.action_matrix(el)
        n = self.basis.rank
        exps = [
            sum((self.exponents[i] * mat[i][j] for i in range(n)), Fraction(0))
            for j in range(n)
        ]
        return MultiplicativeElement(self.basis, exps)

    def apply_ring(self, x: GroupRingElement) -> "MultiplicativeElement":
        group = self.basis.field.group
        if x.group is not group and x.group != group:
            raise ValueError("group-ring element belongs to a different group")
        total = [Fraction(0)] * self.basis.rank
        for el, coeff in x.coeffs.items():
            if isinstance(coeff, CyclotomicNumber):
                raise ValueError("group-ring action requires rational coefficients")
            moved = self.apply_element(el).exponents
            for j in range(self.basis.rank):
                total[j] += Fraction(coeff) * moved[j]
        return MultiplicativeElement(self.basis, total)

    def __mul__(self, other):
        if not isinstance(other, MultiplicativeElement) or other.basis is not self.basis:
            return NotImplemented
        return MultiplicativeElement(
            self.basis, [a + b for a, b in zip(self.exponents, other.exponents)]
        )

    def __pow__(self, k: int):
        return self.scale(Fraction(int(k)))

    def scale(self, q) -> "MultiplicativeElement":
        q = Fraction(q)
        return MultiplicativeElement(self.basis, [q * e for e in self.exponents])

    @property
    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.exponents)

    def value(self) -> CyclotomicNumber:
        """The exact product of basis powers (integer exponents only)."""
        if not self.is_integral:
            raise ValueError("value requires integer exponents")
        acc = CyclotomicNumber.one(self.basis.field.conductor)
        for b, e in zip(self.basis.elements, self.exponents):
            k = int(e)
            if k != 0:
                acc = acc * b ** k
        return acc

    def __eq__(self, other):
        if not isinstance(other, MultiplicativeElement):
            return NotImplemented
        return self.basis is other.basis and self.exponents == other.exponents

    def __repr__(self):
        return f"MultiplicativeElement({[str(e) for e in self.exponents]})"


# --------------------------------------------------------------------------
# regulator and basis expression


def dirichlet_regulator(u: MultiplicativeElement, placeset: PlaceSet,
                        precision: int = 60) -> list:
    """The vector of log-absolute-values of u over the places, in the
    coordinate order of Y; its coordinates sum to zero up to tolerance."""
    precision = _check_precision(precision)
    if u.basis.placeset != placeset:
        raise ValueError("place set mismatch: the element lives on a different place set")
    logm = u.basis.log_matrix(precision)
    n = u.basis.rank
    out = []
    with mp.workdps(precision + 10):
        for w in range(len(u.basis.places)):
            out.append(mp.fsum(_mpq(u.exponents[i]) * logm[i][w] for i in range(n)))
    return out


def express_in_basis(x, basis: SUnitBasis, precision: int = 60,
                     denominator_bound: int = 2) -> MultiplicativeElement:
    """Write a formal product of field elements as a rational-exponent
    combination of the basis.

    The exponents are found from the logarithmic embedding, reconstructed
    as rationals with denominator at most the bound, then certified by the
    exact identity  x^D = (+-1) * (basis product)^D  in the cyclotomic
    field, where D clears all denominators."""
    precision = _check_precision(precision)
    if isinstance(x, CyclotomicNumber):
        factors = [(x, Fraction(1))]
    else:
        factors = [(y, Fraction(q)) for y, q in x]
    if not factors:
        raise ValueError("empty product")
    field = basis.field
    clean = []
    for y, q in factors:
        if y.is_zero():
            raise ValueError("cannot express zero")
        clean.append((_require_in_field(field, y), q))

    places = basis.places
    n = basis.rank
    logm = basis.log_matrix(precision)
    with mp.workdps(precision + 10):
        target = [
            mp.fsum(_mpq(q) * log_abs(field, y, w, precision) for y, q in clean)
            for w in places
        ]
        matrix = mp.matrix(n, n)
        rhs = mp.matrix(n, 1)
        for wi in range(n):
            rhs[wi, 0] = target[wi]
            for i in range(n):
                matrix[wi, i] = logm[i][wi]
        try:
            solution = mp.lu_solve(matrix, rhs)
        except ZeroDivisionError as exc:
            raise ValueError("basis logarithm matrix is singular") from exc
        tol = _tolerance(precision)
        exps = []
        for i in range(n):
            val = solution[i, 0]
            best = None
            for den in range(1, denominator_bound + 1):
                num = int(mp.nint(val * den))
                if abs(val - mp.mpf(num) / den) < tol:
                    best = Fraction(num, den)
                    break
            if best is None:
                raise ValueError(
                    f"exponent reconstruction failed: denominator exceeds {denominator_bound}"
                )
            exps.append(best)
        for wi in range(len(places)):
            residual = mp.fsum(_mpq(exps[i]) * logm[i][wi] for i in range(n)) - target[wi]
            if abs(residual) > tol:
                raise ValueError(
                    "logarithmic residual too large: element is not in the span of the basis"
                )

    scale = 1
    for e in exps:
        scale = scale * e.denominator // gcd(scale, e.denominator)
    for _, q in clean:
        scale = scale * q.denominator // gcd(scale, q.denominator)
    check = CyclotomicNumber.one(field.conductor)
    for y, q in clean:
        check = check * y ** int(q * scale)
    for b, e in zip(basis.elements, exps):
        k = int(e * scale)
        if k != 0:
            check = check * b ** (-k)
    one = CyclotomicNumber.one(field.conductor)
    if check != one and check != -one:
        raise ValueError(
            "exact verification failed: element is not in the span of the basis"
        )
    return MultiplicativeElement(basis, exps)
