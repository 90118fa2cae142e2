"""Exact group-ring arithmetic for finite abelian groups, plus a data-driven
extension point for small non-abelian matrix groups.

Provides characters with values in Q(zeta_e), character idempotents, the
inversion anti-involution, reduced norms of group-ring matrices, and
Whitehead-order sublattices presented as canonical integer lattices.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from math import gcd, lcm, prod
from pathlib import Path

from cyclostark import normforms
from cyclostark.cyclotomic import CyclotomicNumber, zeta_power

__all__ = [
    "FiniteAbelianGroup",
    "GCharacter",
    "GroupRingElement",
    "IdealLattice",
    "MatrixGroup",
    "WedderburnComponent",
    "WedderburnData",
    "character_idempotent",
    "characters_of",
    "inversion_involution",
    "reduced_norm",
    "whitehead_sublattice",
]


# --------------------------------------------------------------------------
# scalar helpers (coefficients are Fraction or CyclotomicNumber)


def _canon_scalar(value):
    """Normalize a coefficient: ints become Fractions, rational cyclotomic
    numbers are demoted to Fractions."""
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, CyclotomicNumber) and value.is_rational():
        return value.rational_value()
    if isinstance(value, (Fraction, CyclotomicNumber)):
        return value
    raise TypeError(f"unsupported coefficient type: {type(value).__name__}")


def _scalar_is_zero(value) -> bool:
    if isinstance(value, CyclotomicNumber):
        return value.is_zero()
    return value == 0


def _scalar_inverse(value):
    if isinstance(value, CyclotomicNumber):
        return value.inverse()
    return Fraction(1) / value


# --------------------------------------------------------------------------
# groups


class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k.

    Elements are exponent tuples modulo (d_1, ..., d_k). A group may carry a
    realization as (Z/m)^x / H, in which case `class_of` and `residue_of`
    translate between unit residues and exponent tuples.
    """

    __slots__ = ("invariants", "modulus", "subgroup", "_res_to_el", "_el_to_res", "_els")

    def __init__(self, invariants):
        inv = [int(d) for d in invariants]
        if any(d < 1 for d in inv):
            raise ValueError("invariant factors must be positive")
        inv = [d for d in inv if d > 1]
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(
                    f"invariant factors must form a divisibility chain, got {a} then {b}"
                )
        self.invariants = tuple(inv)
        self.modulus = None
        self.subgroup = None
        self._res_to_el = None
        self._el_to_res = None
        self._els = None

    # -- constructors --------------------------------------------------

    @classmethod
    def from_cyclic_factors(cls, factors) -> "FiniteAbelianGroup":
        """Normalize an arbitrary product of cyclic groups to invariant factors."""
        factors = [int(f) for f in factors if int(f) > 1]
        if not factors:
            return cls([])
        diag = [
            [factors[i] if i == j else 0 for j in range(len(factors))]
            for i in range(len(factors))
        ]
        return cls([d for d in normforms.snf_invariants(diag) if d > 1])

    @classmethod
    def from_unit_quotient(cls, modulus: int, subgroup) -> "FiniteAbelianGroup":
        """The quotient (Z/modulus)^x / H, H generated by the given residues."""
        m = int(modulus)
        if m < 1:
            raise ValueError("modulus must be positive")
        units = [0] if m == 1 else [a for a in range(1, m) if gcd(a, m) == 1]
        sub = {1 % m}
        frontier = [1 % m]
        gens_in = [a % m for a in subgroup]
        for a in gens_in:
            if m > 1 and gcd(a, m) != 1:
                raise ValueError(f"subgroup residue {a} is not a unit mod {m}")
        while frontier:
            x = frontier.pop()
            for a in gens_in:
                y = (x * a) % m
                if y not in sub:
                    sub.add(y)
                    frontier.append(y)
        # cosets keyed by their minimal residue
        coset_key = {}
        for a in units:
            coset_key[a] = min((a * h) % m for h in sub)
        reps = sorted(set(coset_key.values()))
        ident = coset_key[1 % m]

        def q_mul(a, b):
            return coset_key[(a * b) % m]

        def q_order(a):
            k, x = 1, a
            while x != ident:
                x = q_mul(x, a)
                k += 1
            return k

        # greedy generating set, largest orders first
        by_order = sorted(reps, key=lambda a: (-q_order(a), a))
        gens: list[int] = []
        span = {ident}
        for cand in by_order:
            if cand in span:
                continue
            gens.append(cand)
            new_span = set(span)
            frontier = list(span)
            while frontier:
                x = frontier.pop()
                y = q_mul(x, cand)
                if y not in new_span:
                    new_span.add(y)
                    frontier.append(y)
            span = new_span
            if len(span) == len(reps):
                break
        orders = [q_order(g) for g in gens]

        # relation lattice of the chosen generators inside Z^r
        relations = [
            [orders[i] if i == j else 0 for j in range(len(gens))]
            for i in range(len(gens))
        ]
        for exps in itertools.product(*(range(o) for o in orders)):
            if not any(exps):
                continue
            val = ident
            for g, e in zip(gens, exps):
                for _ in range(e):
                    val = q_mul(val, g)
            if val == ident:
                relations.append(list(exps))
        if not gens:
            group = cls([])
            group.modulus = m
            group.subgroup = frozenset(sub)
            group._res_to_el = {a: () for a in units}
            group._el_to_res = {(): ident}
            return group
        diag, _, v = normforms.snf(relations)
        keep = [j for j, d in enumerate(diag) if d > 1]
        group = cls([diag[j] for j in keep])

        # discrete logs of every coset rep, then change of basis via V
        def dlog(a):
            for exps in itertools.product(*(range(o) for o in orders)):
                val = ident
                for g, e in zip(gens, exps):
                    for _ in range(e):
                        val = q_mul(val, g)
                if val == a:
                    return exps
            raise AssertionError("generating set does not generate")

        res_to_el = {}
        el_to_res = {}
        for a in units:
            x = dlog(coset_key[a])
            coords = [sum(x[i] * v[i][j] for i in range(len(gens))) for j in range(len(diag))]
            el = tuple(coords[j] % diag[j] for j in keep)
            res_to_el[a] = el
            rep = coset_key[a]
            if el not in el_to_res or rep < el_to_res[el]:
                el_to_res[el] = rep
        group.modulus = m
        group.subgroup = frozenset(sub)
        group._res_to_el = res_to_el
        group._el_to_res = el_to_res
        return group

    # -- protocol --------------------------------------------------------

    @property
    def order(self) -> int:
        return prod(self.invariants) if self.invariants else 1

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    @property
    def identity(self) -> tuple:
        return (0,) * len(self.invariants)

    def elements(self) -> list[tuple]:
        if self._els is None:
            self._els = list(itertools.product(*(range(d) for d in self.invariants)))
        return self._els

    def contains_element(self, el) -> bool:
        return (
            isinstance(el, tuple)
            and len(el) == len(self.invariants)
            and all(0 <= x < d for x, d in zip(el, self.invariants))
        )

    def mul(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariants))

    def inv(self, a: tuple) -> tuple:
        return tuple((-x) % d for x, d in zip(a, self.invariants))

    def power(self, a: tuple, n: int) -> tuple:
        return tuple((x * n) % d for x, d in zip(a, self.invariants))

    # -- unit-quotient labels ---------------------------------------------

    def class_of(self, residue: int) -> tuple:
        if self._res_to_el is None:
            raise ValueError("group carries no (Z/m)^x realization")
        r = residue % self.modulus
        if r not in self._res_to_el:
            raise ValueError(f"{residue} is not a unit modulo {self.modulus}")
        return self._res_to_el[r]

    def residue_of(self, el: tuple) -> int:
        if self._el_to_res is None:
            raise ValueError("group carries no (Z/m)^x realization")
        return self._el_to_res[el]

    # -- equality ----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FiniteAbelianGroup):
            return NotImplemented
        return (
            self.invariants == other.invariants
            and self.modulus == other.modulus
            and self.subgroup == other.subgroup
        )

    def __hash__(self):
        return hash((self.invariants, self.modulus, self.subgroup))

    def __repr__(self):
        tag = f", (Z/{self.modulus})^x quotient" if self.modulus else ""
        return f"FiniteAbelianGroup({list(self.invariants)}{tag})"


# --------------------------------------------------------------------------
# matrix groups (the non-abelian extension point)


def _mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)) for i in range(n)
    )


def _mat_identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


class MatrixGroup:
    """Finite group whose elements are tuples of matrices (one per Wedderburn
    component of a faithful direct-sum representation)."""

    def __init__(self, name: str, generator_images: dict[str, tuple], max_order: int = 4096):
        self.name = name
        self.generator_images = dict(generator_images)
        sizes = [len(mat) for mat in next(iter(generator_images.values()))]
        ident = tuple(_mat_identity(n) for n in sizes)
        els = [ident]
        index = {ident: 0}
        gen_list = [generator_images[k] for k in sorted(generator_images)]
        i = 0
        while i < len(els):
            base = els[i]
            for g in gen_list:
                nxt = tuple(_mat_mul(a, b) for a, b in zip(base, g))
                if nxt not in index:
                    if len(els) >= max_order:
                        raise ValueError("group enumeration exceeded the size bound")
                    index[nxt] = len(els)
                    els.append(nxt)
            i += 1
        self._els = els
        self._index = index
        self._inv = {}
        for a in els:
            for b in els:
                if self.mul(a, b) == ident:
                    self._inv[a] = b
                    break

    @property
    def identity(self):
        return self._els[0]

    @property
    def order(self) -> int:
        return len(self._els)

    def elements(self) -> list:
        return list(self._els)

    def contains_element(self, el) -> bool:
        return el in self._index

    def mul(self, a, b):
        return tuple(_mat_mul(x, y) for x, y in zip(a, b))

    def inv(self, a):
        return self._inv[a]

    def power(self, a, n: int):
        if n < 0:
            return self.power(self.inv(a), -n)
        out = self.identity
        for _ in range(n):
            out = self.mul(out, a)
        return out

    def __repr__(self):
        return f"MatrixGroup({self.name!r}, order={self.order})"


# --------------------------------------------------------------------------
# group-ring elements


class GroupRingElement:
    """Element of Q[G] (or Q(zeta)[G]): a pruned coefficient table over G."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group, coeffs: dict):
        clean = {}
        for g, c in coeffs.items():
            c = _canon_scalar(c)
            if _scalar_is_zero(c):
                continue
            if not group.contains_element(g):
                raise ValueError(f"{g!r} is not an element of {group!r}")
            clean[g] = c
        self.group = group
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, group) -> "GroupRingElement":
        return cls(group, {})

    @classmethod
    def one(cls, group) -> "GroupRingElement":
        return cls(group, {group.identity: Fraction(1)})

    @classmethod
    def from_element(cls, group, g) -> "GroupRingElement":
        return cls(group, {g: Fraction(1)})

    @classmethod
    def from_vector(cls, group, vec) -> "GroupRingElement":
        els = group.elements()
        if len(vec) != len(els):
            raise ValueError("vector length does not match group order")
        return cls(group, dict(zip(els, vec)))

    # -- inspection ----------------------------------------------------------

    def coefficient(self, g):
        return self.coeffs.get(g, Fraction(0))

    def support(self) -> list:
        return [g for g in self.group.elements() if g in self.coeffs]

    def is_zero(self) -> bool:
        return not self.coeffs

    def augmentation(self):
        return sum(self.coeffs.values(), Fraction(0))

    def to_vector(self) -> list[Fraction]:
        out = []
        for g in self.group.elements():
            c = self.coeffs.get(g, Fraction(0))
            if isinstance(c, CyclotomicNumber):
                raise ValueError("vector form requires rational coefficients")
            out.append(c)
        return out

    def __repr__(self):
        if not self.coeffs:
            return "GroupRingElement(0)"
        parts = [f"({c})*{g}" for g, c in sorted(self.coeffs.items(), key=lambda kv: str(kv[0]))]
        return "GroupRingElement(" + " + ".join(parts) + ")"

    # -- arithmetic ----------------------------------------------------------

    def _check_group(self, other: "GroupRingElement"):
        if self.group != other.group:
            raise ValueError("group mismatch between ring elements")

    def __add__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check_group(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, Fraction(0)) + c
        return GroupRingElement(self.group, out)

    def __neg__(self):
        return GroupRingElement(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self + (-other)

    def scale(self, scalar) -> "GroupRingElement":
        scalar = _canon_scalar(scalar)
        return GroupRingElement(self.group, {g: c * scalar for g, c in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        self._check_group(other)
        group = self.group
        out: dict = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                h = group.mul(a, b)
                term = ca * cb
                out[h] = out.get(h, Fraction(0)) + term
        return GroupRingElement(group, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CyclotomicNumber)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined in the group ring")
        out = GroupRingElement.one(self.group)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.group == other.group and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.group, frozenset(self.coeffs.items())))


def inversion_involution(x: GroupRingElement) -> GroupRingElement:
    """The anti-involution of the group ring sending each g to g^{-1}."""
    group = x.group
    return GroupRingElement(group, {group.inv(g): c for g, c in x.coeffs.items()})


# --------------------------------------------------------------------------
# characters


class GCharacter:
    """Character of a finite abelian group, valued in Q(zeta_e)."""

    __slots__ = ("group", "exponents")

    def __init__(self, group: FiniteAbelianGroup, exponents):
        exps = tuple(int(k) % d for k, d in zip(exponents, group.invariants))
        if len(exps) != len(group.invariants):
            raise ValueError("exponent tuple length must match invariant count")
        self.group = group
        self.exponents = exps

    def value(self, el: tuple) -> CyclotomicNumber:
        e = self.group.exponent
        t = 0
        for k, x, d in zip(self.exponents, el, self.group.invariants):
            t += k * x * (e // d)
        return zeta_power(e, t % e)

    def of_ring_element(self, x: GroupRingElement) -> CyclotomicNumber:
        total = CyclotomicNumber.zero(self.group.exponent)
        for g, c in x.coeffs.items():
            total = total + self.value(g) * c
        return total

    def is_trivial(self) -> bool:
        return not any(self.exponents)

    def order(self) -> int:
        out = 1
        for k, d in zip(self.exponents, self.group.invariants):
            out = lcm(out, d // gcd(d, k) if k else 1)
        return out

    def inverse(self) -> "GCharacter":
        return GCharacter(self.group, [-k for k in self.exponents])

    def __mul__(self, other: "GCharacter") -> "GCharacter":
        if self.group != other.group:
            raise ValueError("characters of different groups")
        return GCharacter(self.group, [a + b for a, b in zip(self.exponents, other.exponents)])

    def __eq__(self, other):
        if not isinstance(other, GCharacter):
            return NotImplemented
        return self.group == other.group and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.group, self.exponents))

    def __repr__(self):
        return f"GCharacter{self.exponents}"


def characters_of(group: FiniteAbelianGroup) -> list[GCharacter]:
    """All |G| characters of a finite abelian group (trivial character first)."""
    if not isinstance(group, FiniteAbelianGroup):
        raise ValueError("characters are only enumerated for finite abelian groups")
    return [
        GCharacter(group, exps)
        for exps in itertools.product(*(range(d) for d in group.invariants))
    ]


def character_idempotent(chi: GCharacter) -> GroupRingElement:
    """The idempotent (1/|G|) sum_g chi(g) g^{-1} of Q(zeta_e)[G]."""
    group = chi.group
    n = group.order
    coeffs = {g: chi.value(group.inv(g)) * Fraction(1, n) for g in group.elements()}
    return GroupRingElement(group, coeffs)


# --------------------------------------------------------------------------
# determinants and reduced norms


def _det_exact(rows):
    """Determinant over an exact field (Fraction or CyclotomicNumber entries)."""
    n = len(rows)
    work = [list(r) for r in rows]
    det = Fraction(1)
    sign = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if not _scalar_is_zero(work[r][col])), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            work[col], work[piv] = work[piv], work[col]
            sign = -sign
        pival = work[col][col]
        det = det * pival
        inv = _scalar_inverse(pival)
        for r in range(col + 1, n):
            if _scalar_is_zero(work[r][col]):
                continue
            factor = work[r][col] * inv
            work[r] = [work[r][k] - factor * work[col][k] for k in range(n)]
    return det * sign if sign < 0 else det


def _check_square_ring_matrix(mat):
    if not mat or any(len(row) != len(mat) for row in mat):
        raise ValueError("reduced norm requires a nonempty square matrix")
    group = mat[0][0].group
    for row in mat:
        for entry in row:
            if not isinstance(entry, GroupRingElement) or entry.group != group:
                raise ValueError("matrix entries must share one group ring")
    return group


def reduced_norm(mat, wedderburn: "WedderburnData | None" = None) -> GroupRingElement:
    """Reduced norm of a square matrix over Q[G], as a central element of Q[G].

    Abelian G: the unique element whose chi-component equals det(chi(mat)) for
    every character chi, reconstructed by idempotent interpolation. Whitelisted
    non-abelian G: per-component determinants of the representation images,
    reassembled through the central idempotents of the supplied data.
    """
    group = _check_square_ring_matrix(mat)
    n = len(mat)
    if isinstance(group, FiniteAbelianGroup):
        rational_input = all(
            isinstance(c, Fraction) for row in mat for entry in row for c in entry.coeffs.values()
        )
        result = GroupRingElement.zero(group)
        for chi in characters_of(group):
            cmat = [[chi.of_ring_element(entry) for entry in row] for row in mat]
            det = _det_exact(cmat)
            result = result + character_idempotent(chi).scale(det)
        if rational_input:
            for c in result.coeffs.values():
                if not isinstance(c, Fraction):
                    raise AssertionError("reduced norm interpolation left irrational residue")
        return result
    if wedderburn is None:
        raise ValueError("non-abelian group ring requires WedderburnData")
    if group is not wedderburn.group:
        raise ValueError("matrix group does not match the supplied WedderburnData")
    result = GroupRingElement.zero(group)
    for ci, comp in enumerate(wedderburn.components):
        deg = comp.degree
        size = n * deg
        block = [[Fraction(0)] * size for _ in range(size)]
        for i in range(n):
            for j in range(n):
                entry = mat[i][j]
                for g, c in entry.coeffs.items():
                    if isinstance(c, CyclotomicNumber):
                        raise ValueError("non-abelian reduced norm requires rational coefficients")
                    rep = g[ci]
                    for a in range(deg):
                        for b in range(deg):
                            if rep[a][b]:
                                block[i * deg + a][j * deg + b] += c * rep[a][b]
        det = _det_exact(block)
        result = result + comp.idempotent.scale(det)
    return result


# --------------------------------------------------------------------------
# Wedderburn data


def parse_group_word(word: str, generators: dict, identity, mul, inv=None):
    """Evaluate a word like "r^2*s" against generator values."""
    w = word.strip()
    if w in ("", "1", "e"):
        return identity
    out = identity
    for token in w.split("*"):
        token = token.strip()
        if token in ("1", "e"):
            continue
        if "^" in token:
            name, _, power = token.partition("^")
            p = int(power)
        else:
            name, p = token, 1
        name = name.strip()
        if name not in generators:
            raise ValueError(f"unknown generator {name!r} in word {word!r}")
        base = generators[name]
        if p < 0:
            if inv is None:
                raise ValueError("negative powers are not supported here")
            base, p = inv(base), -p
        for _ in range(p):
            out = mul(out, base)
    return out


class WedderburnComponent:
    __slots__ = ("name", "degree", "field", "idempotent")

    def __init__(self, name: str, degree: int, field: str, idempotent: GroupRingElement):
        self.name = name
        self.degree = degree
        self.field = field
        self.idempotent = idempotent


class WedderburnData:
    """Checked-in rational Wedderburn decomposition of a small group ring."""

    def __init__(self, group: MatrixGroup, components: list[WedderburnComponent]):
        self.group = group
        self.components = components
        self.validate()

    @classmethod
    def load(cls, path) -> "WedderburnData":
        return cls.from_dict(json.loads(Path(path).read_text()))

    @classmethod
    def from_dict(cls, data: dict) -> "WedderburnData":
        gspec = data["group"]
        gen_names = list(gspec["generators"])
        comps_raw = data["components"]
        for comp in comps_raw:
            field = comp.get("field", "Q")
            if field != "Q":
                raise ValueError(
                    f"component field {field!r} is not supported; exact arithmetic "
                    "is implemented over Q only"
                )
        gen_images = {}
        for name in gen_names:
            images = []
            for comp in comps_raw:
                mat = comp["rep"][name]
                if len(mat) != comp["degree"] or any(len(r) != comp["degree"] for r in mat):
                    raise ValueError(f"representation matrix for {name!r} has wrong shape")
                images.append(tuple(tuple(Fraction(x) for x in row) for row in mat))
            gen_images[name] = tuple(images)
        group = MatrixGroup(gspec.get("name", "G"), gen_images)
        gens = {name: gen_images[name] for name in gen_names}
        for rel in gspec.get("relations", []):
            val = parse_group_word(rel, gens, group.identity, group.mul, group.inv)
            if val != group.identity:
                raise ValueError(f"relation {rel!r} is not satisfied by the representations")
        components = []
        for comp in comps_raw:
            coeffs = {}
            for word, val in comp["idempotent"].items():
                el = parse_group_word(word, gens, group.identity, group.mul, group.inv)
                coeffs[el] = coeffs.get(el, Fraction(0)) + Fraction(val)
            components.append(
                WedderburnComponent(
                    comp.get("name", f"component{len(components)}"),
                    int(comp["degree"]),
                    comp.get("field", "Q"),
                    GroupRingElement(group, coeffs),
                )
            )
        return cls(group, components)

    def element_from_word(self, word: str):
        gens = {name: self.group.generator_images[name] for name in self.group.generator_images}
        return parse_group_word(word, gens, self.group.identity, self.group.mul, self.group.inv)

    def _component_image(self, ci: int, x: GroupRingElement):
        deg = self.components[ci].degree
        out = [[Fraction(0)] * deg for _ in range(deg)]
        for g, c in x.coeffs.items():
            rep = g[ci]
            for a in range(deg):
                for b in range(deg):
                    if rep[a][b]:
                        out[a][b] += c * rep[a][b]
        return out

    def validate(self) -> None:
        group = self.group
        if sum(c.degree**2 for c in self.components) != group.order:
            raise ValueError("component degrees do not account for the group order")
        one = GroupRingElement.one(group)
        total = GroupRingElement.zero(group)
        for i, ci in enumerate(self.components):
            total = total + ci.idempotent
            for j, cj in enumerate(self.components):
                prod_ij = ci.idempotent * cj.idempotent
                expected = ci.idempotent if i == j else GroupRingElement.zero(group)
                if prod_ij != expected:
                    raise ValueError(
                        f"idempotents {ci.name!r} and {cj.name!r} are not orthogonal idempotents"
                    )
        if total != one:
            raise ValueError("central idempotents do not sum to 1")
        for ci in self.components:
            for el in group.elements():
                ge = GroupRingElement.from_element(group, el)
                if ge * ci.idempotent != ci.idempotent * ge:
                    raise ValueError(f"idempotent {ci.name!r} is not central")
        # each idempotent must act as identity in its own component, zero elsewhere
        for i in range(len(self.components)):
            for j, comp in enumerate(self.components):
                img = self._component_image(j, self.components[i].idempotent)
                expected = [
                    [Fraction(int(a == b and i == j)) for b in range(comp.degree)]
                    for a in range(comp.degree)
                ]
                if img != expected:
                    raise ValueError(
                        f"idempotent {self.components[i].name!r} has wrong image in "
                        f"component {comp.name!r}"
                    )


# --------------------------------------------------------------------------
# ideal lattices and Whitehead-order sublattices


class IdealLattice:
    """Full or partial Z-lattice inside Q[G], held in canonical Hermite form.

    The lattice is (1/denominator) times the row span of `rows`, written in
    the coordinate basis given by the group's canonical element order.
    """

    __slots__ = ("group", "denominator", "rows", "is_ideal")

    def __init__(self, group, denominator: int, rows: list[list[int]], is_ideal: bool = False):
        if denominator < 1:
            raise ValueError("denominator must be positive")
        rows = normforms.integer_row_span(rows)
        shrink = denominator
        for row in rows:
            for x in row:
                shrink = gcd(shrink, x)
        if shrink > 1:
            denominator //= shrink
            rows = [[x // shrink for x in row] for row in rows]
        self.group = group
        self.denominator = denominator
        self.rows = rows
        self.is_ideal = is_ideal

    @classmethod
    def full(cls, group) -> "IdealLattice":
        n = group.order
        return cls(group, 1, [[int(i == j) for j in range(n)] for i in range(n)], is_ideal=True)

    @classmethod
    def from_elements(cls, group, elements, claim_ideal: bool = False) -> "IdealLattice":
        vectors = [el.to_vector() for el in elements]
        den = 1
        for vec in vectors:
            for f in vec:
                den = lcm(den, f.denominator)
        rows = [[int(f * den) for f in vec] for vec in vectors]
        lat = cls(group, den, rows, is_ideal=claim_ideal)
        if claim_ideal and not lat.verify_ideal():
            raise ValueError("lattice is not closed under multiplication by the group")
        return lat

    def basis_elements(self) -> list[GroupRingElement]:
        den = self.denominator
        return [
            GroupRingElement.from_vector(self.group, [Fraction(x, den) for x in row])
            for row in self.rows
        ]

    def contains(self, el: GroupRingElement) -> bool:
        if el.group != self.group and el.group is not self.group:
            raise ValueError("element from a different group ring")
        scaled = [f * self.denominator for f in el.to_vector()]
        if any(f.denominator != 1 for f in scaled):
            return False
        ok, _ = normforms.reduce_row([int(f) for f in scaled], self.rows)
        return ok

    def verify_ideal(self) -> bool:
        for b in self.basis_elements():
            for el in self.group.elements():
                if not self.contains(GroupRingElement.from_element(self.group, el) * b):
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, IdealLattice):
            return NotImplemented
        same_group = self.group == other.group or self.group is other.group
        return same_group and self.denominator == other.denominator and self.rows == other.rows

    def __hash__(self):
        return hash((self.denominator, tuple(tuple(r) for r in self.rows)))

    def __repr__(self):
        return f"IdealLattice(den={self.denominator}, rank={len(self.rows)})"


def whitehead_sublattice(order, budget: int) -> IdealLattice:
    """Lattice of reduced norms inside the center of Q[G].

    For a commutative group ring this is exactly Z[G]. For a whitelisted
    non-abelian group it is the sublattice generated by reduced norms of
    small matrices over Z[G] (single entries a*g + b*h with |a|+|b| within
    the budget; for budgets >= 2 also 2x2 matrices with entries 0 or +-g).
    The result grows monotonically with the budget and is always contained
    in the full Whitehead order.
    """
    if isinstance(order, FiniteAbelianGroup):
        return IdealLattice.full(order)
    if not isinstance(order, WedderburnData):
        raise ValueError("expected a FiniteAbelianGroup or WedderburnData")
    wd = order
    group = wd.group
    els = group.elements()
    seen: set[tuple] = set()
    norms: list[GroupRingElement] = []

    def record(mat):
        nrd = reduced_norm(mat, wd)
        key = tuple(nrd.to_vector())
        if any(key) and key not in seen:
            seen.add(key)
            norms.append(nrd)

    for gi, g in enumerate(els):
        for h in els[gi:]:
            for a in range(-budget, budget + 1):
                for b in range(-budget + abs(a), budget - abs(a) + 1):
                    if a == 0 and b == 0:
                        continue
                    x = GroupRingElement(group, {g: Fraction(a)}) + GroupRingElement(
                        group, {h: Fraction(b)}
                    )
                    if x.is_zero():
                        continue
                    record([[x]])
    if budget >= 2:
        comps = wd.components
        options = [GroupRingElement.zero(group)]
        for g in els:
            options.append(GroupRingElement.from_element(group, g))
            options.append(GroupRingElement(group, {g: Fraction(-1)}))
        images = [
            [wd._component_image(ci, el) for ci in range(len(comps))] for el in options
        ]
        det_seen: set[tuple] = set()
        for qa, qb, qc, qd in itertools.product(range(len(options)), repeat=4):
            dets = []
            for ci, comp in enumerate(comps):
                a, b, c, d = (images[q][ci] for q in (qa, qb, qc, qd))
                if comp.degree == 1:
                    dets.append(a[0][0] * d[0][0] - b[0][0] * c[0][0])
                else:
                    deg = comp.degree
                    block = [list(a[i]) + list(b[i]) for i in range(deg)]
                    block += [list(c[i]) + list(d[i]) for i in range(deg)]
                    dets.append(_det_exact(block))
            key = tuple(dets)
            if key in det_seen:
                continue
            det_seen.add(key)
            nrd = GroupRingElement.zero(group)
            for det, comp in zip(dets, comps):
                nrd = nrd + comp.idempotent.scale(det)
            vec = tuple(nrd.to_vector())
            if any(vec) and vec not in seen:
                seen.add(vec)
                norms.append(nrd)
    return IdealLattice.from_elements(group, norms)
