"""G-stable integer lattices and their invariants over group rings.

The module provides:

* :class:`GLattice` -- a full or partial Z-lattice in an ambient rational
  vector space, together with a commuting action of a finite abelian group;
* :func:`hom_lattice` -- the lattice of equivariant maps between two such
  lattices, itself a ``GLattice`` for the post-composition module structure;
* :class:`Presentation` / :func:`classical_fitting_ideal` -- relation
  matrices over the integral group ring and their determinantal ideals;
* :func:`minor_fitting_invariant` -- the column-replacement variant of the
  determinantal ideals driven by tuples of dual functionals, which agrees
  with the classical ideals over commutative group rings;
* :class:`WedgeSpace`, :func:`exterior_power`, :func:`wedge_pairing` and
  :func:`rubin_lattice` -- exterior powers in duality coordinates, and the
  integral lattice cut out inside the rational exterior power by demanding
  that every wedge of lattice functionals takes integral values;
* :func:`quotient_invariants`, :class:`FiniteGModule` and
  :func:`annihilates` -- finite quotients and annihilation tests.

Vectors are rows throughout; matrices act on the right.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

from cyclostark import normforms
from cyclostark.groupring import (
    FiniteAbelianGroup,
    GroupRingElement,
    IdealLattice,
    reduced_norm,
    whitehead_sublattice,
)

__all__ = [
    "FiniteGModule",
    "GLattice",
    "Presentation",
    "WedgeSpace",
    "annihilates",
    "classical_fitting_ideal",
    "exterior_power",
    "hom_lattice",
    "minor_fitting_invariant",
    "presentation_of",
    "quotient_invariants",
    "rubin_lattice",
    "wedge_pairing",
]


# --------------------------------------------------------------------------
# small exact-matrix helpers (Fraction entries, rows act from the left)


def _mat_identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        row = out[i]
        for t in range(k):
            x = ai[t]
            if not x:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    row[j] += x * bt[j]
    return out

def _mat_pow(a, e: int):
    n = len(a)
    result = _mat_identity(n)
    base = [list(row) for row in a]
    while e:
        if e & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        e >>= 1
    return result


def _row_times(vec, mat):
    n = len(mat)
    m = len(mat[0]) if mat else 0
    out = [Fraction(0)] * m
    for i in range(n):
        x = vec[i]
        if not x:
            continue
        row = mat[i]
        for j in range(m):
            if row[j]:
                out[j] += x * row[j]
    return out


def _rational_span(rows, width):
    """Canonical Hermite basis (over Q-scaling) of the Z-span of the rows."""
    clean = []
    for row in rows:
        row = [Fraction(x) for x in row]
        if len(row) != width:
            raise ValueError("basis row has wrong length for the ambient space")
        clean.append(row)
    if not clean:
        return ()
    den = 1
    for row in clean:
        for x in row:
            den = lcm(den, x.denominator)
    ints = [[int(x * den) for x in row] for row in clean]
    span = normforms.integer_row_span(ints)
    return tuple(tuple(Fraction(v, den) for v in row) for row in span)


def _same_group(a, b) -> bool:
    return a is b or a == b


def coset_representatives(group, subgroup_elements):
    """Canonical coset representatives of a subgroup.

    Each coset is keyed by its minimal element (tuple order); keys are listed
    in order of first occurrence along ``group.elements()``.  This is the
    coordinate order used by :meth:`GLattice.coset_module`, so any consumer
    that enumerates cosets through this function stays aligned with it.
    """
    subs = {tuple(h) for h in subgroup_elements}
    if group.identity not in subs:
        raise ValueError("subgroup must contain the identity")
    for a in subs:
        for b in subs:
            if group.mul(a, b) not in subs:
                raise ValueError("subgroup elements are not closed under the product")
    keys = []
    seen = set()
    for g in group.elements():
        k = min(group.mul(g, h) for h in subs)
        if k not in seen:
            seen.add(k)
            keys.append(k)
    return keys


# --------------------------------------------------------------------------
# G-lattices


class GLattice:
    """A Z-lattice in Q^ambient_dim with a right action of a finite abelian
    group, one invertible matrix per canonical generator of the group.

    The basis is stored in canonical Hermite form, so two descriptions of the
    same lattice (with the same action matrices) compare equal. The action is
    validated to satisfy the group relations and to map the lattice to itself
    with integer coordinates.
    """

    __slots__ = ("group", "ambient_dim", "basis", "actions", "_action_cache")

    def __init__(self, group, ambient_dim: int, basis_rows, actions, validate: bool = True):
        if not isinstance(group, FiniteAbelianGroup):
            raise ValueError("GLattice requires a finite abelian group")
        if ambient_dim < 0:
            raise ValueError("ambient dimension must be nonnegative")
        self.group = group
        self.ambient_dim = ambient_dim
        self.basis = _rational_span(basis_rows, ambient_dim)
        acts = []
        for mat in actions:
            mat = [[Fraction(x) for x in row] for row in mat]
            if len(mat) != ambient_dim or any(len(row) != ambient_dim for row in mat):
                raise ValueError("action matrix does not match the ambient dimension")
            acts.append(tuple(tuple(row) for row in mat))
        self.actions = tuple(acts)
        self._action_cache = {}
        if len(self.actions) != len(group.invariants):
            raise ValueError("need one action matrix per group generator")
        if validate:
            self._validate()

    # -- constructors ----------------------------------------------------------

    @classmethod
    def free_module(cls, group, copies: int) -> "GLattice":
        """Z[G]^copies with the left-regular coordinate action."""
        els = group.elements()
        n = group.order
        dim = copies * n
        index = {g: i for i, g in enumerate(els)}
        actions = []
        for gi in range(len(group.invariants)):
            gen = tuple(int(j == gi) for j in range(len(group.invariants)))
            mat = [[Fraction(0)] * dim for _ in range(dim)]
            for c in range(copies):
                for i, h in enumerate(els):
                    mat[c * n + i][c * n + index[group.mul(gen, h)]] = Fraction(1)
            actions.append(mat)
        return cls(group, dim, _mat_identity(dim), actions, validate=False)

    @classmethod
    def trivial_module(cls, group) -> "GLattice":
        """Z with every group element acting as the identity."""
        actions = [[[Fraction(1)]] for _ in group.invariants]
        return cls(group, 1, [[Fraction(1)]], actions, validate=False)

    @classmethod
    def coset_module(cls, group, subgroup_elements) -> "GLattice":
        """The permutation lattice on the cosets of a subgroup."""
        subs = {tuple(h) for h in subgroup_elements}

        def coset_key(g):
            return min(group.mul(g, h) for h in subs)

        keys = coset_representatives(group, subgroup_elements)
        index = {k: i for i, k in enumerate(keys)}
        dim = len(keys)
        actions = []
        for gi in range(len(group.invariants)):
            gen = tuple(int(j == gi) for j in range(len(group.invariants)))
            mat = [[Fraction(0)] * dim for _ in range(dim)]
            for i, rep in enumerate(keys):
                mat[i][index[coset_key(group.mul(gen, rep))]] = Fraction(1)
            actions.append(mat)
        return cls(group, dim, _mat_identity(dim), actions, validate=False)

    @classmethod
    def direct_sum(cls, left: "GLattice", right: "GLattice") -> "GLattice":
        if not _same_group(left.group, right.group):
            raise ValueError("direct sum requires lattices over one group")
        la, ra = left.ambient_dim, right.ambient_dim
        dim = la + ra
        rows = [list(row) + [Fraction(0)] * ra for row in left.basis]
        rows += [[Fraction(0)] * la + list(row) for row in right.basis]
        actions = []
        for al, ar in zip(left.actions, right.actions):
            mat = [[Fraction(0)] * dim for _ in range(dim)]
            for i in range(la):
                for j in range(la):
                    mat[i][j] = al[i][j]
            for i in range(ra):
                for j in range(ra):
                    mat[la + i][la + j] = ar[i][j]
            actions.append(mat)
        return cls(left.group, dim, rows, actions, validate=False)

    # -- validation ------------------------------------------------------------

    def _validate(self) -> None:
        n = self.ambient_dim
        ident = _mat_identity(n)
        for order, mat in zip(self.group.invariants, self.actions):
            mat = [list(row) for row in mat]
            if _mat_pow(mat, order) != ident:
                raise ValueError(
                    f"action matrix does not satisfy the generator relation of order {order}"
                )
        for a, b in itertools.combinations(range(len(self.actions)), 2):
            ma = [list(r) for r in self.actions[a]]
            mb = [list(r) for r in self.actions[b]]
            if _mat_mul(ma, mb) != _mat_mul(mb, ma):
                raise ValueError("action matrices of the generators do not commute")
        for row in self.basis:
            for mat in self.actions:
                image = _row_times(row, mat)
                coords = self.coords_of(image)
                if coords is None or any(c.denominator != 1 for c in coords):
                    raise ValueError(
                        f"lattice is not stable under the group action (witness {list(row)})"
                    )

    # -- structure -------------------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.basis)

    def element_action(self, el) -> tuple:
        el = tuple(el)
        if not self.group.contains_element(el):
            raise ValueError("element does not belong to the group")
        cached = self._action_cache.get(el)
        if cached is not None:
            return cached
        mat = _mat_identity(self.ambient_dim)
        for gi, e in enumerate(el):
            if e:
                mat = _mat_mul(mat, _mat_pow([list(r) for r in self.actions[gi]], e))
        mat = tuple(tuple(row) for row in mat)
        self._action_cache[el] = mat
        return mat

    def apply_element(self, el, vec) -> list[Fraction]:
        return _row_times([Fraction(x) for x in vec], self.element_action(el))

    def apply_ring(self, x: GroupRingElement, vec) -> list[Fraction]:
        if not _same_group(x.group, self.group):
            raise ValueError("group-ring element from a different group")
        out = [Fraction(0)] * self.ambient_dim
        for g, c in x.coeffs.items():
            moved = self.apply_element(g, vec)
            for j in range(self.ambient_dim):
                if moved[j]:
                    out[j] += c * moved[j]
        return out

    def coords_of(self, vec) -> list[Fraction] | None:
        """Rational coordinates of a vector in the lattice basis, or None."""
        vec = [Fraction(x) for x in vec]
        if len(vec) != self.ambient_dim:
            raise ValueError("vector has wrong length for the ambient space")
        if not self.basis:
            return [] if not any(vec) else None
        ok, coords = normforms.reduce_row_rational(vec, [list(r) for r in self.basis])
        return coords if ok else None

    def contains(self, vec) -> bool:
        coords = self.coords_of(vec)
        return coords is not None and all(c.denominator == 1 for c in coords)

    def sublattice(self, rows, validate: bool = True) -> "GLattice":
        return GLattice(self.group, self.ambient_dim, rows, self.actions, validate=validate)

    def apply_functional(self, hom_vec, vec) -> GroupRingElement:
        """Evaluate a flattened map-to-Z[G] functional on an ambient vector.

        ``hom_vec`` has one block of ``|G|`` group-ring coordinates per basis
        vector of this lattice; the vector must lie in the rational span.
        """
        coords = self.coords_of(vec)
        if coords is None:
            raise ValueError("vector is not in the rational span of the lattice")
        n = self.group.order
        if len(hom_vec) != self.rank * n:
            raise ValueError("functional vector has the wrong length")
        out = [Fraction(0)] * n
        for i, ci in enumerate(coords):
            if not ci:
                continue
            base = i * n
            for j in range(n):
                v = hom_vec[base + j]
                if v:
                    out[j] += ci * Fraction(v)
        return GroupRingElement.from_vector(self.group, out)

    def __eq__(self, other):
        if not isinstance(other, GLattice):
            return NotImplemented
        return (
            _same_group(self.group, other.group)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
            and self.actions == other.actions
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"GLattice(dim={self.ambient_dim}, rank={self.rank})"


# --------------------------------------------------------------------------
# Hom lattices


def hom_lattice(source: GLattice, target: GLattice) -> GLattice:
    """The lattice of equivariant Z-linear maps ``source -> target``.

    Coordinates: a map is the flattened matrix ``F`` (source rank x target
    rank) of its images in the bases of the two lattices. The group acts by
    post-composition, making the result a ``GLattice`` again.
    """
    if not _same_group(source.group, target.group):
        raise ValueError("hom lattice requires both lattices over one group")
    group = source.group
    p, q = source.rank, target.rank
    nvars = p * q
    gen_count = len(group.invariants)

    def basis_action(lat, gi):
        gen = tuple(int(j == gi) for j in range(gen_count))
        rows = []
        for b in lat.basis:
            coords = lat.coords_of(lat.apply_element(gen, list(b)))
            if coords is None:
                raise AssertionError("validated lattice lost stability")
            rows.append(coords)
        return rows

    source_acts = [basis_action(source, gi) for gi in range(gen_count)]
    target_acts = [basis_action(target, gi) for gi in range(gen_count)]

    equations: list[list[Fraction]] = []
    for gi in range(gen_count):
        bmat, cmat = source_acts[gi], target_acts[gi]
        for i in range(p):
            for j in range(q):
                coef = [Fraction(0)] * nvars
                for a in range(p):
                    if bmat[i][a]:
                        coef[a * q + j] += bmat[i][a]
                for b in range(q):
                    if cmat[b][j]:
                        coef[i * q + b] -= cmat[b][j]
                if any(coef):
                    equations.append(coef)

    if nvars == 0:
        kernel: list[list[int]] = []
    elif not equations:
        kernel = [[int(i == j) for j in range(nvars)] for i in range(nvars)]
    else:
        den = 1
        for eq in equations:
            for x in eq:
                den = lcm(den, x.denominator)
        mat = [[int(equations[e][v] * den) for e in range(len(equations))] for v in range(nvars)]
        kernel = normforms.integer_kernel(mat)

    actions = []
    for gi in range(gen_count):
        cmat = target_acts[gi]
        mat = [[Fraction(0)] * nvars for _ in range(nvars)]
        for i in range(p):
            for j in range(q):
                for b in range(q):
                    if cmat[j][b]:
                        mat[i * q + j][i * q + b] = cmat[j][b]
        actions.append(mat)
    rows = [[Fraction(x) for x in row] for row in kernel]
    return GLattice(group, nvars, rows, actions, validate=True)


# --------------------------------------------------------------------------
# presentations and Fitting-style determinantal ideals


class Presentation:
    """A relation matrix over Z[G]: rows are relations among the generators
    of the presented module (the cokernel). At least as many relations as
    generators are required, padding with zero rows if necessary."""

    __slots__ = ("group", "matrix", "relations", "generators")

    def __init__(self, group, matrix):
        rows = [tuple(row) for row in matrix]
        if not rows or not rows[0]:
            raise ValueError("presentation matrix must be nonempty")
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ValueError("presentation matrix rows have inconsistent lengths")
        if len(rows) < width:
            raise ValueError(
                f"presentation needs at least as many relations as generators "
                f"(got {len(rows)} rows for {width} generators)"
            )
        for row in rows:
            for entry in row:
                if not isinstance(entry, GroupRingElement) or not _same_group(entry.group, group):
                    raise ValueError("presentation entries must lie in the given group ring")
                for c in entry.coeffs.values():
                    if not isinstance(c, Fraction) or c.denominator != 1:
                        raise ValueError("presentation entries must have integer coefficients")
        self.group = group
        self.matrix = rows
        self.relations = len(rows)
        self.generators = width

    def __repr__(self):
        return f"Presentation({self.relations}x{self.generators})"


def presentation_of(lat: GLattice) -> Presentation:
    """A presentation of a lattice as a module over its group ring, using the
    Z-basis vectors as module generators and their full integral relation
    module as the relations."""
    group = lat.group
    dprime = lat.rank
    if dprime == 0:
        raise ValueError("the zero lattice has no generators to present")
    els = group.elements()
    n = group.order
    rows: list[list[int]] = []
    for k in range(dprime):
        base = list(lat.basis[k])
        for g in els:
            coords = lat.coords_of(lat.apply_element(g, base))
            if coords is None or any(c.denominator != 1 for c in coords):
                raise ValueError("lattice is not stable under the group action")
            rows.append([int(c) for c in coords])
    kernel = normforms.integer_kernel(rows)
    relations = []
    for row in kernel:
        rel = []
        for k in range(dprime):
            vec = [Fraction(row[k * n + i]) for i in range(n)]
            rel.append(GroupRingElement.from_vector(group, vec))
        relations.append(rel)
    zero = GroupRingElement.zero(group)
    while len(relations) < dprime:
        relations.append([zero] * dprime)
    return Presentation(group, relations)


def _ideal_from_norms(group, values, claim_ideal: bool) -> IdealLattice:
    if not values:
        return IdealLattice(group, 1, [], is_ideal=True)
    return IdealLattice.from_elements(group, values, claim_ideal=claim_ideal)


def classical_fitting_ideal(pres: Presentation, a: int) -> IdealLattice:
    """The ideal of (generators - a)-sized minors of the relation matrix.

    Whole ring when ``a`` reaches the generator count, the zero ideal when
    the required minor size exceeds the relation count or all minors vanish.
    """
    if a < 0:
        raise ValueError("the minor index must be nonnegative")
    group = pres.group
    k = pres.generators - a
    if k <= 0:
        return IdealLattice.full(group)
    if k > pres.relations:
        return IdealLattice(group, 1, [], is_ideal=True)
    seen: set[tuple] = set()
    minors: list[GroupRingElement] = []
    for rowset in itertools.combinations(range(pres.relations), k):
        for colset in itertools.combinations(range(pres.generators), k):
            sub = [[pres.matrix[i][j] for j in colset] for i in rowset]
            det = reduced_norm(sub)
            if det.is_zero():
                continue
            key = tuple(det.to_vector())
            if key in seen:
                continue
            seen.add(key)
            minors.append(det)
    translates = [
        GroupRingElement.from_element(group, g) * det
        for det in minors
        for g in group.elements()
    ]
    return _ideal_from_norms(group, translates, claim_ideal=True)


def minor_fitting_invariant(
    matrix, a: int, phi_budget: int = 1, wedderburn=None
) -> IdealLattice:
    """Determinantal invariant built from column replacements by functionals.

    For a relation matrix with at least as many rows as columns, up to ``a``
    columns are replaced by value columns of dual-basis functionals (times
    group elements, enumerated up to ``phi_budget`` of them in the
    non-commutative case); the reduced norms of all maximal square row
    choices, multiplied by the norm sublattice of the ring, generate the
    result. Over a commutative group ring this recovers the classical
    Fitting ideal of the cokernel.
    """
    if a < 0:
        raise ValueError("the replacement budget must be nonnegative")
    rows = [list(r) for r in matrix]
    if not rows or not rows[0]:
        raise ValueError("matrix must be nonempty")
    d, dprime = len(rows), len(rows[0])
    if any(len(r) != dprime for r in rows):
        raise ValueError("matrix rows have inconsistent lengths")
    if d < dprime:
        raise ValueError(f"need at least as many rows as columns (got {d}x{dprime})")
    first = rows[0][0]
    if not isinstance(first, GroupRingElement):
        raise ValueError("matrix entries must be group-ring elements")
    group = first.group
    abelian = isinstance(group, FiniteAbelianGroup)
    if not abelian and wedderburn is None:
        raise ValueError("non-commutative input requires WedderburnData")

    els = group.elements()
    zero = GroupRingElement.zero(group)
    if abelian:
        phi_values = [
            [GroupRingElement.one(group) if i == k else zero for i in range(d)]
            for k in range(d)
        ]
    else:
        used = els[: max(1, min(phi_budget, len(els)))]
        phi_values = [
            [GroupRingElement.from_element(group, g) if i == k else zero for i in range(d)]
            for k in range(d)
            for g in used
        ]

    seen_mats: set[tuple] = set()
    seen_vals: set[tuple] = set()
    norms: list[GroupRingElement] = []
    for t in range(min(a, dprime) + 1):
        for cols in itertools.combinations(range(dprime), t):
            for phis in itertools.product(range(len(phi_values)), repeat=t):
                work = [list(r) for r in rows]
                for slot, col in enumerate(cols):
                    col_values = phi_values[phis[slot]]
                    for i in range(d):
                        work[i][col] = col_values[i]
                mkey = tuple(entry for row in work for entry in row)
                if mkey in seen_mats:
                    continue
                seen_mats.add(mkey)
                for rowset in itertools.combinations(range(d), dprime):
                    sub = [work[i] for i in rowset]
                    det = reduced_norm(sub, wedderburn)
                    if det.is_zero():
                        continue
                    key = tuple(det.to_vector())
                    if key not in seen_vals:
                        seen_vals.add(key)
                        norms.append(det)

    if abelian:
        products = [
            GroupRingElement.from_element(group, g) * det for det in norms for g in els
        ]
        return _ideal_from_norms(group, products, claim_ideal=True)
    scale = whitehead_sublattice(wedderburn, min(phi_budget, 2))
    products = [w * det for det in norms for w in scale.basis_elements()]
    return _ideal_from_norms(group, products, claim_ideal=False)


# --------------------------------------------------------------------------
# exterior powers in duality coordinates


class WedgeSpace:
    """Exterior powers of the rational span of a lattice, coordinatized by
    wedges of an integral basis of its functional lattice.

    For a lattice ``M`` with functional lattice ``Hom(M, Z[G])`` of Z-rank
    ``N``, an element of the r-fold exterior power over Q[G] is stored as
    its pairings against the wedges of all r-subsets of the functional
    basis: one group-ring value per subset, flattened to rationals. The
    pairing against a wedge of functionals is the determinant of the value
    matrix, so the coordinates determine the element uniquely.
    """

    def __init__(self, module: GLattice, r: int):
        if r < 0:
            raise ValueError("wedge degree must be nonnegative")
        self.module = module
        self.r = r
        self.group = module.group
        self.hom = hom_lattice(module, GLattice.free_module(module.group, 1))
        self.hom_basis = [list(row) for row in self.hom.basis]
        self.subsets = list(itertools.combinations(range(len(self.hom_basis)), r))
        self.block_size = module.group.order
        self.ambient_dim = len(self.subsets) * self.block_size

    # -- coordinates -----------------------------------------------------------

    def wedge_coordinates(self, vectors) -> list[Fraction]:
        """Duality coordinates of a pure wedge of ambient vectors."""
        if len(vectors) != self.r:
            raise ValueError(f"expected {self.r} vectors, got {len(vectors)}")
        values = [
            [self.module.apply_functional(phi, vec) for vec in vectors]
            for phi in self.hom_basis
        ]
        out: list[Fraction] = []
        for subset in self.subsets:
            if self.r == 0:
                det = GroupRingElement.one(self.group)
            elif self.r == 1:
                det = values[subset[0]][0]
            else:
                det = reduced_norm([[values[i][j] for j in range(self.r)] for i in subset])
            out.extend(det.to_vector())
        return out

    def translate(self, coords, el) -> list[Fraction]:
        """Multiply a coordinate vector by a group element."""
        n = self.block_size
        shift = GroupRingElement.from_element(self.group, el)
        out: list[Fraction] = []
        for s in range(len(self.subsets)):
            block = [Fraction(x) for x in coords[s * n : (s + 1) * n]]
            moved = GroupRingElement.from_vector(self.group, block) * shift
            out.extend(moved.to_vector())
        return out

    def _block_actions(self):
        group = self.group
        els = group.elements()
        index = {g: i for i, g in enumerate(els)}
        n = self.block_size
        blocks = len(self.subsets)
        dim = self.ambient_dim
        actions = []
        for gi in range(len(group.invariants)):
            gen = tuple(int(j == gi) for j in range(len(group.invariants)))
            mat = [[Fraction(0)] * dim for _ in range(dim)]
            for s in range(blocks):
                for i, h in enumerate(els):
                    mat[s * n + i][s * n + index[group.mul(gen, h)]] = Fraction(1)
            actions.append(mat)
        return actions

    # -- lattices --------------------------------------------------------------

    def generator_coordinates(self) -> list[list[Fraction]]:
        base = [list(row) for row in self.module.basis]
        gens = [
            self.wedge_coordinates([base[i] for i in combo])
            for combo in itertools.combinations(range(len(base)), self.r)
        ]
        if self.r == 0 and gens:
            seed = gens[0]
            gens = [self.translate(seed, g) for g in self.group.elements()]
        return gens

    def lattice(self) -> GLattice:
        """The image of the integral exterior power in duality coordinates."""
        return GLattice(
            self.group,
            self.ambient_dim,
            self.generator_coordinates(),
            self._block_actions(),
            validate=False,
        )

    def integral_dual_lattice(self) -> GLattice:
        """Vectors of the rational exterior power whose pairings against all
        wedges of functional-basis elements are integral."""
        actions = self._block_actions()
        dim = self.ambient_dim
        if dim == 0:
            return GLattice(self.group, 0, [], actions, validate=False)
        gens = self.generator_coordinates()
        den = 1
        for row in gens:
            for x in row:
                den = lcm(den, x.denominator)
        span = normforms.integer_row_span([[int(x * den) for x in row] for row in gens])
        if not span:
            return GLattice(self.group, dim, [], actions, validate=False)
        transpose = [[span[i][j] for i in range(len(span))] for j in range(dim)]
        complement = normforms.integer_kernel(transpose)
        if not complement:
            rows = _mat_identity(dim)
            return GLattice(self.group, dim, rows, actions, validate=False)
        cuts = [[complement[e][i] for e in range(len(complement))] for i in range(dim)]
        kernel = normforms.integer_kernel(cuts)
        rows = [[Fraction(x) for x in row] for row in kernel]
        return GLattice(self.group, dim, rows, actions, validate=False)


def exterior_power(module: GLattice, r: int) -> GLattice:
    """The r-fold exterior power of the lattice over its group ring, as a
    lattice in duality coordinates."""
    return WedgeSpace(module, r).lattice()


def rubin_lattice(module: GLattice, r: int) -> GLattice:
    """The integral-dual sublattice of the rational exterior power: elements
    on which every wedge of r lattice functionals is integral. Contains the
    image of :func:`exterior_power`, with equality for free modules."""
    return WedgeSpace(module, r).integral_dual_lattice()


def wedge_pairing(module: GLattice, vectors, functionals) -> GroupRingElement:
    """Pair a pure wedge of ambient vectors against a wedge of functionals:
    the group-ring determinant of the value matrix."""
    if len(vectors) != len(functionals):
        raise ValueError("need as many functionals as wedge factors")
    r = len(vectors)
    if r == 0:
        return GroupRingElement.one(module.group)
    values = [
        [module.apply_functional(phi, vec) for vec in vectors] for phi in functionals
    ]
    if r == 1:
        return values[0][0]
    return reduced_norm(values)


# --------------------------------------------------------------------------
# quotients and finite modules


def _containment_coords(big: GLattice, small: GLattice) -> list[list[int]]:
    if not _same_group(big.group, small.group):
        raise ValueError("lattices live over different groups")
    if big.ambient_dim != small.ambient_dim:
        raise ValueError("lattices live in different ambient spaces")
    if big.rank != small.rank:
        raise ValueError(
            f"quotient is not finite: ranks differ ({big.rank} vs {small.rank})"
        )
    coords_rows = []
    for row in small.basis:
        coords = big.coords_of(list(row))
        if coords is None or any(c.denominator != 1 for c in coords):
            raise ValueError(f"not a sublattice: witness vector {list(row)}")
        coords_rows.append([int(c) for c in coords])
    return coords_rows


def quotient_invariants(big: GLattice, small: GLattice) -> list[int]:
    """Elementary divisors (> 1) of the finite quotient big/small."""
    coords = _containment_coords(big, small)
    return [d for d in normforms.snf_invariants(coords) if d != 1]


class FiniteGModule:
    """A finite abelian group ⊕ Z/n_j with an action of a finite abelian
    group, one integer matrix per group generator (rows are generator
    images; entries in column k live mod n_k)."""

    __slots__ = ("group", "invariants", "actions")

    def __init__(self, group, invariants, actions):
        if not isinstance(group, FiniteAbelianGroup):
            raise ValueError("FiniteGModule requires a finite abelian group")
        invs = [int(n) for n in invariants]
        if any(n < 1 for n in invs):
            raise ValueError("invariants must be positive")
        self.group = group
        self.invariants = invs
        size = len(invs)
        acts = []
        for mat in actions:
            mat = [[int(x) for x in row] for row in mat]
            if len(mat) != size or any(len(row) != size for row in mat):
                raise ValueError("action matrix does not match the invariant count")
            acts.append(self._reduce(mat))
        if len(acts) != len(group.invariants):
            raise ValueError("need one action matrix per group generator")
        self.actions = acts
        ident = self._reduce([[int(i == j) for j in range(size)] for i in range(size)])
        for order, mat in zip(group.invariants, acts):
            power = ident
            for _ in range(order):
                power = self._mat_mod_mul(power, mat)
            if power != ident:
                raise ValueError(
                    "action matrix does not satisfy the generator relation "
                    f"of order {order} (so it cannot be invertible mod the invariants)"
                )
        for a, b in itertools.combinations(range(len(acts)), 2):
            if self._mat_mod_mul(acts[a], acts[b]) != self._mat_mod_mul(acts[b], acts[a]):
                raise ValueError("action matrices of the generators do not commute")

    def _reduce(self, mat):
        return [
            [mat[i][j] % self.invariants[j] for j in range(len(self.invariants))]
            for i in range(len(mat))
        ]

    def _mat_mod_mul(self, a, b):
        size = len(self.invariants)
        out = [[0] * size for _ in range(size)]
        for i in range(size):
            for t in range(size):
                x = a[i][t]
                if not x:
                    continue
                for j in range(size):
                    if b[t][j]:
                        out[i][j] += x * b[t][j]
        return self._reduce(out)

    @property
    def order(self) -> int:
        total = 1
        for n in self.invariants:
            total *= n
        return total

    def act_element(self, el):
        size = len(self.invariants)
        mat = self._reduce([[int(i == j) for j in range(size)] for i in range(size)])
        for gi, e in enumerate(tuple(el)):
            for _ in range(e % self.group.invariants[gi]):
                mat = self._mat_mod_mul(mat, self.actions[gi])
        return mat

    def act_ring(self, x: GroupRingElement):
        if not _same_group(x.group, self.group):
            raise ValueError("group-ring element from a different group")
        size = len(self.invariants)
        out = [[0] * size for _ in range(size)]
        for g, c in x.coeffs.items():
            if not isinstance(c, Fraction) or c.denominator != 1:
                raise ValueError("annihilation test requires integer coefficients")
            mat = self.act_element(g)
            for i in range(size):
                for j in range(size):
                    out[i][j] += int(c) * mat[i][j]
        return self._reduce(out)

    @classmethod
    def from_lattice_quotient(cls, big: GLattice, small: GLattice) -> "FiniteGModule":
        """The quotient big/small with its induced group action."""
        coords = _containment_coords(big, small)
        diag, _, v = normforms.snf(coords)
        if any(d == 0 for d in diag):
            raise ValueError("quotient is not finite")
        p = big.rank
        vinv = _int_inverse(v)
        gen_count = len(big.group.invariants)
        keep = [j for j, d in enumerate(diag) if d != 1]
        invariants = [diag[j] for j in keep]
        actions = []
        for gi in range(gen_count):
            gen = tuple(int(j == gi) for j in range(gen_count))
            m_rows = []
            for b in big.basis:
                c = big.coords_of(big.apply_element(gen, list(b)))
                m_rows.append([int(x) for x in c])
            full = _int_mat_mul(_int_mat_mul(vinv, m_rows), v)
            actions.append([[full[i][j] for j in keep] for i in keep])
        return cls(big.group, invariants, actions)

    def __repr__(self):
        return f"FiniteGModule(invariants={self.invariants})"


def _int_mat_mul(a, b):
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for t in range(k):
            x = a[i][t]
            if not x:
                continue
            for j in range(m):
                if b[t][j]:
                    out[i][j] += x * b[t][j]
    return out


def _int_inverse(mat):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    n = len(mat)
    rows_q = [list(map(Fraction, r)) for r in mat]
    inverse = []
    for j in range(n):
        target = [Fraction(int(i == j)) for i in range(n)]
        ok, sol = normforms.reduce_row_rational(target, rows_q)
        if not ok or any(x.denominator != 1 for x in sol):
            raise ValueError("matrix is not unimodular")
        # sol solves sol * mat == e_j, so it is row j of the inverse
        inverse.append([int(x) for x in sol])
    return inverse


def annihilates(x: GroupRingElement, module: FiniteGModule) -> bool:
    """Whether a group-ring element with integer coefficients kills every
    element of the finite module."""
    acted = module.act_ring(x)
    return all(all(v == 0 for v in row) for row in acted)
