"""Exact arithmetic and classical invariants for real quadratic fields.

Elements of Q(sqrt(D)) are pairs ``(a, b)`` of :class:`fractions.Fraction`
meaning ``a + b*sqrt(D)``.  On top of that representation this module
derives, with integer arithmetic only:

* the fundamental unit, as the minimal half-coordinate solution of the
  Pell equation ``a^2 - D b^2 = +-4``;
* the class group at desk scale, through reduction cycles of indefinite
  binary quadratic forms (one cycle per narrow ideal class, merged into
  wide classes by multiplying with the ideal generated by sqrt(D));
* prime decomposition, ideal products on 2x2 integral bases, and
  principality tests for products of ramified primes;
* valuation vectors of S-units from the factorization of their norms;
* discrete logarithms in the residue field of an inert prime.

Everything downstream of this module is certified again independently
(exact cyclotomic identities, the verifier's own loaders), so a defect
here can abort a generation run but cannot produce a wrong fixture.
"""

from fractions import Fraction
from math import gcd, isqrt
from typing import Dict, List, Sequence, Tuple

from sympy import factorint

from .intlinalg import row_hnf

Pair = Tuple[Fraction, Fraction]

_UNIT_SEARCH_BOUND = 2_000_000
_REDUCTION_GUARD = 1_000_000


# ---------------------------------------------------------------------------
# pairs a + b*sqrt(D)

def pair(a, b) -> Pair:
    return (Fraction(a), Fraction(b))


def pmul(x: Pair, y: Pair, D: int) -> Pair:
    a, b = x
    c, d = y
    return (a * c + b * d * D, a * d + b * c)


def pconj(x: Pair) -> Pair:
    return (x[0], -x[1])


def pnorm(x: Pair, D: int) -> Fraction:
    return x[0] * x[0] - D * x[1] * x[1]


def pinv(x: Pair, D: int) -> Pair:
    n = pnorm(x, D)
    if n == 0:
        raise ZeroDivisionError("inverting zero")
    return (x[0] / n, -x[1] / n)


def ppow(x: Pair, e: int, D: int) -> Pair:
    if e < 0:
        return ppow(pinv(x, D), -e, D)
    out = (Fraction(1), Fraction(0))
    base = x
    while e:
        if e & 1:
            out = pmul(out, base, D)
        base = pmul(base, base, D)
        e >>= 1
    return out


def pneg(x: Pair) -> Pair:
    return (-x[0], -x[1])


# ---------------------------------------------------------------------------
# discriminants and symbols

def is_squarefree(n: int) -> bool:
    return n > 0 and all(e == 1 for e in factorint(n).values())


def discriminant(D: int) -> int:
    if D < 2 or not is_squarefree(D):
        raise ValueError(f"radicand must be a squarefree integer >= 2, got {D}")
    return D if D % 4 == 1 else 4 * D


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi defined for odd positive n")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n) for n >= 1."""
    if n <= 0:
        raise ValueError("only positive lower arguments are needed here")
    result = 1
    while n % 2 == 0:
        if a % 2 == 0:
            return 0
        result *= 1 if a % 8 in (1, 7) else -1
        n //= 2
    return result * _jacobi(a, n)


# ---------------------------------------------------------------------------
# fundamental unit: minimal half-coordinate Pell solution

def fundamental_unit(D: int) -> Pair:
    """Smallest unit > 1 of the maximal order of Q(sqrt(D))."""
    discriminant(D)  # validates D
    for b in range(1, _UNIT_SEARCH_BOUND):
        base = D * b * b
        for n4 in (base - 4, base + 4):
            if n4 <= 0:
                continue
            a = isqrt(n4)
            if a * a == n4:
                # Half-coordinates (a + b sqrt(D))/2 lie in the maximal
                # order iff a, b are both even, or a == b mod 2 when
                # D == 1 mod 4.
                if (a % 2 == 0 and b % 2 == 0) or (D % 4 == 1 and (a - b) % 2 == 0):
                    return (Fraction(a, 2), Fraction(b, 2))
    raise ArithmeticError(f"no fundamental unit found below bound for D={D}")


# ---------------------------------------------------------------------------
# indefinite binary quadratic forms: reduction cycles = narrow classes

Form = Tuple[int, int, int]


def _form_disc(f: Form) -> int:
    a, b, c = f
    return b * b - 4 * a * c


def _is_reduced(f: Form, s: int) -> bool:
    a, b, _ = f
    if b <= 0 or b > s:
        return False
    if b + 2 * abs(a) <= s:
        return False
    t = 2 * abs(a) - b
    return t <= s


def _rho(f: Form, delta: int, s: int) -> Form:
    _, b, c = f
    ac = abs(c)
    if ac == 0:
        raise ArithmeticError("degenerate form (square discriminant?)")
    if ac > s:
        r = (-b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        r = s - ((s + b) % (2 * ac))
    return (c, r, (r * r - delta) // (4 * c))


def reduce_form(f: Form, delta: int) -> Form:
    s = isqrt(delta)
    for _ in range(_REDUCTION_GUARD):
        if _is_reduced(f, s):
            return f
        f = _rho(f, delta, s)
    raise ArithmeticError("form reduction did not terminate")


def cycle_key(f: Form, delta: int) -> Form:
    """Canonical representative (minimal tuple) of the reduction cycle."""
    s = isqrt(delta)
    f0 = reduce_form(f, delta)
    best = f0
    g = _rho(f0, delta, s)
    count = 1
    while g != f0:
        if g < best:
            best = g
        g = _rho(g, delta, s)
        count += 1
        if count > _REDUCTION_GUARD:
            raise ArithmeticError("reduction cycle did not close")
    return best


def all_reduced_forms(delta: int) -> List[Form]:
    s = isqrt(delta)
    out = []
    for b in range(1, s + 1):
        if (b - delta) % 2:
            continue
        ac4 = b * b - delta
        if ac4 % 4:
            continue
        ac = ac4 // 4  # negative
        mag = -ac
        for a_abs in range(1, mag + 1):
            if mag % a_abs:
                continue
            for a in (a_abs, -a_abs):
                f = (a, b, ac // a)
                if _is_reduced(f, s):
                    out.append(f)
    return out


# ---------------------------------------------------------------------------
# ideals as row-HNF Z-bases over (1, w), w = (s0 + sqrt(delta))/2

Ideal = Tuple[Tuple[int, int], Tuple[int, int]]


def _elem_mul(e1, e2, delta: int):
    s0 = delta % 2
    w2 = (delta - s0) // 4
    x1, y1 = e1
    x2, y2 = e2
    return (x1 * x2 + y1 * y2 * w2, x1 * y2 + x2 * y1 + y1 * y2 * s0)


def _elem_norm(e, delta: int) -> int:
    s0 = delta % 2
    x, y = e
    return x * x + s0 * x * y + ((s0 - delta) // 4) * y * y


def ideal_hnf(gens: Sequence[Tuple[int, int]]) -> Ideal:
    rows = row_hnf(list(gens))
    if len(rows) != 2:
        raise ArithmeticError("ideal basis degenerated")
    return (tuple(rows[0]), tuple(rows[1]))


def ideal_one() -> Ideal:
    return ((1, 0), (0, 1))


def ideal_mul(i1: Ideal, i2: Ideal, delta: int) -> Ideal:
    gens = [_elem_mul(e1, e2, delta) for e1 in i1 for e2 in i2]
    return ideal_hnf(gens)


def ideal_primitive(i: Ideal) -> Ideal:
    g = 0
    for row in i:
        for x in row:
            g = gcd(g, x)
    if g in (0, 1):
        return i
    return (tuple(x // g for x in i[0]), tuple(x // g for x in i[1]))


def ideal_norm(i: Ideal) -> int:
    return abs(i[0][0] * i[1][1] - i[0][1] * i[1][0])


def ideal_to_form(i: Ideal, delta: int) -> Form:
    s0 = delta % 2
    (x1, y1), (x2, y2) = i
    n = ideal_norm(i)
    a_raw = _elem_norm((x1, y1), delta)
    c_raw = _elem_norm((x2, y2), delta)
    b_raw = 2 * x1 * x2 + s0 * (x1 * y2 + x2 * y1) + y1 * y2 * ((s0 - delta) // 2)
    if a_raw % n or b_raw % n or c_raw % n:
        raise ArithmeticError("ideal does not induce an integral form")
    f = (a_raw // n, b_raw // n, c_raw // n)
    if _form_disc(f) != delta:
        raise ArithmeticError("form discriminant mismatch")
    return f


def sqrt_ideal(D: int, delta: int) -> Ideal:
    """The principal ideal generated by sqrt(D)."""
    if delta % 2:
        return ideal_hnf([(-1, 2), ((D - 1) // 2, 1)])
    return ideal_hnf([(D, 0), (0, 1)])


# ---------------------------------------------------------------------------
# the assembled field toolbox

class QuadraticField:
    """Unit, class, and residue data for Q(sqrt(D)), D squarefree >= 2."""

    def __init__(self, D: int):
        self.D = int(D)
        self.delta = discriminant(self.D)
        self.sqrt_floor = isqrt(self.delta)
        self.fundamental_unit = fundamental_unit(self.D)
        self.unit_norm = int(pnorm(self.fundamental_unit, self.D))
        if self.unit_norm not in (1, -1):
            raise ArithmeticError("fundamental unit is not a unit")

        forms = all_reduced_forms(self.delta)
        keys = {cycle_key(f, self.delta) for f in forms}
        self.narrow_class_number = len(keys)

        principal = cycle_key((1, self.delta % 2,
                               ((self.delta % 2) - self.delta) // 4),
                              self.delta)
        negative = cycle_key(ideal_to_form(sqrt_ideal(self.D, self.delta),
                                           self.delta), self.delta)
        self._principal_keys = frozenset({principal, negative})
        if self.unit_norm == -1 and principal != negative:
            raise ArithmeticError(
                "norm -1 unit but split principal cycles; reduction bug")
        merged = len(self._principal_keys)
        if self.narrow_class_number % merged:
            raise ArithmeticError("narrow classes do not merge evenly")
        self.class_number = self.narrow_class_number // merged
        self._sqrt_ideal = sqrt_ideal(self.D, self.delta)

    # -- prime decomposition ------------------------------------------------

    def splitting_type(self, p: int) -> str:
        k = kronecker(self.delta, p)
        if k == 0:
            return "ramified"
        return "split" if k == 1 else "inert"

    def prime_ideal(self, p: int) -> Ideal:
        s0 = self.delta % 2
        kind = self.splitting_type(p)
        if kind == "inert":
            return ideal_hnf([(p, 0), (0, p)])
        for b in range(s0, 2 * p + 1, 2):
            if (b * b - self.delta) % (4 * p) == 0:
                return ideal_hnf([(p, 0), ((b - s0) // 2, 1)])
        raise ArithmeticError(f"no prime ideal above {p} found")

    # -- classes ------------------------------------------------------------

    def class_of(self, ideal: Ideal) -> Form:
        return cycle_key(ideal_to_form(ideal_primitive(ideal), self.delta),
                         self.delta)

    def wide_class_of(self, ideal: Ideal) -> Form:
        direct = self.class_of(ideal)
        flipped = self.class_of(ideal_mul(ideal, self._sqrt_ideal, self.delta))
        return min(direct, flipped)

    def is_wide_principal(self, ideal: Ideal) -> bool:
        return self.class_of(ideal) in self._principal_keys

    def ramified_product_principal(self, primes: Sequence[int],
                                   exponents: Sequence[int]) -> bool:
        """Whether prod p_i^(e_i) is principal (any generator sign).

        Only ramified and inert primes are supported; for ramified p the
        square p^2 = (p) is principal, so exponents act mod 2.
        """
        acc = ideal_one()
        for p, e in zip(primes, exponents):
            kind = self.splitting_type(p)
            if kind == "inert":
                continue
            if kind == "split":
                raise NotImplementedError(
                    "split primes need an external CAS driver")
            if e % 2:
                acc = ideal_primitive(ideal_mul(acc, self.prime_ideal(p),
                                                self.delta))
        return self.is_wide_principal(acc)

    def prime_subgroup_order(self, primes: Sequence[int]) -> int:
        """Order of the subgroup of the (wide) class group generated by
        the classes of the primes above the given rational primes."""
        gens = []
        for p in primes:
            kind = self.splitting_type(p)
            if kind == "inert":
                continue
            if kind == "split":
                raise NotImplementedError(
                    "split primes need an external CAS driver")
            gens.append(self.prime_ideal(p))
        identity = self.wide_class_of(ideal_one())
        seen = {identity: ideal_one()}
        frontier = [ideal_one()]
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = ideal_primitive(ideal_mul(current, g, self.delta))
                key = self.wide_class_of(nxt)
                if key not in seen:
                    seen[key] = nxt
                    frontier.append(nxt)
        return len(seen)

    # -- S-unit valuations ----------------------------------------------------

    def valuation_vector(self, x: Pair, s_primes: Sequence[int]) -> List[int]:
        """Exponents of x's ideal over the primes above each entry of
        ``s_primes``; raises if x is not an S-unit for that set."""
        n = pnorm(x, self.D)
        if n == 0:
            raise ValueError("zero element")
        num = abs(n.numerator)
        den = n.denominator
        vals = []
        for p in s_primes:
            e = 0
            while num % p == 0:
                num //= p
                e += 1
            while den % p == 0:
                den //= p
                e -= 1
            kind = self.splitting_type(p)
            if kind == "ramified":
                vals.append(e)
            elif kind == "inert":
                if e % 2:
                    raise ArithmeticError("odd inert valuation from a norm")
                vals.append(e // 2)
            else:
                raise NotImplementedError(
                    "split primes need an external CAS driver")
        if num != 1 or den != 1:
            raise ValueError(
                f"element has support outside S (leftover norm {num}/{den})")
        return vals


# ---------------------------------------------------------------------------
# residue field of an inert prime t: F_{t^2} = F_t[x]/(x^2 - D)

def _f2mul(x, y, t: int, D: int):
    a, b = x
    c, d = y
    return ((a * c + b * d * D) % t, (a * d + b * c) % t)


def _f2pow(x, e: int, t: int, D: int):
    out = (1, 0)
    base = x
    while e:
        if e & 1:
            out = _f2mul(out, base, t, D)
        base = _f2mul(base, base, t, D)
        e >>= 1
    return out


def _f2_generator(t: int, D: int):
    n = t * t - 1
    prime_divs = list(factorint(n))
    for a in range(t):
        for b in range(1, t):
            g = (a, b)
            if all(_f2pow(g, n // p, t, D) != (1, 0) for p in prime_divs):
                return g
    raise ArithmeticError("no multiplicative generator found")


def reduce_pair(x: Pair, t: int):
    a, b = x
    if a.denominator % t == 0 or b.denominator % t == 0:
        raise ValueError("denominator not invertible mod t")
    return (int(a.numerator * pow(a.denominator, -1, t)) % t,
            int(b.numerator * pow(b.denominator, -1, t)) % t)


class ResidueData:
    """Discrete-log table of the residue field at an inert prime."""

    def __init__(self, field: QuadraticField, t: int):
        if field.splitting_type(t) != "inert":
            raise ValueError(f"{t} is not inert; residue field is not F_t^2")
        self.field = field
        self.t = int(t)
        self.order = self.t * self.t - 1
        self.half = self.order // 2  # discrete log of -1
        self.generator = _f2_generator(self.t, field.D)
        table: Dict[Tuple[int, int], int] = {}
        x = (1, 0)
        for k in range(self.order):
            table[x] = k
            x = _f2mul(x, self.generator, self.t, field.D)
        self._table = table

    def dlog(self, x: Pair) -> int:
        return self._table[reduce_pair(x, self.t)]
