"""Exact arithmetic in cyclotomic fields Q(zeta_m) = Q[x]/Phi_m(x).

Elements are rational coefficient vectors over the power basis
1, x, ..., x^(phi(m)-1). All operations are exact; numerical embeddings go
through mpmath at caller-chosen precision.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Sequence

import mpmath as mp


def euler_phi(m: int) -> int:
    if m < 1:
        raise ValueError("modulus must be positive")
    result = m
    n, p = m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def divisors(m: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= m:
        if m % d == 0:
            small.append(d)
            if d != m // d:
                large.append(m // d)
        d += 1
    return small + large[::-1]


def _poly_divide_exact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (ascending coefficients)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        if c % den[-1]:
            raise ArithmeticError("non-exact polynomial division")
        q = c // den[-1]
        out[k] = q
        if q:
            for i, d in enumerate(den):
                num[k + i] -= q * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Phi_m as ascending integer coefficients, via x^m - 1 = prod Phi_d."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m):
        if d != m:
            poly = _poly_divide_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_reduction_table(m: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_m for 0 <= k < 2m, as integer coefficient tuples."""
    phi = euler_phi(m)
    phim = cyclotomic_polynomial(m)
    rows: list[tuple[int, ...]] = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(2 * m):
        rows.append(tuple(cur))
        # multiply by x, reduce the overflow with x^phi = -(lower part of Phi)
        top = cur[phi - 1]
        cur = [0] + cur[: phi - 1]
        if top:
            for i in range(phi):
                cur[i] -= top * phim[i]
    return tuple(rows)


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"expected exact rational, got {type(v).__name__}")


class CyclotomicNumber:
    """An element of Q(zeta_m) as exact coordinates over the power basis."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, conductor: int, coeffs: Iterable):
        phi = euler_phi(conductor)
        vec = tuple(_as_fraction(c) for c in coeffs)
        if len(vec) != phi:
            raise ValueError(
                f"conductor {conductor} needs {phi} coefficients, got {len(vec)}"
            )
        self.conductor = conductor
        self.coeffs = vec

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, m: int) -> "CyclotomicNumber":
        return cls(m, [Fraction(0)] * euler_phi(m))

    @classmethod
    def one(cls, m: int) -> "CyclotomicNumber":
        c = [Fraction(0)] * euler_phi(m)
        c[0] = Fraction(1)
        return cls(m, c)

    @classmethod
    def from_rational(cls, m: int, value) -> "CyclotomicNumber":
        c = [Fraction(0)] * euler_phi(m)
        c[0] = _as_fraction(value)
        return cls(m, c)

    @classmethod
    def from_strings(cls, m: int, strings: Sequence[str]) -> "CyclotomicNumber":
        return cls(m, [Fraction(s) for s in strings])

    # -- basic protocol ----------------------------------------------------

    def _align(
        self, other: "CyclotomicNumber"
    ) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        """Lift both operands into the compositum field Q(zeta_lcm)."""
        if self.conductor == other.conductor:
            return self, other
        target = lcm(self.conductor, other.conductor)
        return self.lift(target), other.lift(target)

    def __eq__(self, other) -> bool:
        if isinstance(other, CyclotomicNumber):
            if self.conductor != other.conductor:
                a, b = self._align(other)
                return a.coeffs == b.coeffs
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        # equality lifts across conductors, so the hash must not depend on the
        # ambient field; rationals hash like their Fraction value, everything
        # else shares one bucket (equality disambiguates)
        if self.is_rational():
            return hash(self.coeffs[0])
        return 0x5CA1AB1E

    def __repr__(self):
        return f"CyclotomicNumber({self.conductor}, {[str(c) for c in self.coeffs]})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational element")
        return self.coeffs[0]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.conductor, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._align(other)
        return CyclotomicNumber(
            a.conductor, [x + y for x, y in zip(a.coeffs, b.coeffs)]
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, [-a for a in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(self.conductor, other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, [a * other for a in self.coeffs])
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        lhs, rhs = self._align(other)
        phi = len(lhs.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(lhs.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(rhs.coeffs):
                if b == 0:
                    continue
                prod[i + j] += a * b
        table = _power_reduction_table(lhs.conductor)
        out = list(prod[:phi])
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c == 0:
                continue
            row = table[k]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
        return CyclotomicNumber(lhs.conductor, out)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Field inverse via extended Euclid in Q[x] modulo Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        phim = [Fraction(c) for c in cyclotomic_polynomial(self.conductor)]
        a = list(self.coeffs)
        # invariants: s*self = a (mod Phi); t*self = b (mod Phi)
        b = phim
        s = [Fraction(1)]
        t = [Fraction(0)]

        def deg(p):
            for i in range(len(p) - 1, -1, -1):
                if p[i] != 0:
                    return i
            return -1

        def sub_scaled(p, q, c, shift):
            out = list(p) + [Fraction(0)] * max(0, deg(q) + shift + 1 - len(p))
            for i in range(deg(q) + 1):
                out[i + shift] -= c * q[i]
            return out

        while deg(b) > 0:
            # divide a by b is the wrong direction when deg a < deg b: swap
            if deg(a) < deg(b):
                a, b, s, t = b, a, t, s
                continue
            da, db = deg(a), deg(b)
            c = a[da] / b[db]
            a = sub_scaled(a, b, c, da - db)
            s = sub_scaled(s, t, c, da - db)
        if deg(b) == 0:
            a, b, s, t = b, a, t, s
        if deg(a) != 0:
            raise ZeroDivisionError("element is not invertible (unexpected)")
        lead = a[0]
        phi = euler_phi(self.conductor)
        inv = [c / lead for c in s]
        inv = (inv + [Fraction(0)] * phi)[:phi]
        # s may exceed phi-1 in degree in edge cases; reduce defensively
        if deg(s) >= phi:
            table = _power_reduction_table(self.conductor)
            red = [Fraction(0)] * phi
            for k, c in enumerate(c / lead for c in s):
                if c == 0:
                    continue
                row = table[k]
                for i in range(phi):
                    if row[i]:
                        red[i] += c * row[i]
            inv = red
        result = CyclotomicNumber(self.conductor, inv)
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CyclotomicNumber(
                self.conductor, [a / other for a in self.coeffs]
            )
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("exponent must be an integer")
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicNumber.one(self.conductor)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- field structure ---------------------------------------------------

    def conjugate(self, a: int) -> "CyclotomicNumber":
        """The Galois automorphism zeta -> zeta^a (a coprime to the conductor)."""
        m = self.conductor
        from math import gcd

        if gcd(a, m) != 1:
            raise ValueError(f"conjugation exponent {a} not coprime to {m}")
        a %= m
        table = _power_reduction_table(m)
        phi = len(self.coeffs)
        out = [Fraction(0)] * phi
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(a * j) % m]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
        return CyclotomicNumber(m, out)

    def lift(self, new_conductor: int) -> "CyclotomicNumber":
        """Image under Q(zeta_m) -> Q(zeta_M), zeta_m = zeta_M^(M/m); needs m | M."""
        m, big = self.conductor, new_conductor
        if big % m:
            raise ValueError(f"{m} does not divide {big}")
        step = big // m
        table = _power_reduction_table(big)
        phi = euler_phi(big)
        out = [Fraction(0)] * phi
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            row = table[(step * j) % big]
            for i in range(phi):
                if row[i]:
                    out[i] += c * row[i]
        return CyclotomicNumber(big, out)

    # -- numerics ----------------------------------------------------------

    def embed(self, a: int, dps: int = 60):
        """Numeric value at zeta_m = exp(2*pi*i*a/m)."""
        with mp.workdps(dps + 10):
            z = mp.e ** (2j * mp.pi * a / self.conductor)
            acc = mp.mpc(0)
            power = mp.mpc(1)
            for c in self.coeffs:
                if c != 0:
                    acc += mp.mpf(c.numerator) / c.denominator * power
                power *= z
            return acc

    # -- serialization -----------------------------------------------------

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]


def zeta_power(m: int, k: int) -> CyclotomicNumber:
    """zeta_m^k as an exact element."""
    table = _power_reduction_table(m)
    return CyclotomicNumber(m, [Fraction(v) for v in table[k % m]])
