"""Exact embeddings of real quadratic fields into cyclotomic fields.

Given a conductor m and a residue subgroup H of index 2, the fixed field
is Q(sqrt(d)) for a unique squarefree d > 1.  This module finds that d by
testing quadratic residue characters against the subgroup generators, and
builds sqrt(d) inside the degree-phi(m) cyclotomic field as a product of
classical Gauss sums — each piece squared and the final product squared
are asserted exactly, so a wrong embedding cannot escape.
"""

from fractions import Fraction
from typing import Iterable, Tuple

from cyclostark import CyclotomicNumber, zeta_power

from .quadratic import Pair, is_squarefree, kronecker


def fundamental_discriminant(d: int) -> int:
    return d if d % 4 == 1 else 4 * d


def detect_radicand(m: int, subgroup_gens: Iterable[int]) -> int:
    """The squarefree d with Q(sqrt(d)) the field fixed by the subgroup.

    Valid whenever the subgroup has index 2 in (Z/m)^*; raises if no or
    several candidates match (which would mean the index is not 2).
    """
    gens = [g % m for g in subgroup_gens]
    matches = []
    for d in range(2, m + 1):
        if not is_squarefree(d):
            continue
        disc = fundamental_discriminant(d)
        if m % disc:
            continue
        if all(kronecker(disc, g) == 1 for g in gens):
            matches.append(d)
    if len(matches) != 1:
        raise ValueError(
            f"expected exactly one real quadratic subfield fixed by the "
            f"subgroup, found {matches}; is the fixed field quadratic?")
    return matches[0]


def _legendre(a: int, p: int) -> int:
    return kronecker(a % p if a % p else p, p) if a % p else 0


def sqrt_embedding(m: int, d: int) -> CyclotomicNumber:
    """sqrt(d) as an exact element of the m-th cyclotomic field.

    Built prime by prime: sqrt(2) from the eighth roots of unity, and
    sqrt(p) for odd p from the quadratic Gauss sum (twisted by a fourth
    root of unity when p == 3 mod 4).  The result is certified by
    squaring.
    """
    if not is_squarefree(d) or d < 2:
        raise ValueError(f"radicand must be squarefree >= 2, got {d}")
    product = CyclotomicNumber.one(m)
    for p in sorted(_prime_factors(d)):
        if p == 2:
            if m % 8:
                raise ValueError(f"sqrt(2) needs 8 | conductor, got {m}")
            piece = zeta_power(m, m // 8) + zeta_power(m, (-(m // 8)) % m)
        else:
            if m % p:
                raise ValueError(f"sqrt({p}) needs {p} | conductor, got {m}")
            step = m // p
            gauss = CyclotomicNumber.zero(m)
            for a in range(1, p):
                term = zeta_power(m, (a * step) % m)
                if _legendre(a, p) == 1:
                    gauss = gauss + term
                else:
                    gauss = gauss - term
            if p % 4 == 1:
                piece = gauss
            else:
                if m % 4:
                    raise ValueError(
                        f"sqrt({p}) with p == 3 mod 4 needs 4 | conductor")
                piece = zeta_power(m, (3 * m) // 4) * gauss
        if piece * piece != CyclotomicNumber.from_rational(m, Fraction(p)):
            raise ArithmeticError(f"Gauss-sum square check failed for p={p}")
        product = product * piece
    if product * product != CyclotomicNumber.from_rational(m, Fraction(d)):
        raise ArithmeticError(f"sqrt({d}) embedding failed its square check")
    return product


def pair_to_cyclotomic(m: int, x: Pair,
                       sqrt_d: CyclotomicNumber) -> CyclotomicNumber:
    a, b = x
    return (CyclotomicNumber.from_rational(m, a)
            + CyclotomicNumber.from_rational(m, b) * sqrt_d)


def _prime_factors(n: int) -> Tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)
