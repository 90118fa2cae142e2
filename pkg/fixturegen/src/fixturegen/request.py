"""Validated description of one field-fixture request.

A request pins down the real abelian field (conductor and the subgroup of
residues fixing it), the finite places S inverted in the unit lattice, the
auxiliary congruence primes T, the reduced place set S' used for the
companion class module, and the output file name.  Validation refuses
anything the generators cannot make sound fixtures for: conductors beyond
desk scale, subgroups that do not contain -1 (the fixed field would not be
totally real), and congruence primes that would leave torsion in the
congruence-unit group.
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Optional, Sequence, Tuple, Union

MAX_CONDUCTOR = 400

Place = Union[str, int]


def _closure(m: int, gens: Sequence[int]) -> frozenset:
    seen = {1 % m}
    frontier = [1 % m]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = (x * g) % m
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_places(label: str, places: Sequence[Place]) -> Tuple[Place, ...]:
    out = []
    for p in places:
        if p == "inf":
            out.append("inf")
            continue
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{label} entries must be 'inf' or primes, got {p}")
        out.append(p)
    if out.count("inf") > 1:
        raise ValueError(f"{label} lists the infinite place twice")
    finite = [p for p in out if p != "inf"]
    if len(set(finite)) != len(finite):
        raise ValueError(f"{label} repeats a finite prime")
    return tuple(out)


@dataclass(frozen=True)
class FieldRequest:
    """One fixture request: field, place sets, and output name."""

    conductor: int
    subgroup_gens: Tuple[int, ...]
    s_places: Tuple[Place, ...]
    t_primes: Tuple[int, ...] = ()
    sprime_places: Optional[Tuple[Place, ...]] = None
    output_name: Optional[str] = None

    def __init__(
        self,
        conductor: int,
        subgroup_gens: Sequence[int],
        s_places: Sequence[Place],
        t_primes: Sequence[int] = (),
        sprime_places: Optional[Sequence[Place]] = None,
        output_name: Optional[str] = None,
    ):
        m = int(conductor)
        if m < 3:
            raise ValueError("conductor must be at least 3")
        if m > MAX_CONDUCTOR:
            raise ValueError(
                f"conductor {m} exceeds the supported scale ({MAX_CONDUCTOR})")
        gens = tuple(int(g) % m for g in subgroup_gens)
        if not gens:
            raise ValueError("at least one subgroup generator is required")
        for g in gens:
            if gcd(g, m) != 1:
                raise ValueError(f"subgroup generator {g} is not a unit mod {m}")
        if (m - 1) not in _closure(m, gens):
            raise ValueError(
                "the residue subgroup must contain -1 so that the fixed "
                "field is totally real; request refused")

        s = _check_places("S", s_places)
        if "inf" not in s:
            raise ValueError("S must contain the infinite place 'inf'")

        t = tuple(int(p) for p in t_primes)
        for p in t:
            if not _is_prime(p) or p < 3:
                raise ValueError(
                    f"congruence primes must be primes >= 3 (torsion-free "
                    f"congruence units), got {p}")
            if m % p == 0:
                raise ValueError(
                    f"congruence prime {p} divides the conductor {m}")
            if p in s:
                raise ValueError(f"congruence prime {p} already appears in S")
        if len(set(t)) != len(t):
            raise ValueError("T repeats a prime")

        sp = None
        if sprime_places is not None:
            sp = _check_places("S'", sprime_places)
            for p in sp:
                if p not in s:
                    raise ValueError(f"S' entry {p} does not appear in S")

        object.__setattr__(self, "conductor", m)
        object.__setattr__(self, "subgroup_gens", gens)
        object.__setattr__(self, "s_places", s)
        object.__setattr__(self, "t_primes", t)
        object.__setattr__(self, "sprime_places", sp)
        object.__setattr__(self, "output_name", output_name)

    # -- derived views -----------------------------------------------------

    @property
    def finite_s(self) -> Tuple[int, ...]:
        return tuple(p for p in self.s_places if p != "inf")

    @property
    def subgroup(self) -> frozenset:
        return _closure(self.conductor, self.subgroup_gens)

    @property
    def degree(self) -> int:
        m = self.conductor
        units = sum(1 for a in range(1, m) if gcd(a, m) == 1)
        return units // len(self.subgroup)

    def field_dict(self) -> dict:
        return {"conductor": self.conductor,
                "subgroup_gens": list(self.subgroup_gens)}

    def default_name(self, kind: str) -> str:
        h = "-".join(str(g) for g in self.subgroup_gens)
        t = ""
        if self.t_primes:
            t = "T" + "-".join(str(p) for p in self.t_primes) + "_"
        return f"field_m{self.conductor}_H{h}_{t}{kind}.json"
