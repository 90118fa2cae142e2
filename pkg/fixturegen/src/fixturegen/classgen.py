"""Generation of class-module fixtures (ray class groups of the S and
reduced place sets, with the Galois action).

For a congruence set T = {t} with t inert, the ray class group modulo T
with the places of a set inverted sits in the exact sequence

    (units of the set) -> (residue field at t)* -> ray class group
                       -> (plain class group of the set) -> 1,

so whenever the plain class group of the set is trivial the ray class
group is the cyclic quotient of the residue field's multiplicative group
by the image of the unit group — computed here from discrete logarithms:
the order is gcd(t^2 - 1, dlog(-1), dlogs of the unit generators).  The
Galois action on that quotient is the Frobenius, multiplication by t.

With an empty congruence set the fixture carries the plain class groups
themselves; the Galois action on a quadratic class group is inversion.

Cases outside these certified paths (nontrivial class group of the
reduced set, split congruence primes, non-quadratic fields) are refused
with a pointer at the external CAS driver rather than guessed at.
"""

from math import gcd
from typing import Optional

from sympy import isprime

from cyclostark import RealAbelianField, SelmerFixture

from . import quadratic as quad
from .embed import detect_radicand
from .engine import BuiltinEngine, cross_check
from .intlinalg import left_kernel
from .request import FieldRequest
from .unitgen import _quadratic_sunit_pairs


def _module_dict(group, order: int, mult: int) -> dict:
    """JSON form of a cyclic module Z/order with every Galois generator
    acting as multiplication by ``mult``."""
    if order == 1:
        return {"invariants": [], "action": {}}
    ngens = len(group.invariants)
    action = {}
    for gi in range(ngens):
        gen = tuple(int(j == gi) for j in range(ngens))
        action[str(group.residue_of(gen))] = [[mult % order]]
    return {"invariants": [order], "action": action}


def _plain_class_module(group, qfield: quad.QuadraticField,
                        finite_places) -> dict:
    """Class group of the given place set as a module (Galois acts by
    inversion on a quadratic class group)."""
    order = qfield.class_number // qfield.prime_subgroup_order(finite_places)
    if order > 1 and not isprime(order):
        raise NotImplementedError(
            f"class group of order {order} may not be cyclic; "
            f"use the PARI/GP driver to certify its structure")
    return _module_dict(group, order, order - 1)


def _ray_class_order(residue: quad.ResidueData, dlogs) -> int:
    order = gcd(residue.order, residue.half)
    for d in dlogs:
        order = gcd(order, d)
    return order


def gen_classgroups(req: FieldRequest, presentation: Optional[dict] = None,
                    engine=None, cross_check_engine=None) -> dict:
    """Derive the class-module fixture for a request.

    The request must name a reduced place set; the congruence set may be
    empty (plain class groups) or a single inert prime (ray class groups
    via residue-field discrete logarithms).  The returned dict has
    already passed the verifier's own loading checks.
    """
    if req.sprime_places is None:
        raise ValueError("a class-module request needs a reduced place set")
    engine = engine or BuiltinEngine()
    presentation = presentation or {}
    if req.degree != 2:
        raise NotImplementedError(
            "class modules are derived by the embedded quadratic engine; "
            "use the PARI/GP driver for fields of degree > 2")

    field = RealAbelianField(req.conductor, list(req.subgroup_gens))
    group = field.group
    D = detect_radicand(req.conductor, req.subgroup_gens)
    qfield = engine.analyze(D, req.finite_s)
    if cross_check_engine is not None:
        report = cross_check_engine.quadratic_report(D, req.finite_s)
        cross_check(qfield, report, req.finite_s)

    finite_sprime = tuple(p for p in req.sprime_places if p != "inf")

    if not req.t_primes:
        cl_st = _plain_class_module(group, qfield, req.finite_s)
        cl_sprime_t = _plain_class_module(group, qfield, finite_sprime)
    else:
        if len(req.t_primes) != 1:
            raise NotImplementedError(
                "the embedded engine supports a single congruence prime")
        t = req.t_primes[0]
        if qfield.splitting_type(t) != "inert":
            raise NotImplementedError(
                f"congruence prime {t} is not inert in Q(sqrt({D})); "
                f"use the PARI/GP driver for split or ramified primes")
        for places, label in ((req.finite_s, "S"), (finite_sprime, "S'")):
            if qfield.prime_subgroup_order(places) != qfield.class_number:
                raise NotImplementedError(
                    f"the plain class group of {label} is nontrivial, so "
                    f"the ray class group is a nonsplit extension; use the "
                    f"PARI/GP driver to certify it")

        pairs = _quadratic_sunit_pairs(qfield, req.finite_s,
                                       presentation.get("s_part"))
        residue = quad.ResidueData(qfield, t)
        dlogs = [residue.dlog(x) for x in pairs]
        full = _ray_class_order(residue, dlogs)

        dropped_idx = [i for i, p in enumerate(req.finite_s)
                       if p not in finite_sprime]
        vfull = [qfield.valuation_vector(x, req.finite_s) for x in pairs]
        vmatrix = [[row[i] for i in dropped_idx] for row in vfull]
        sub_rows = left_kernel(vmatrix)
        sub_dlogs = [
            sum(e * d for e, d in zip(row, dlogs)) % residue.order
            for row in sub_rows
        ]
        sp = _ray_class_order(residue, sub_dlogs)

        cl_st = _module_dict(group, full, t)
        cl_sprime_t = _module_dict(group, sp, t)

    fixture = {
        "field": req.field_dict(),
        "S": list(req.s_places),
        "T": list(req.t_primes),
        "Sprime": list(req.sprime_places),
        "cl_ST": cl_st,
        "cl_SprimeT": cl_sprime_t,
    }
    SelmerFixture.from_dict(fixture)  # the verifier's own exactness checks
    return fixture
