"""Galois action tables over a unit basis, proposed numerically and
certified exactly.

For each non-identity residue class the conjugate of every basis element
is re-expressed over the basis.  Integer exponents are proposed by a
least-squares solve against the logarithmic embedding (using the
verifier's own place conventions), then certified by exact cyclotomic
arithmetic: the conjugate must equal plus or minus the proposed product.
A sloppy proposal or a failed certificate aborts generation — it can
never produce a wrong table.
"""

from typing import List, Sequence

import numpy as np
from mpmath import mp

from cyclostark import CyclotomicNumber, log_abs


def propose(field, places, basis_elems, target, precision: int = 60):
    """Integer exponents of ``target`` over the basis, from place logs."""
    with mp.workdps(precision + 10):
        A = np.array([
            [float(log_abs(field, b, w, precision)) for w in places]
            for b in basis_elems
        ])
        y = np.array([float(log_abs(field, target, w, precision))
                      for w in places])
    sol, *_ = np.linalg.lstsq(A.T, y, rcond=None)
    exps = [round(v) for v in sol]
    resid = float(np.abs(A.T @ np.array(exps, dtype=float) - y).max())
    drift = float(np.abs(sol - np.array(exps, dtype=float)).max())
    if resid > 1e-6 or drift > 0.25:
        raise ArithmeticError(
            f"sloppy exponent proposal (residual {resid:.2e}, "
            f"drift {drift:.2f}); raise the precision")
    return exps


def certify(m: int, basis_elems, target, exps) -> int:
    """Exact check target == sign * prod(basis^exps); returns the sign."""
    lhs = target
    rhs = CyclotomicNumber.one(m)
    for b, e in zip(basis_elems, exps):
        if e > 0:
            rhs = rhs * b ** e
        elif e < 0:
            lhs = lhs * b ** (-e)
    if lhs == rhs:
        return 1
    if lhs == -rhs:
        return -1
    raise ArithmeticError(
        f"exponent certificate failed for exponents {exps}")


def action_table(field, places, basis_elems: Sequence,
                 precision: int = 60) -> dict:
    """Certified conjugation matrices for every non-identity residue."""
    group = field.group
    table = {}
    for el in group.elements():
        if el == group.identity:
            continue
        residue = group.residue_of(el)
        matrix: List[List[int]] = []
        signs: List[int] = []
        for b in basis_elems:
            conj = b.conjugate(residue)
            exps = propose(field, places, basis_elems, conj, precision)
            sign = certify(field.conductor, basis_elems, conj, exps)
            matrix.append([int(e) for e in exps])
            signs.append(sign)
        table[str(residue)] = {"matrix": matrix, "signs": signs}
    return table
