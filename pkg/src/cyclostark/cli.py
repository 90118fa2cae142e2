"""Command-line front end.

Three subcommands:

``element``
    Load the unit fixture for a named real abelian field, construct the
    distinguished half-integral unit, and print its exponents, the rank-one
    idempotent, and the Hermite normal form of the module generated by its
    Galois orbit.

``verify``
    Discover every fixture family in a directory and run the requested
    checks (regulator identity, integrality, Fitting-ideal equality,
    annihilation, isotypic dimensions), emitting a deterministic JSON
    report.  Exit status is 0 when everything passes, 1 when a check
    fails, and 2 when an input is missing or malformed.

``fit``
    Compute a classical Fitting ideal of an integer group-ring matrix read
    from a JSON file and print its Hermite normal form.
"""

from __future__ import annotations

import argparse
import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Tuple

from .groupring import FiniteAbelianGroup, GroupRingElement
from .lattice import Presentation, classical_fitting_ideal
from .normforms import integer_row_span
from .numberfield import RealAbelianField, SUnitBasis
from .starkunit import (
    SelmerFixture,
    StarkUnit,
    cyclotomic_stark_unit,
    isotypic_dimension_check,
    t_modified_unit,
    verify_annihilation,
    verify_fitting_equality,
    verify_integrality,
    verify_regulator_identity,
)

CHECKS = ("regulator", "integrality", "fitting", "annihilation", "dimensions")
DIMENSION_DEGREES = (0, 1, 2)

_FIXTURE_NAME = re.compile(
    r"^field_m(\d+)_H(\d+(?:-\d+)*)_(?:T(\d+(?:-\d+)*)_)?(sunits|selmer)\.json$"
)

# Exceptions that signal a malformed or inconsistent input file rather than
# a genuine verification failure.
_LOAD_ERRORS = (ValueError, KeyError, TypeError, OSError)


class InputError(Exception):
    """A problem with the command line or the input files (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    """Validated settings for a verification run."""

    fixtures: Path
    precision: int = 60
    tolerance_exponent: int = 30
    selection: Tuple[str, ...] = CHECKS
    negative_control: bool = False
    out: Optional[Path] = None

    def __post_init__(self):
        if self.precision < 20:
            raise InputError(
                f"precision must be at least 20 decimal digits (got {self.precision})")
        if 2 * self.tolerance_exponent > self.precision:
            raise InputError(
                f"tolerance exponent {self.tolerance_exponent} may not exceed "
                f"half the precision ({self.precision})")
        unknown = sorted(set(self.selection) - set(CHECKS))
        if unknown:
            raise InputError(
                "unknown check name(s): " + ", ".join(unknown)
                + "; valid names are " + ", ".join(CHECKS) + ", or all")


# --------------------------------------------------------------------------
# shared helpers


def _parse_int_list(text: str) -> list:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated list of integers, got {text!r}")


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        print(text, end="")


def _corrupt(stark: StarkUnit) -> StarkUnit:
    """Deliberately wrong element for negative-control runs.  Scaling the
    exponent vector by 1/3 breaks every membership, equality, and analytic
    comparison: denominators divisible by 3 can never be absorbed by the
    order-2 Galois symmetries or the auxiliary-prime factors, whereas a
    factor 1/2 can be.  The corruption also breaks the constructor's own
    invariants (that is the point), so the object is assembled without
    validation."""
    corrupted = object.__new__(StarkUnit)
    corrupted.element = stark.element.scale(Fraction(1, 3))
    corrupted.field = stark.field
    corrupted.placeset = stark.placeset
    corrupted.T = stark.T
    corrupted.e_pi = stark.e_pi
    return corrupted


def _module_hnf(stark: StarkUnit) -> dict:
    """Hermite normal form of the exponent lattice spanned by the Galois
    orbit of the element, together with the common denominator."""
    orbit = [stark.element.apply_element(g).exponents
             for g in stark.field.group.elements()]
    denominator = math.lcm(*(q.denominator for row in orbit for q in row))
    rows = [[int(q * denominator) for q in row] for row in orbit]
    span = integer_row_span(rows)
    return {"denominator": denominator, "rows": [list(r) for r in span]}


# --------------------------------------------------------------------------
# element


def _cmd_element(args) -> Tuple[dict, int]:
    if args.precision < 20:
        raise InputError(
            f"precision must be at least 20 decimal digits (got {args.precision})")
    gens = _parse_int_list(args.subgroup)
    try:
        field = RealAbelianField(args.conductor, gens)
    except ValueError as exc:
        raise InputError(str(exc))
    name = f"field_m{args.conductor}_H{'-'.join(str(g) for g in gens)}_sunits.json"
    path = Path(args.fixtures) / name
    if not path.is_file():
        raise InputError(f"no unit fixture {name} found in {args.fixtures}")
    try:
        basis = SUnitBasis.load(path)
        stark = cyclotomic_stark_unit(field, basis, precision=args.precision)
    except _LOAD_ERRORS as exc:
        raise InputError(f"{name}: {exc}")
    doc = {
        "command": "element",
        "conductor": field.conductor,
        "subgroup": gens,
        "exponents": [str(q) for q in stark.element.exponents],
        "e_pi": [str(c) for c in stark.e_pi.to_vector()],
        "module_hnf": _module_hnf(stark),
    }
    return doc, 0


# --------------------------------------------------------------------------
# verify


def _discover(directory: Path) -> dict:
    """Group fixture files by field: each family has one base unit fixture,
    any number of congruence-prime unit fixtures, and any number of class
    module fixtures."""
    if not directory.is_dir():
        raise InputError(f"fixture directory {directory} does not exist")
    families: dict = {}
    for path in sorted(directory.iterdir()):
        match = _FIXTURE_NAME.match(path.name)
        if not match:
            continue
        prefix = f"field_m{match.group(1)}_H{match.group(2)}"
        family = families.setdefault(
            prefix, {"base": None, "t_units": [], "selmer": []})
        if match.group(4) == "selmer":
            family["selmer"].append(path)
        elif match.group(3) is None:
            family["base"] = path
        else:
            family["t_units"].append(path)
    if not families:
        raise InputError(
            f"no fixtures matching field_m*_H*_*.json found in {directory}")
    return families


def _family_checks(family: dict, config: RunConfig) -> list:
    base = family["base"]
    if base is None:
        extras = ", ".join(p.name for p in family["t_units"] + family["selmer"])
        raise InputError(f"no base unit fixture to match {extras}")
    basis = SUnitBasis.load(base)
    field = basis.field
    stark = cyclotomic_stark_unit(field, basis, precision=config.precision)

    t_units = {}
    for path in sorted(family["t_units"]):
        t_basis = SUnitBasis.load(path)
        t_units[path.name] = t_modified_unit(stark, t_basis,
                                             precision=config.precision)
    selmers = [(path.name, SelmerFixture.load(path))
               for path in sorted(family["selmer"])]

    def pick(unit: StarkUnit) -> Tuple[StarkUnit, bool]:
        if config.negative_control:
            return _corrupt(unit), True
        return unit, False

    checks = []
    if "regulator" in config.selection:
        target, controlled = pick(stark)
        report = verify_regulator_identity(
            target, precision=config.precision,
            tolerance_exponent=config.tolerance_exponent)
        report.update(target=base.name, negative_control=controlled)
        checks.append(report)
    if "dimensions" in config.selection:
        for degree in DIMENSION_DEGREES:
            report = isotypic_dimension_check(field, basis, degree)
            report.update(target=base.name, negative_control=False)
            checks.append(report)
    if "integrality" in config.selection:
        for name, unit in sorted(t_units.items()):
            target, controlled = pick(unit)
            report = verify_integrality(target)
            report.update(target=name, negative_control=controlled)
            checks.append(report)
    if "fitting" in config.selection or "annihilation" in config.selection:
        for name, selmer in selmers:
            if selmer.T:
                unit_name = name.replace("_selmer.json", "_sunits.json")
                if unit_name not in t_units:
                    raise InputError(
                        f"{name} needs the unit fixture {unit_name}, "
                        "which is missing")
                unit = t_units[unit_name]
            else:
                unit = stark
            target, controlled = pick(unit)
            if "fitting" in config.selection:
                report = verify_fitting_equality(target, selmer)
                report.update(target=name, negative_control=controlled)
                checks.append(report)
            if "annihilation" in config.selection:
                report = verify_annihilation(target, selmer)
                report.update(target=name, negative_control=controlled)
                checks.append(report)
    return checks


def _run_verify(config: RunConfig) -> Tuple[dict, int]:
    families = _discover(config.fixtures)
    reports = []
    input_error = False
    all_passed = True
    for prefix in sorted(families):
        family = families[prefix]
        base = family["base"]
        name = base.name if base is not None else prefix
        entry = {"fixture": name, "checks": []}
        reports.append(entry)
        try:
            entry["checks"] = _family_checks(family, config)
        except InputError as exc:
            entry["error"] = str(exc)
            input_error = True
            continue
        except _LOAD_ERRORS as exc:
            entry["error"] = f"{name}: {exc}"
            input_error = True
            continue
        for check in entry["checks"]:
            if check.get("passed") is False:
                all_passed = False
    doc = {
        "command": "verify",
        "selection": list(config.selection),
        "precision": config.precision,
        "tolerance_exponent": config.tolerance_exponent,
        "negative_control": config.negative_control,
        "passed": bool(all_passed and not input_error),
        "reports": reports,
    }
    code = 2 if input_error else (0 if all_passed else 1)
    return doc, code


def _cmd_verify(args) -> Tuple[dict, int]:
    if args.only.strip() == "all":
        selection = CHECKS
    else:
        selection = tuple(part.strip() for part in args.only.split(",")
                          if part.strip())
    tolerance = args.tolerance
    if tolerance is None:
        tolerance = min(30, args.precision // 2)
    config = RunConfig(
        fixtures=Path(args.fixtures),
        precision=args.precision,
        tolerance_exponent=tolerance,
        selection=selection,
        negative_control=args.negative_control,
        out=Path(args.out) if args.out else None,
    )
    return _run_verify(config)


# --------------------------------------------------------------------------
# fit


def _cmd_fit(args) -> Tuple[dict, int]:
    path = Path(args.matrix)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path}: {exc}")
    except ValueError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")
    if args.index < 0:
        raise InputError(f"index must be non-negative (got {args.index})")
    try:
        group = FiniteAbelianGroup(_parse_int_list(args.group))
    except ValueError as exc:
        raise InputError(str(exc))
    rows = data.get("rows") if isinstance(data, dict) else None
    if not isinstance(rows, list) or not rows:
        raise InputError('matrix file must contain a non-empty "rows" list')
    try:
        matrix = [
            [GroupRingElement.from_vector(group,
                                          [Fraction(str(x)) for x in entry])
             for entry in row]
            for row in rows
        ]
        presentation = Presentation(group, matrix)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc))
    ideal = classical_fitting_ideal(presentation, args.index)
    doc = {
        "command": "fit",
        "index": args.index,
        "denominator": ideal.denominator,
        "rows": [list(r) for r in ideal.rows],
    }
    return doc, 0


# --------------------------------------------------------------------------
# entry point


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclostark",
        description="Construct and verify distinguished units of real "
                    "abelian fields from checked-in fixtures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_element = sub.add_parser(
        "element", help="print the distinguished unit of one field")
    p_element.add_argument("--fixtures", default="fixtures",
                           help="directory containing fixture files")
    p_element.add_argument("--conductor", type=int, required=True)
    p_element.add_argument("--subgroup", required=True,
                           help="comma-separated generators of the fixing "
                                "subgroup mod the conductor")
    p_element.add_argument("--precision", type=int, default=60)
    p_element.add_argument("--out", default=None,
                           help="write the JSON report here instead of stdout")

    p_verify = sub.add_parser(
        "verify", help="run verification checks over a fixture directory")
    p_verify.add_argument("--fixtures", default="fixtures")
    p_verify.add_argument("--precision", type=int, default=60,
                          help="working decimal precision (minimum 20)")
    p_verify.add_argument("--tolerance", type=int, default=None,
                          help="decimal tolerance exponent (at most half "
                               "the precision; default min(30, precision/2))")
    p_verify.add_argument("--only", default="all",
                          help="comma-separated subset of: "
                               + ", ".join(CHECKS))
    p_verify.add_argument("--negative-control", action="store_true",
                          help="corrupt the element on purpose; the run "
                               "must then fail with exit status 1")
    p_verify.add_argument("--out", default=None)

    p_fit = sub.add_parser(
        "fit", help="Fitting ideal of a group-ring matrix in HNF")
    p_fit.add_argument("--matrix", required=True,
                       help='JSON file {"rows": [[[coeff, ...], ...], ...]}')
    p_fit.add_argument("--index", type=int, required=True)
    p_fit.add_argument("--group", required=True,
                       help="comma-separated cyclic invariants; empty for "
                            "the trivial group")
    p_fit.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        if args.command == "element":
            doc, code = _cmd_element(args)
        elif args.command == "verify":
            doc, code = _cmd_verify(args)
        else:
            doc, code = _cmd_fit(args)
    except InputError as exc:
        doc, code = {"error": str(exc)}, 2
    _emit(doc, args.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
