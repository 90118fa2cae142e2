"""Command-line batch driver for the fixture generator.

``fixturegen show`` lists the curated manifest; ``fixturegen emit``
regenerates fixtures into a directory, optionally cross-checking every
quadratic request against a PARI/GP binary (one session per request).
Backend failures print the raw session log and exit nonzero.
"""

import argparse
import sys

from .engine import CasError
from .manifest import emit_all, gp_cross_check_factory, load_manifest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fixturegen",
        description="regenerate the checked-in field fixtures from scratch",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    show = sub.add_parser("show", help="list the curated manifest entries")
    show.add_argument("--manifest", default=None,
                      help="path to an alternative manifest file")

    emit = sub.add_parser("emit", help="generate fixtures into a directory")
    emit.add_argument("--outdir", required=True,
                      help="directory the fixture files are written to")
    emit.add_argument("--manifest", default=None,
                      help="path to an alternative manifest file")
    emit.add_argument("--only", action="append", default=None,
                      metavar="FILE",
                      help="restrict to the named fixture file (repeatable)")
    emit.add_argument("--cross-check", action="store_true",
                      help="verify each quadratic request against PARI/GP")
    emit.add_argument("--gp", default="gp",
                      help="PARI/GP executable used for cross-checks")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        manifest = load_manifest(args.manifest)
        if args.command == "show":
            for entry in manifest["fixtures"]:
                raw = entry["request"]
                t = raw.get("T", [])
                extras = f" T={t}" if t else ""
                if raw.get("Sprime"):
                    extras += f" S'={raw['Sprime']}"
                print(f"{entry['file']}: {entry['kind']}, "
                      f"m={raw['conductor']}, H={raw['subgroup_gens']}, "
                      f"S={raw['S']}{extras}")
            return 0
        written = emit_all(
            args.outdir,
            manifest=manifest,
            only=args.only,
            cross_check_factory=(gp_cross_check_factory(args.gp)
                                 if args.cross_check else None),
        )
        for path in written:
            print(f"wrote {path}")
        return 0
    except (CasError, NotImplementedError, ValueError,
            ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
