"""Offline fixture generator for the exact-arithmetic verifier package.

This package derives, from scratch, the JSON fixtures that the verifier
consumes: S-unit bases with exactly certified Galois action tables, their
congruence sublattices for auxiliary primes, and the finite class modules
with Frobenius action.  Outputs are written once and checked into the
repository; the verifier's test suite never imports this package.

The generator talks to the verifier only through its public surface: the
JSON fixture schemas, the top-level package API used for re-verification,
and the command-line interface.  All number theory needed to *produce*
fixtures (fundamental units, class groups, residue-field discrete
logarithms) lives here, in an embedded exact engine, with an optional
PARI/GP driver for independent cross-checks.
"""

from .engine import BuiltinEngine, CasError, GpEngine, default_engine
from .classgen import gen_classgroups
from .manifest import emit_all, emit_entry, load_manifest
from .request import FieldRequest
from .unitgen import gen_units

__version__ = "0.1.0"

__all__ = [
    "BuiltinEngine",
    "CasError",
    "FieldRequest",
    "GpEngine",
    "default_engine",
    "emit_all",
    "emit_entry",
    "gen_classgroups",
    "gen_units",
    "load_manifest",
    "__version__",
]
