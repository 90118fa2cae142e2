"""The curated fixture manifest and the batch emitters.

``data/manifest.json`` lists every checked-in field fixture: the request
(field, place sets, congruence primes) plus the presentation pins that
make regeneration reproduce the historical files exactly — which recipe
built the basis, which S-part generators were chosen among the
unimodularly equivalent ones, and whether an empty congruence set was
written out explicitly.

Batch emission is stateless: every entry gets a fresh engine, and the
external cross-check driver (when enabled) runs one CAS session per
request.
"""

import json
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Optional

from .classgen import gen_classgroups
from .engine import BuiltinEngine, GpEngine
from .request import FieldRequest
from .unitgen import gen_units

KINDS = ("units", "classgroups")


def load_manifest(path=None) -> dict:
    """The curated manifest (or one loaded from an explicit path)."""
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    else:
        source = resources.files("fixturegen").joinpath("data/manifest.json")
        manifest = json.loads(source.read_text(encoding="utf-8"))
    if "fixtures" not in manifest:
        raise ValueError("manifest has no 'fixtures' list")
    for entry in manifest["fixtures"]:
        for key in ("file", "kind", "request"):
            if key not in entry:
                raise ValueError(f"manifest entry is missing {key!r}: {entry}")
        if entry["kind"] not in KINDS:
            raise ValueError(f"unknown fixture kind {entry['kind']!r}")
    return manifest


def request_of(entry: dict) -> FieldRequest:
    raw = entry["request"]
    return FieldRequest(
        conductor=raw["conductor"],
        subgroup_gens=raw["subgroup_gens"],
        s_places=raw["S"],
        t_primes=raw.get("T", ()),
        sprime_places=raw.get("Sprime"),
        output_name=entry["file"],
    )


def emit_entry(entry: dict, outdir, engine=None,
               cross_check_engine=None) -> Path:
    """Generate one manifest entry and write it under ``outdir``."""
    req = request_of(entry)
    presentation = entry.get("presentation")
    if entry["kind"] == "units":
        fixture = gen_units(req, presentation, engine=engine,
                            cross_check_engine=cross_check_engine)
    else:
        fixture = gen_classgroups(req, presentation, engine=engine,
                                  cross_check_engine=cross_check_engine)
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    target = outdir / (req.output_name or req.default_name(
        "sunits" if entry["kind"] == "units" else "selmer"))
    with open(target, "w", encoding="utf-8") as fh:
        json.dump(fixture, fh, indent=2)
        fh.write("\n")
    return target


def emit_all(outdir, manifest: Optional[dict] = None,
             only: Optional[Iterable[str]] = None,
             engine_factory: Callable = BuiltinEngine,
             cross_check_factory: Optional[Callable] = None) -> list:
    """Generate every manifest entry (or the named subset).

    A fresh engine is built per entry; ``cross_check_factory`` (e.g.
    :class:`~fixturegen.engine.GpEngine`) additionally verifies each
    quadratic request against an external CAS, one session per request.
    """
    manifest = manifest or load_manifest()
    wanted = set(only) if only is not None else None
    written = []
    for entry in manifest["fixtures"]:
        if wanted is not None and entry["file"] not in wanted:
            continue
        checker = cross_check_factory() if cross_check_factory else None
        written.append(emit_entry(entry, outdir, engine=engine_factory(),
                                  cross_check_engine=checker))
    if wanted is not None:
        missing = wanted - {p.name for p in written}
        if missing:
            raise ValueError(f"manifest has no entries named {sorted(missing)}")
    return written


def gp_cross_check_factory(executable: str = "gp") -> Callable:
    return lambda: GpEngine(executable)
