"""Computer-algebra backends for the generators.

Two engines implement the same small contract:

* :class:`BuiltinEngine` — the embedded exact engine built on
  :mod:`fixturegen.quadratic`.  Self-contained, used by default, and the
  one the round-trip tests run against.
* :class:`GpEngine` — drives a PARI/GP binary in a fresh subprocess per
  request (one session per field) and parses a fixed-format report.  It
  exists to cross-check the builtin engine's invariants on machines where
  gp is installed; any failure, from a missing binary to unparseable
  output, raises :class:`CasError` carrying the raw session log.

The contract is ``analyze(D, s_primes) -> QuadraticField`` for the
builtin engine and ``quadratic_report(D, s_primes) -> dict`` for the
external one, plus ``cross_check`` to compare the two.
"""

import shutil
import subprocess
from fractions import Fraction
from typing import Optional, Sequence

from .quadratic import QuadraticField, pnorm


class CasError(RuntimeError):
    """A computer-algebra backend failed; ``log`` holds the raw output."""

    def __init__(self, message: str, log: str = ""):
        self.log = log
        if log:
            message = f"{message}\n--- backend log ---\n{log.rstrip()}"
        super().__init__(message)


class BuiltinEngine:
    """Embedded exact engine; always available."""

    name = "builtin"

    def available(self) -> bool:
        return True

    def analyze(self, D: int, s_primes: Sequence[int]) -> QuadraticField:
        field = QuadraticField(D)
        for p in s_primes:
            if field.splitting_type(p) == "split":
                raise NotImplementedError(
                    f"prime {p} splits in Q(sqrt({D})); the embedded engine "
                    f"handles ramified and inert primes only — use the "
                    f"PARI/GP driver for split primes")
        return field


class GpEngine:
    """Scripted PARI/GP driver, one subprocess session per request."""

    name = "pari-gp"

    def __init__(self, executable: str = "gp", timeout: float = 120.0):
        self.executable = executable
        self.timeout = timeout

    def available(self) -> bool:
        return shutil.which(self.executable) is not None

    def run_script(self, script: str) -> str:
        """Run one gp session over the script; return its stdout."""
        if not self.available():
            raise CasError(f"gp executable {self.executable!r} not found")
        try:
            proc = subprocess.run(
                [self.executable, "-q"],
                input=script,
                capture_output=True,
                text=True,
                timeout=self.timeout,
            )
        except subprocess.TimeoutExpired as exc:
            raise CasError(
                f"gp session timed out after {self.timeout}s",
                log=(exc.stdout or "") + (exc.stderr or "")) from exc
        log = proc.stdout + proc.stderr
        if proc.returncode != 0:
            raise CasError(
                f"gp exited with status {proc.returncode}", log=log)
        return proc.stdout

    def quadratic_report(self, D: int, s_primes: Sequence[int]) -> dict:
        """Class number, fundamental unit, and prime splitting from gp."""
        prime_lines = "".join(
            f'dec = idealprimedec(K, {p});'
            f'print("PRIME {p} ", #dec, " ", dec[1].e);'
            for p in s_primes)
        script = (
            f"K = bnfinit(x^2 - {D}, 1);"
            'print("CLASSNO ", K.no);'
            "fu = lift(K.fu[1]);"
            'print("UNIT ", polcoeff(fu, 0), " ", polcoeff(fu, 1));'
            'print("UNITNORM ", norm(Mod(fu, x^2 - ' + str(D) + ')));'
            + prime_lines)
        out = self.run_script(script)
        report = {"prime_types": {}}
        try:
            for line in out.splitlines():
                parts = line.split()
                if not parts:
                    continue
                if parts[0] == "CLASSNO":
                    report["class_number"] = int(parts[1])
                elif parts[0] == "UNIT":
                    report["fundamental_unit"] = (Fraction(parts[1]),
                                                  Fraction(parts[2]))
                elif parts[0] == "UNITNORM":
                    report["unit_norm"] = int(parts[1])
                elif parts[0] == "PRIME":
                    p = int(parts[1])
                    count, e = int(parts[2]), int(parts[3])
                    if e == 2:
                        report["prime_types"][p] = "ramified"
                    elif count == 2:
                        report["prime_types"][p] = "split"
                    else:
                        report["prime_types"][p] = "inert"
            if ("class_number" not in report
                    or "fundamental_unit" not in report
                    or "unit_norm" not in report):
                raise KeyError("incomplete report")
        except (ValueError, IndexError, KeyError) as exc:
            raise CasError(
                f"could not parse gp output ({exc})", log=out) from exc
        return report


def cross_check(field: QuadraticField, report: dict,
                s_primes: Sequence[int]) -> None:
    """Compare builtin invariants against an external CAS report."""
    problems = []
    if report.get("class_number") != field.class_number:
        problems.append(
            f"class number: builtin {field.class_number}, "
            f"external {report.get('class_number')}")
    if report.get("unit_norm") != field.unit_norm:
        problems.append(
            f"unit norm: builtin {field.unit_norm}, "
            f"external {report.get('unit_norm')}")
    ext = report.get("fundamental_unit")
    if ext is not None:
        u = field.fundamental_unit
        candidates = {
            (u[0], u[1]), (-u[0], -u[1]), (u[0], -u[1]), (-u[0], u[1]),
        }
        # the external unit may also be the inverse of ours
        n = pnorm(u, field.D)
        inv = (u[0] / n, -u[1] / n)
        candidates.update({(inv[0], inv[1]), (-inv[0], -inv[1]),
                           (inv[0], -inv[1]), (-inv[0], inv[1])})
        if (Fraction(ext[0]), Fraction(ext[1])) not in candidates:
            problems.append(
                f"fundamental unit: builtin {u}, external {ext}")
    for p in s_primes:
        ext_type = report.get("prime_types", {}).get(p)
        if ext_type is not None and ext_type != field.splitting_type(p):
            problems.append(
                f"prime {p}: builtin {field.splitting_type(p)}, "
                f"external {ext_type}")
    if problems:
        raise CasError("cross-check mismatch: " + "; ".join(problems))


def default_engine() -> BuiltinEngine:
    return BuiltinEngine()
