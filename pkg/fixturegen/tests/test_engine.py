"""Engine seam: the embedded engine's refusals, the external driver's
report parsing, raw-log surfacing on failure, and the cross-check."""

import shutil
import stat
import textwrap

import pytest

from fixturegen.engine import (
    BuiltinEngine,
    CasError,
    GpEngine,
    cross_check,
    default_engine,
)
from fixturegen.quadratic import QuadraticField

GOOD_REPORT = """\
CLASSNO 2
UNIT 3 1
UNITNORM -1
PRIME 2 1 2
PRIME 5 1 2
"""


def fake_gp(tmp_path, body: str, name="gp"):
    """An executable that swallows stdin and plays back a canned session."""
    path = tmp_path / name
    path.write_text("#!/bin/sh\ncat > /dev/null\n" + body)
    path.chmod(path.stat().st_mode | stat.S_IXUSR)
    return str(path)


# ---------------------------------------------------------------------------
# builtin engine


def test_builtin_engine_is_always_available():
    engine = default_engine()
    assert isinstance(engine, BuiltinEngine)
    assert engine.available()
    field = engine.analyze(10, [2, 5])
    assert field.class_number == 2


def test_builtin_engine_refuses_split_primes_in_s():
    with pytest.raises(NotImplementedError, match="PARI/GP"):
        BuiltinEngine().analyze(10, [3])


# ---------------------------------------------------------------------------
# external driver


def test_missing_binary_raises_cas_error():
    engine = GpEngine(executable="definitely-not-a-real-gp-binary")
    assert not engine.available()
    with pytest.raises(CasError, match="not found"):
        engine.run_script("print(1)")


def test_successful_session_parses_and_cross_checks(tmp_path):
    exe = fake_gp(tmp_path, textwrap.dedent("""\
        printf '%s\\n' 'CLASSNO 2' 'UNIT 3 1' 'UNITNORM -1' \
            'PRIME 2 1 2' 'PRIME 5 1 2'
    """))
    engine = GpEngine(executable=exe)
    report = engine.quadratic_report(10, [2, 5])
    assert report["class_number"] == 2
    assert report["unit_norm"] == -1
    assert report["prime_types"] == {2: "ramified", 5: "ramified"}
    cross_check(QuadraticField(10), report, [2, 5])


def test_failed_session_surfaces_the_raw_log(tmp_path):
    exe = fake_gp(tmp_path, "echo 'something exploded' >&2\nexit 3\n")
    engine = GpEngine(executable=exe)
    with pytest.raises(CasError) as err:
        engine.run_script("whatever")
    assert "status 3" in str(err.value)
    assert "backend log" in str(err.value)
    assert "something exploded" in str(err.value)
    assert "something exploded" in err.value.log


def test_unparseable_output_surfaces_the_raw_log(tmp_path):
    exe = fake_gp(tmp_path, "echo 'UNIT banana split'\n")
    engine = GpEngine(executable=exe)
    with pytest.raises(CasError) as err:
        engine.quadratic_report(10, [2, 5])
    assert "could not parse" in str(err.value)
    assert "banana" in err.value.log


def test_incomplete_report_is_rejected(tmp_path):
    exe = fake_gp(tmp_path, "echo 'CLASSNO 2'\n")
    engine = GpEngine(executable=exe)
    with pytest.raises(CasError, match="could not parse"):
        engine.quadratic_report(10, [2, 5])


def test_cross_check_flags_mismatches(tmp_path):
    exe = fake_gp(tmp_path, textwrap.dedent("""\
        printf '%s\\n' 'CLASSNO 7' 'UNIT 3 1' 'UNITNORM 1' \
            'PRIME 2 2 1' 'PRIME 5 1 2'
    """))
    engine = GpEngine(executable=exe)
    report = engine.quadratic_report(10, [2, 5])
    with pytest.raises(CasError) as err:
        cross_check(QuadraticField(10), report, [2, 5])
    message = str(err.value)
    assert "class number" in message
    assert "unit norm" in message
    assert "prime 2" in message


def test_cross_check_accepts_inverse_and_conjugate_units():
    field = QuadraticField(10)
    base = {"class_number": 2, "unit_norm": -1,
            "prime_types": {2: "ramified", 5: "ramified"}}
    for unit in [(3, 1), (-3, -1), (3, -1), (-3, 1)]:
        cross_check(field, {**base, "fundamental_unit": unit}, [2, 5])
    with pytest.raises(CasError, match="fundamental unit"):
        cross_check(field, {**base, "fundamental_unit": (7, 2)}, [2, 5])


@pytest.mark.skipif(shutil.which("gp") is None,
                    reason="no PARI/GP binary on this machine")
def test_real_gp_session_agrees_with_the_builtin_engine():
    engine = GpEngine()
    report = engine.quadratic_report(10, [2, 5])
    cross_check(QuadraticField(10), report, [2, 5])
