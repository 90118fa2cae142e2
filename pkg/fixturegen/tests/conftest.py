import json
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[2]
FIXTURES = REPO / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def shipped():
    """Parsed content of every checked-in field fixture, by file name."""
    return {
        p.name: json.loads(p.read_text(encoding="utf-8"))
        for p in FIXTURES.glob("field_*.json")
    }
