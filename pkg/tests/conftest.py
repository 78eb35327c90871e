from pathlib import Path

import pytest

from latkit.proximity import ProximityJSL, ProximityPoset

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

CHAIN2_LE = [("o", "i")]
GAP2_PREC = [("o", "o"), ("o", "i")]


def chain2() -> ProximityJSL:
    return ProximityJSL.from_base(ProximityPoset.build("oi", CHAIN2_LE))


def gap2() -> ProximityPoset:
    return ProximityPoset.build("oi", CHAIN2_LE, GAP2_PREC)


def diamond() -> ProximityJSL:
    return ProximityJSL.from_base(ProximityPoset.build(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")]))


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
