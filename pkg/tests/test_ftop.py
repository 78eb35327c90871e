import random

import pytest

import oracle
from conftest import FIXTURES, chain2
from latkit import ftop
from latkit import relcore as rc
from latkit.entailment import from_semilattice, validate_cover
from latkit.errors import SortMismatch
from latkit.fileformat import load
from latkit.suites import strong_cover_classes


def carrier(n):
    return rc.Carrier(tuple(f"x{i}" for i in range(n)))


def localized_classes(max_n=2):
    return [c for n in range(1, max_n + 1) for c in strong_cover_classes(n) if validate_cover("localized-strong-cfc", c).ok]


@pytest.mark.parametrize("seed", range(25))
def test_axioms_saturate_to_least_cover(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    axioms = [(rng.randrange(n), rng.randrange(1 << n)) for _ in range(rng.randint(0, 5))]
    bc = ftop.BasicCover.from_axioms(carrier(n), axioms)
    assert ftop.validate_basic_cover(bc).ok
    ax = [(a, oracle.from_mask(A)) for a, A in axioms]
    for U in range(1 << n):
        assert oracle.from_mask(bc.saturate(U)) == oracle.basic_saturation(n, ax, oracle.from_mask(U))
    # saturated subsets are closed under intersection
    sat = set(bc.saturated)
    assert all(U & V in sat for U in sat for V in sat)


def test_non_closure_predicate_is_rejected():
    c = carrier(2)
    # reflexivity plus x0 ◁ {x1} is already a cover
    bc = ftop.BasicCover.from_predicate(c, lambda a, U: bool(U >> a & 1) or (a == 0 and U == 0b10))
    assert ftop.validate_basic_cover(bc).ok
    bad = ftop.BasicCover.from_predicate(c, lambda a, U: a == 0)
    d = ftop.validate_basic_cover(bad)
    assert not d.ok and "reflexivity" in d.failed_axioms()


@pytest.mark.parametrize("seed", range(10))
def test_largest_continuity_witness(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    axioms = [(rng.randrange(n), rng.randrange(1 << n)) for _ in range(rng.randint(0, 3))]
    bc = ftop.BasicCover.from_axioms(carrier(n), axioms)
    every = ftop.all_continuity_witnesses(bc)
    best = ftop.continuity_witnesses(bc)
    if not every:
        assert best is None
        return
    assert any(w == best for w in every)
    assert all(w <= best for w in every)


def test_chain2_cover_is_a_formal_topology():
    c = from_semilattice(chain2(), strong=True)
    cbc = ftop.cover_from_cfc(c)
    assert ftop.validate_continuity(cbc.cover, cbc.wb).ok
    ft, d = ftop.formal_topology_of(c)
    assert d.ok
    assert ftop.compare_with_completion(c)


def test_cbc_fixture_round_trip():
    doc = load(FIXTURES / "chain2-cbc.lk", validate=True)
    iso = ftop.cfc_from_cbc(doc.structure)
    assert iso.diagnosis.ok
    assert validate_cover("strong-cfc", iso.cfc).ok


def test_round_trip_on_localized_classes():
    classes = localized_classes()
    assert len(classes) == 27
    for c in classes:
        assert ftop.compare_with_completion(c)
        iso = ftop.cfc_from_cbc(ftop.cover_from_cfc(c))
        assert iso.diagnosis.ok, iso.diagnosis.summary()
        assert validate_cover("localized-strong-cfc", iso.cfc).ok


def test_formal_topology_iff_localized():
    for n in (1, 2):
        for c in strong_cover_classes(n):
            _, d = ftop.formal_topology_of(c)
            assert d.ok == validate_cover("localized-strong-cfc", c).ok


def test_bijections_between_small_covers():
    classes = localized_classes(1) + localized_classes(2)[:4]
    for src in classes:
        for dst in classes:
            rep = ftop.check_bijections(src, dst)
            assert rep.ok, rep.failures
            assert rep.join_maps == rep.single_maps


def test_conversion_sort_checks():
    c = from_semilattice(chain2(), strong=True)
    with pytest.raises(SortMismatch):
        ftop.convert_map("dagger", c.interp, c, c)
    with pytest.raises(SortMismatch):
        ftop.convert_map("star", rc.Relation.empty(c.carrier, c.carrier), c, c)
    r = ftop.convert_map("dagger", c.ll, c, c)
    assert ftop.convert_map("star", r, c, c) == c.ll
    assert ftop.convert_map("ddagger", ftop.convert_map("breve", r, c, c), c, c) == r
