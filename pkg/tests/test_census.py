from itertools import combinations

import pytest

import oracle
from latkit import census
from latkit.proximity import Kind, validate_structure

COUNTS = {
    Kind.POSET: (1, 2, 5, 16),
    Kind.JSL: (1, 1, 1, 2),
    Kind.PROXIMITY_POSET: (1, 5, 29, 234),
    Kind.PROXIMITY_JSL: (1, 3, 8, 35),
    Kind.STRONG: (1, 2, 5, 20),
}


def rels(S):
    return (oracle.pairs_of(S.le), oracle.pairs_of(S.prec))


def brute_classes(n, want_jsl=False, want_strong=False):
    """Isomorphism classes of (≤, ≺) on n points, from the definitions."""
    cells = [(a, b) for a in range(n) for b in range(n)]
    found = []
    for le in oracle.labelled_posets(n):
        if want_jsl and not oracle.is_jsl(n, le):
            continue
        for code in range(1 << len(cells)):
            prec = {cells[k] for k in range(len(cells)) if code >> k & 1}
            if not oracle.is_proximity_poset(n, le, prec):
                continue
            if want_strong and not oracle.is_strong(n, le, prec):
                continue
            found.append((le, prec))
    return oracle.iso_classes(n, found)


@pytest.mark.parametrize("kind", list(COUNTS))
def test_counts(kind):
    got = tuple(len(census.enumerate_structures(kind, n)) for n in range(1, 5))
    assert got == COUNTS[kind]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_match_brute_force(n):
    assert len(brute_classes(n)) == COUNTS[Kind.PROXIMITY_POSET][n - 1]
    assert len(brute_classes(n, want_jsl=True)) == COUNTS[Kind.PROXIMITY_JSL][n - 1]
    assert len(brute_classes(n, want_jsl=True, want_strong=True)) == COUNTS[Kind.STRONG][n - 1]


@pytest.mark.parametrize("kind", [Kind.POSET, Kind.PROXIMITY_POSET, Kind.STRONG])
def test_emitted_instances_are_pairwise_non_isomorphic(kind):
    for n in (1, 2, 3):
        insts = census.enumerate_structures(kind, n, flags=False)
        for a, b in combinations(insts, 2):
            assert not oracle.isomorphic(n, rels(a.structure), rels(b.structure))
            assert not census.isomorphic(a.structure, b.structure)
        for inst in insts:
            assert validate_structure(kind, inst.structure).ok


def test_proximity_relations_brute_agrees():
    for n in (1, 2, 3):
        for le in census.poset_classes(n):
            fast = sorted(m.tobytes() for m in census.proximity_relations(le))
            slow = sorted(m.tobytes() for m in census.proximity_relations_brute(le))
            assert fast == slow


def test_flags_and_catalog_round_trip(tmp_path):
    insts = census.catalog(Kind.STRONG, 3)
    assert all(i.flags["strong"] and i.flags["localized"] for i in insts)
    path = tmp_path / "strong.ndjson"
    census.write_catalog(insts, path)
    back = census.load_catalog(path)
    assert [census.instance_record(i) for i in back] == [census.instance_record(i) for i in insts]
    assert path.read_text() == path.read_text().strip() + "\n"


def test_samples_are_deterministic():
    a = census.sample_proximity_posets(3, 20, seed=5)
    b = census.sample_proximity_posets(3, 20, seed=5)
    assert [rels(x) for x in a] == [rels(y) for y in b]
    assert all(validate_structure(Kind.PROXIMITY_POSET, s).ok for s in a)
