import numpy as np
import pytest

import oracle
from conftest import chain2, gap2
from latkit import completion as cp
from latkit import relcore as rc
from latkit.census import enumerate_structures
from latkit.errors import NotApproximable, NotIdempotent
from latkit.proximity import Kind, ProximityPoset, validate_morphism
from latkit.suites import nondistributive_controls


def masks(points):
    return sorted(oracle.to_mask(p) for p in points)


def chain(n):
    labels = [f"c{i}" for i in range(n)]
    return ProximityPoset.build(labels, list(zip(labels, labels[1:])))


def test_ideal_completion_examples():
    assert cp.ideal_completion(ProximityPoset.build("x", [])).size == 1
    L = cp.ideal_completion(chain2().base)
    assert [L.render(i) for i in range(L.size)] == ["{o}", "{o,i}"]
    anti = cp.ideal_completion(ProximityPoset.build("xy", []))
    assert anti.size == 2 and anti.top is None


def test_rounded_ideal_examples():
    G = cp.rounded_ideal_completion(gap2())
    assert [G.render(i) for i in range(G.size)] == ["{o}"]
    J = chain2()
    L = cp.rounded_ideal_completion(J)
    assert L.size == 2
    o, i = L.index[0b01], L.index[0b11]
    assert L.joins[o, i] == i


@pytest.mark.parametrize("size", [1, 2, 3])
def test_points_match_definition(size):
    for inst in enumerate_structures(Kind.PROXIMITY_POSET, size, flags=False):
        S = inst.structure
        le, prec = oracle.pairs_of(S.le), oracle.pairs_of(S.prec)
        want = masks(oracle.rounded_ideals(S.n, le, prec))
        assert sorted(cp.rounded_ideals_by_image(S)) == want
        assert sorted(cp.rounded_ideals_by_predicate(S)) == want
        L = cp.rounded_ideal_completion(S)
        assert sorted(L.points) == want
        # a finite lattice: way-below is the order
        assert np.array_equal(L.waybelow.matrix, L.order.matrix)
        brute = cp.waybelow_first_principles(L)
        assert brute is not None and brute == L.waybelow
        ideals = [I for I in oracle.subsets(range(S.n)) if oracle.is_directed(I, le) and all(a in I for b in I for a in oracle.down(le, b))]
        assert sorted(cp.ideals(S)) == masks(ideals)


@pytest.mark.parametrize("size", [1, 2, 3, 4])
def test_frame_analysis_matches_oracle(size):
    for inst in enumerate_structures(Kind.STRONG, size, flags=False):
        J = inst.structure
        L = cp.rounded_ideal_completion(J)
        rep = cp.frame_analysis(L, J)
        want = oracle.lattice_report(oracle.from_mask(p) for p in L.points)
        assert rep.has_finite_meets == want["meets"]
        assert rep.is_distributive == want["distributive"]
        assert rep.is_frame == (want["meets"] and want["joins"] and want["distributive"])
        assert rep.meet_formula_agrees in (True, None)


def test_nondistributive_lattices_are_not_frames():
    for _, J in nondistributive_controls():
        rep = cp.frame_analysis(cp.rounded_ideal_completion(J), J)
        assert rep.has_finite_meets and not rep.is_distributive and not rep.is_frame
        assert rep.witness


def test_frame_analysis_single_point():
    L = cp.rounded_ideal_completion(ProximityPoset.build("x", []))
    assert cp.frame_analysis(L).is_frame


# ---------------------------------------------------------------- maps


def approximable_self_maps(S):
    n = S.n
    cells = [(a, b) for a in range(n) for b in range(n)]
    for code in range(1 << len(cells)):
        r = rc.Relation.from_pairs(S.carrier, S.carrier, [cells[k] for k in range(len(cells)) if code >> k & 1])
        if validate_morphism("approximable", r, S, S).ok:
            yield r


def test_interpretation_of_identity():
    J = chain2()
    f = cp.interpret_relation(J.prec, J.base, J.base)
    assert f.table == cp.identity_map(f.source).table


def test_interpretation_respects_composition():
    S = chain2().base
    L = cp.rounded_ideal_completion(S)
    maps = list(approximable_self_maps(S))
    assert len(maps) > 1
    for r in maps:
        fr = cp.interpret_relation(r, S, S, L, L)
        for s in maps:
            fs = cp.interpret_relation(s, S, S, L, L)
            both = cp.interpret_relation(rc.compose(s, r), S, S, L, L)
            # (s∘r)⁻I = r⁻(s⁻I)
            assert both.table == fs.then(fr).table
            sr = oracle.compose(oracle.pairs_of(s), oracle.pairs_of(r))
            want = tuple(L.index[oracle.to_mask({a for (a, b) in sr if b in oracle.from_mask(I)})] for I in L.points)
            assert both.table == want


def test_join_approximable_interpretation_preserves_joins():
    J = chain2()
    L = cp.rounded_ideal_completion(J)
    for r in approximable_self_maps(J.base):
        if validate_morphism("join-approximable", r, J, J).ok:
            ok, _ = cp.interpret_relation(r, J, J, L, L).preserves_joins()
            assert ok


def test_interpretation_rejects_non_approximable():
    G = gap2()
    with pytest.raises(NotApproximable):
        cp.interpret_relation(rc.Relation.full(G.carrier, G.carrier), G, G)


# ---------------------------------------------------------------- splitting


def test_split_identity_and_constant():
    L = cp.ideal_completion(chain(2))
    D = cp.split_idempotent(cp.identity_map(L))
    assert D.points == L.points
    const = cp.LatticeMap(L, L, (L.bottom,) * L.size)
    assert cp.split_idempotent(const).size == 1


def test_split_collapsing_middle_of_three_chain():
    L = cp.ideal_completion(chain(3))
    bottom, middle, top = (L.index[m] for m in (0b001, 0b011, 0b111))
    table = [0] * L.size
    table[bottom] = table[middle] = bottom
    table[top] = top
    D = cp.split_idempotent(cp.LatticeMap(L, L, tuple(table)))
    assert D.size == 2
    assert cp.waybelow_first_principles(D) == D.waybelow


def test_split_rejects_non_idempotent():
    L = cp.ideal_completion(chain(3))
    order = sorted(range(L.size), key=lambda i: bin(L.points[i]).count("1"))
    shift = [0] * L.size
    shift[order[0]], shift[order[1]], shift[order[2]] = order[1], order[2], order[2]
    with pytest.raises(NotIdempotent):
        cp.split_idempotent(cp.LatticeMap(L, L, tuple(shift)))


def test_proximity_is_split_of_its_ideal_completion():
    for size in (1, 2, 3):
        for inst in enumerate_structures(Kind.PROXIMITY_POSET, size, flags=False):
            S = inst.structure
            prec = oracle.pairs_of(S.prec)
            Idl = cp.ideal_completion(S.poset)
            # I ↦ ↓≺I
            table = tuple(
                Idl.index[oracle.to_mask({a for (a, b) in prec if b in oracle.from_mask(I)})]
                for I in Idl.points
            )
            D = cp.split_idempotent(cp.LatticeMap(Idl, Idl, table))
            assert sorted(D.points) == sorted(cp.rounded_ideal_completion(S).points)
