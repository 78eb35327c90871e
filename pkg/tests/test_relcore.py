import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from latkit import relcore as rc
from latkit.errors import CarrierMismatch, NotPreorder, SizeCapExceeded

C2 = rc.Carrier.of("o", "i")
LE2 = rc.Relation.from_pairs(C2, C2, [("o", "o"), ("o", "i"), ("i", "i")])
ABC = rc.Carrier.of("a", "b", "c")


def fam(carrier, *sets):
    return rc.FinFamily.of(carrier.subset(s) for s in sets)


def random_relation(rng, src, dst, density=0.4):
    pairs = [(i, j) for i in range(len(src)) for j in range(len(dst)) if rng.random() < density]
    return rc.Relation.from_pairs(src, dst, pairs)


relations = st.builds(
    lambda n, m, seed: random_relation(random.Random(seed), rc.Carrier(tuple("pqrs"[:n])), rc.Carrier(tuple("wxyz"[:m]))),
    st.integers(1, 4),
    st.integers(1, 4),
    st.integers(0, 10**6),
)


# ---------------------------------------------------------------- star


def test_star_goldens():
    assert rc.star(fam(ABC, "a", "b")) == fam(ABC, "ab")
    assert rc.star(fam(ABC, "ab", "c")) == fam(ABC, "abc", "ac", "bc")
    assert rc.star(rc.star(fam(ABC, "ab", "c"))) == fam(ABC, "abc", "ab", "ac", "bc", "c")


def test_star_edge_families():
    assert rc.star(rc.FinFamily()).masks == (0,)
    assert rc.star(rc.FinFamily.of([0, 1])).masks == ()


@given(st.lists(st.frozensets(st.integers(0, 3), max_size=4), max_size=4))
def test_star_matches_inductive_definition(members):
    got = {oracle.from_mask(m) for m in rc.star_masks([oracle.to_mask(s) for s in members])}
    assert got == oracle.star(members)
    assert got == oracle.star(list(reversed(members)))


def test_star_size_cap():
    big = [0b1111] * 4
    with pytest.raises(SizeCapExceeded):
        rc.star_masks(big, cap=8)


# ---------------------------------------------------------------- composition


def test_chain2_examples():
    assert rc.compose(LE2, LE2) == LE2
    assert rc.converse(rc.Relation.from_pairs(C2, C2, [("o", "i")])).labelled_pairs() == [("i", "o")]
    assert rc.image(LE2, C2.subset("o")) == C2.subset("oi")
    assert rc.preimage(LE2, C2.subset("i")) == C2.subset("oi")
    assert rc.image(LE2, rc.FinSubset()) == rc.FinSubset()


def test_compose_carrier_mismatch():
    r = rc.Relation.identity(C2)
    s = rc.Relation.identity(ABC)
    with pytest.raises(CarrierMismatch):
        rc.compose(s, r)


@given(relations, st.integers(0, 10**6))
def test_compose_matches_definition(r, seed):
    rng = random.Random(seed)
    s = random_relation(rng, r.target, rc.Carrier(("u", "v", "w")))
    assert oracle.pairs_of(rc.compose(s, r)) == oracle.compose(oracle.pairs_of(s), oracle.pairs_of(r))


@given(relations, st.integers(0, 10**6))
def test_composition_laws(r, seed):
    rng = random.Random(seed)
    s = random_relation(rng, r.target, r.source)
    t = random_relation(rng, r.source, r.target)
    assert rc.compose(t, rc.compose(s, r)) == rc.compose(rc.compose(t, s), r)
    assert rc.compose(rc.Relation.identity(r.target), r) == r
    assert rc.compose(r, rc.Relation.identity(r.source)) == r
    assert rc.converse(rc.compose(s, r)) == rc.compose(rc.converse(r), rc.converse(s))
    assert rc.converse(rc.converse(r)) == r
    assert rc.compose(rc.Relation.empty(r.target, r.source), r) == rc.Relation.empty(r.source, r.source)


# ---------------------------------------------------------------- extensions


def test_extension_examples():
    L = rc.lower_extension(LE2)
    U = rc.upper_extension(LE2)
    o, i, oi = (C2.subset(s).mask for s in ("o", "i", "oi"))
    assert L.matrix[oi, i] and not L.matrix[i, o]
    assert all(L.matrix[0, k] for k in range(4))
    assert U.matrix[o, oi] and U.matrix[o, i] and not U.matrix[i, o]
    assert all(U.matrix[k, 0] for k in range(4))


@settings(max_examples=60)
@given(relations)
def test_extensions_match_definition(r):
    L = rc.lower_extension(r)
    U = rc.upper_extension(r)
    rp = oracle.pairs_of(r)
    for A in range(1 << len(r.source)):
        for B in range(1 << len(r.target)):
            a, b = oracle.from_mask(A), oracle.from_mask(B)
            assert L.matrix[A, B] == oracle.lower_ext(rp, a, b)
            assert U.matrix[A, B] == oracle.upper_ext(rp, a, b)
    # A r_L B iff B (r⁻)_U A
    assert rc.converse(L) == rc.upper_extension(rc.converse(r))


def test_fin_carrier_sizes():
    assert len(rc.fin_carrier(rc.Carrier(()))) == 1
    assert len(rc.fin_carrier(C2)) == 4
    assert len(rc.fin_carrier(ABC)) == 8
    with rc.size_cap(4):
        with pytest.raises(SizeCapExceeded) as info:
            rc.fin_carrier(ABC)
    assert info.value.required == 8


# ---------------------------------------------------------------- reflection


def test_reflection_of_lower_extension_on_chain2():
    order, q = rc.poset_reflection(rc.lower_extension(LE2))
    assert q.classes == ((0,), (1,), (2, 3))
    assert rc.is_antisymmetric(order.matrix)
    assert order.matrix.sum() == 6  # a 3-element chain


def test_reflection_edge_cases():
    order, q = rc.poset_reflection(LE2)
    assert len(q.classes) == 2 and order.matrix.tolist() == LE2.matrix.tolist()
    xy = rc.Carrier.of("x", "y")
    _, q = rc.poset_reflection(rc.Relation.full(xy, xy))
    assert q.classes == ((0, 1),)
    with pytest.raises(NotPreorder):
        rc.poset_reflection(rc.Relation.from_pairs(xy, xy, [("x", "y")]))


@settings(max_examples=40)
@given(st.integers(1, 5), st.integers(0, 10**6))
def test_reflection_of_random_preorders(n, seed):
    c = rc.Carrier(tuple("pqrst"[:n]))
    r = random_relation(random.Random(seed), c, c, density=0.3)
    pre = rc.Relation(c, c, rc.reflexive_transitive_closure(r.matrix))
    order, q = rc.poset_reflection(pre)
    assert rc.is_reflexive(order.matrix) and rc.is_transitive(order.matrix)
    assert rc.is_antisymmetric(order.matrix)
    for a in range(n):
        for b in range(n):
            assert pre.matrix[a, b] == order.matrix[q.class_of[a], q.class_of[b]]
