"""The star lemmas checked straight from the oracle, and against the suite."""

from itertools import product

import pytest

import oracle
from latkit import relcore as rc
from latkit.suites import starlemmas


def families(n):
    every = oracle.subsets(range(n))
    return [[every[i] for i in range(len(every)) if code >> i & 1] for code in range(1 << len(every))]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_star_lemma_items(n):
    points = oracle.subsets(range(n))
    for U in families(n):
        s = oracle.star(U)
        ss = oracle.star(sorted(s, key=sorted))
        assert {oracle.from_mask(m) for m in rc.star_masks([oracle.to_mask(x) for x in U])} == s
        for B in s:
            assert all(B & A for A in U)
        for W in points:
            if all(W & C for C in U):
                assert any(B <= W for B in s)
            if all(W & C for C in s):
                assert any(B <= W for B in U)
        assert all(any(B <= A for B in U) for A in ss)
        assert all(any(A <= B for A in ss) for B in U)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_singleton_star(n):
    for A in oracle.subsets(range(n)):
        sing = [frozenset({a}) for a in A]
        assert oracle.refined_by(oracle.star([A]), sing)
        assert oracle.refined_by(sing, oracle.star([A]))
    for U in families(n):
        left = oracle.star([frozenset(frozenset({a}) for a in A) for A in U])
        right = {frozenset(frozenset({b}) for b in B) for B in oracle.star(U)}
        assert oracle.refined_by(left, right) and oracle.refined_by(right, left)


@pytest.mark.parametrize("n,m", [(1, 1), (1, 2), (2, 1), (2, 2)])
def test_swap_lemma_exhaustive(n, m):
    cells = list(product(range(n), range(m)))
    fs, ft = families(n), families(m)
    stars_s = [oracle.star(U) for U in fs]
    stars_t = [oracle.star(V) for V in ft]
    for code in range(1 << len(cells)):
        r = {cells[k] for k in range(len(cells)) if code >> k & 1}
        for U, Us in zip(fs, stars_s):
            for V, Vs in zip(ft, stars_t):
                assert oracle.family_lower_of_upper(r, U, V) == oracle.family_upper_of_lower(r, Us, Vs)


def test_suite_agrees_at_small_sizes():
    report = starlemmas(max_size=2, swap_exhaustive=1, swap_relations=4, seed=3)
    assert report.ok
    assert all(c.cases > 0 for c in report.checks)
