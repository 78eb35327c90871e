import pytest

import oracle
from conftest import FIXTURES, chain2, diamond
from latkit import powerlocale as pl
from latkit import relcore as rc
from latkit.census import enumerate_structures, sample_proximity_posets
from latkit.completion import frame_analysis, rounded_ideal_completion
from latkit.errors import SizeCapExceeded
from latkit.fileformat import load
from latkit.proximity import Kind, is_localized, validate_morphism, validate_structure
from latkit.suites import nondistributive_controls

EXT = {"lower": oracle.lower_ext, "upper": oracle.upper_ext}


def small_posets(max_size=3):
    return [inst.structure for n in range(1, max_size + 1) for inst in enumerate_structures(Kind.PROXIMITY_POSET, n, flags=False)]


@pytest.mark.parametrize("kind", ["lower", "upper"])
def test_power_matches_reflection_of_extension(kind):
    for S in small_posets():
        le, prec = oracle.pairs_of(S.le), oracle.pairs_of(S.prec)
        ext = EXT[kind]
        fin = oracle.subsets(range(S.n))
        classes = {frozenset(B for B in fin if ext(le, A, B) and ext(le, B, A)) for A in fin}
        P = pl.power(S, kind)
        assert P.size == len(classes)
        reps = [oracle.from_mask(m) for m in P.reps]
        for i, A in enumerate(reps):
            for j, B in enumerate(reps):
                assert P.result.le.matrix[i, j] == ext(le, A, B)
                assert P.result.prec.matrix[i, j] == ext(prec, A, B)
        assert validate_structure(Kind.PROXIMITY_POSET, P.result).ok


def test_raw_reflection_route_agrees():
    for S in small_posets(2):
        for kind in ("lower", "upper"):
            order, q = pl.reflect_power(S, kind)
            assert len(q.classes) == pl.power(S, kind).size


def test_lower_power_of_one_point_fixture():
    doc = load(FIXTURES / "one.lk")
    P = pl.lower_powerlocale(doc.structure)
    assert P.size == 2
    assert validate_structure(Kind.LOCALIZED, P.jsl).ok


def test_lower_power_is_strong_jsl():
    for S in small_posets():
        assert validate_structure(Kind.STRONG, pl.lower_powerlocale(S).jsl).ok


@pytest.mark.parametrize("which", ["lower", "upper"])
def test_comonad_laws_small(which):
    for S in small_posets(2) + sample_proximity_posets(3, 10, seed=1):
        d = pl.verify_comonad(S, which)
        assert d.ok, d.summary()
        assert not d.skipped


def test_comonad_skips_above_cap():
    S = sample_proximity_posets(3, 1, seed=0)[0]
    with rc.size_cap(4):
        d = pl.verify_comonad(S, "lower")
    assert d.skipped


# ---------------------------------------------------------------- σ and τ


def sigma_oracle(S):
    prec = oracle.pairs_of(S.prec)
    K1, T1 = pl.power(S, "lower"), pl.power(S, "upper")
    TK, KT = pl.power(K1.result, "upper"), pl.power(T1.result, "lower")
    fam_tk = [[oracle.from_mask(K1.reps[i]) for i in oracle.from_mask(m)] for m in TK.reps]
    fam_kt = [[oracle.from_mask(T1.reps[i]) for i in oracle.from_mask(m)] for m in KT.reps]
    sig = {
        (i, j)
        for i, U in enumerate(fam_tk)
        for j, V in enumerate(fam_kt)
        if oracle.family_lower_of_upper(prec, U, oracle.star(V))
    }
    tau = {
        (j, i)
        for i, U in enumerate(fam_tk)
        for j, V in enumerate(fam_kt)
        if oracle.family_upper_of_lower(prec, V, oracle.star(U))
    }
    return sig, tau


def test_sigma_tau_match_definition_and_are_inverse():
    for S in small_posets(2):
        sig, tau = pl.distributive_law_maps(S)
        want_sig, want_tau = sigma_oracle(S)
        assert oracle.pairs_of(sig) == want_sig
        assert oracle.pairs_of(tau) == want_tau
        assert oracle.pairs_of(pl.sigma(S, use_closures=True)) == want_sig
        assert oracle.pairs_of(pl.tau(S, use_closures=True)) == want_tau


def test_distributive_law_diagrams():
    for S in small_posets(1):
        assert pl.check_distributive_law(S).ok
    for S in small_posets(2):
        assert pl.check_distributive_law(S, diagrams=(1, 2)).ok


# ---------------------------------------------------------------- coalgebras


def test_upper_coalgebra_criterion():
    for S in small_posets(3):
        L = rounded_ideal_completion(S)
        meets = oracle.lattice_report(oracle.from_mask(p) for p in L.points)["meets"]
        assert (pl.coalgebra_structure(S, "upper") is not None) == meets
        assert frame_analysis(L, S).has_finite_meets == meets


def test_lower_coalgebra_exists_on_strong():
    for size in (1, 2, 3):
        for inst in enumerate_structures(Kind.STRONG, size, flags=False):
            w = pl.coalgebra_structure(inst.structure, "lower")
            assert w is not None and w.structure == pl.unit_lower(inst.structure)


def test_double_coalgebra_iff_localized():
    structures = [chain2(), diamond()] + [J for _, J in nondistributive_controls()]
    structures += [inst.structure for inst in enumerate_structures(Kind.STRONG, 3, flags=False)]
    for J in structures:
        assert pl.is_double_coalgebra(J, cross_check=False).ok == is_localized(J).ok
    for _, J in nondistributive_controls():
        assert not pl.is_double_coalgebra(J, cross_check=False).ok


def test_double_structure_laws_on_localized():
    for J in (chain2(), diamond()):
        assert pl.verify_double_structure(J).ok


def test_double_powerlocale_cap():
    with rc.size_cap(4):
        with pytest.raises(SizeCapExceeded):
            pl.double_object(diamond().base)


def test_homomorphism_classification_on_chain2():
    J = chain2()
    maps = [r for r in pl.all_relations(J.carrier, J.carrier) if validate_morphism("approximable", r, J.base, J.base).ok]
    seen = set()
    for r in maps:
        rep = pl.classify_coalgebra_hom(r, J, J, "double")
        assert rep.is_hom == (rep.lower_hom and rep.upper_hom)
        seen.add(rep.is_hom)
        if r == J.prec:
            assert rep.is_hom
    assert seen == {True, False}


def test_extension_to_lower_powerlocale():
    J = chain2()
    ext = pl.extend_to_lower(J.prec, J, J.base)
    assert rc.compose(pl.counit(J.base, "lower"), ext.relation) == J.prec
    assert ext.unique is True
