"""Property suites over enumerated and sampled instances.

Each suite returns a ``SuiteReport``: one ``Check`` per property with the
number of cases examined, the failures (first few witnesses kept) and the
cases skipped for size. Reports contain no timing unless asked, so two runs
with the same parameters serialize to the same bytes.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterable

import numpy as np

from . import relcore as rc
from .census import Instance, catalog, labels, sample_proximity_posets
from .completion import frame_analysis, rounded_ideal_completion
from .entailment import (
    StrongContFinCover,
    all_finitary_covers,
    from_semilattice,
    round_trip_cover,
    round_trip_pq,
    round_trip_semilattice,
    strong_covers,
    validate_cover,
)
from .errors import LatkitError, SizeCapExceeded
from .ftop import cfc_from_cbc, check_bijections, cover_from_cfc
from .powerlocale import (
    LOWER,
    UPPER,
    check_distributive_law,
    coalgebra_structure,
    identity,
    is_double_coalgebra,
    power,
    sigma,
    tau,
    verify_comonad,
)
from .proximity import Kind, ProximityJSL, ProximityPoset, is_localized, strengthen, validate_morphism, validate_structure
from .relcore import Carrier, compose, members

MAX_WITNESSES = 3
SUITES = ("starlemmas", "comonad", "distributive", "localized", "roundtrips")


@dataclass
class Check:
    name: str
    cases: int = 0
    failures: int = 0
    skipped: int = 0
    witnesses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness=None) -> None:
        self.cases += 1
        if not ok:
            self.failures += 1
            if len(self.witnesses) < MAX_WITNESSES:
                self.witnesses.append(witness)

    def skip(self, note: str) -> None:
        self.skipped += 1
        if note not in self.notes:
            self.notes.append(note)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": "pass" if self.ok else "fail",
            "cases": self.cases,
            "failures": self.failures,
            "skipped": self.skipped,
            "witnesses": self.witnesses,
            "notes": self.notes,
        }


@dataclass
class SuiteReport:
    suite: str
    params: dict
    checks: list[Check] = field(default_factory=list)
    elapsed: float | None = None

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def skipped(self) -> int:
        return sum(c.skipped for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        c = Check(name)
        self.checks.append(c)
        return c

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "params": self.params,
            "verdict": "pass" if self.ok else "fail",
            "checks": [c.to_dict() for c in self.checks],
        }
        if timing and self.elapsed is not None:
            out["elapsed_seconds"] = round(self.elapsed, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2, ensure_ascii=False, sort_keys=False)

    def lines(self) -> list[str]:
        out = [f"suite {self.suite}: {'pass' if self.ok else 'FAIL'}"]
        for c in self.checks:
            tail = f", {c.skipped} skipped" if c.skipped else ""
            out.append(f"  {'ok  ' if c.ok else 'FAIL'} {c.name}: {c.cases} cases, {c.failures} failures{tail}")
            for w in c.witnesses:
                out.append(f"         witness: {w}")
        return out


def _timed(suite: Callable[..., SuiteReport]) -> Callable[..., SuiteReport]:
    def run(*args, **kwargs) -> SuiteReport:
        start = time.perf_counter()
        report = suite(*args, **kwargs)
        report.elapsed = time.perf_counter() - start
        return report

    run.__name__ = suite.__name__
    run.__doc__ = suite.__doc__
    return run


def _map(fn, items: list, workers: int) -> list:
    """Order-preserving map, optionally across processes."""
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _instances(kind: str, max_size: int, pool: list[Instance] | None, min_size: int = 1) -> list[Instance]:
    if pool is None:
        return catalog(kind, max_size, min_size, flags=False)
    want = Kind(kind)
    out = []
    for inst in pool:
        if not (min_size <= inst.size <= max_size):
            continue
        if inst.kind == want.value or validate_structure(want, inst.structure).ok:
            out.append(inst)
    return out


def _name(S) -> str:
    """A compact description of a proximity structure for witnesses."""
    P = S.poset
    lab = P.carrier.labels
    le = ";".join(f"{lab[a]}<{lab[b]}" for a, b in P.le.pairs() if a != b)
    prec = ";".join(f"{lab[a]}~{lab[b]}" for a, b in P.prec.pairs())
    return f"atoms={','.join(lab)} le=[{le}] prec=[{prec}]"


# ---------------------------------------------------------------- star lemmas

def _meets(x: int, y: int) -> bool:
    return (x & y) != 0


def _upper_le(X: Iterable[int], Y: Iterable[int]) -> bool:
    """X ⊆_U Y: every member of Y contains some member of X."""
    X = list(X)
    return all(any(x & ~y == 0 for x in X) for y in Y)


def _families(n: int) -> list[tuple[int, ...]]:
    return [members(F) for F in range(1 << (1 << n))]


def _singleton_family(A: int) -> int:
    """Sin(A) as a mask over Fin S (subset k is bit k)."""
    out = 0
    for a in members(A):
        out |= 1 << (1 << a)
    return out


def _swap_matrices(r: np.ndarray, stars_s: list[tuple[int, ...]], stars_t: list[tuple[int, ...]]) -> tuple[np.ndarray, np.ndarray]:
    n, m = r.shape
    bits_s, bits_t = rc.all_subset_bits(n), rc.all_subset_bits(m)
    fam_s, fam_t = rc.all_subset_bits(1 << n), rc.all_subset_bits(1 << m)
    r_lower = rc.lower_matrix(r, bits_s, bits_t)
    r_upper = rc.upper_matrix(r, bits_s, bits_t)
    star_s = rc.masks_to_bits([_fam_mask(s) for s in stars_s], 1 << n)
    star_t = rc.masks_to_bits([_fam_mask(s) for s in stars_t], 1 << m)
    lhs = rc.upper_matrix(r_lower, fam_s, fam_t)
    rhs = rc.lower_matrix(r_upper, star_s, star_t)
    return lhs, rhs


def _fam_mask(family: Iterable[int]) -> int:
    out = 0
    for A in family:
        out |= 1 << A
    return out


@_timed
def starlemmas(max_size: int = 3, swap_exhaustive: int = 2, swap_relations: int = 64, seed: int = 0) -> SuiteReport:
    """The star lemmas over every family on carriers up to ``max_size``; the
    swap lemma exhaustively up to ``swap_exhaustive`` and on random relations
    (all family pairs each) at sizes up to 3."""
    rep = SuiteReport("starlemmas", {"max_size": max_size, "swap_exhaustive": swap_exhaustive, "swap_relations": swap_relations, "seed": seed})
    between = rep.check("B ≬ A for B in U*, A in U")
    item1 = rep.check("star lemma (1)")
    item2 = rep.check("star lemma (2)")
    item3 = rep.check("star lemma (3)")
    single1 = rep.check("singleton star (1)")
    single2 = rep.check("singleton star (2)")
    order = rep.check("star is independent of member order")
    for n in range(1, max_size + 1):
        fams = _families(n)
        stars = [rc.star_masks(F) for F in fams]
        star_of = {F: s for F, s in zip(fams, stars)}
        for F, st in zip(fams, stars):
            between.record(all(_meets(B, A) for B in st for A in F), (n, F))
            rev = rc.star_masks(tuple(reversed(F)))
            order.record(rev == st, (n, F))
            dstar = rc.star_masks(st)
            for U in range(1 << n):
                if all(_meets(U, C) for C in F):
                    item1.record(any(B & ~U == 0 for B in st), (n, F, U))
                else:
                    item1.record(True)
                if all(_meets(U, C) for C in st):
                    item2.record(any(B & ~U == 0 for B in F), (n, F, U))
                else:
                    item2.record(True)
            ok3 = all(any(B & ~A == 0 for B in F) for A in dstar) and all(any(A & ~B == 0 for A in dstar) for B in F)
            item3.record(ok3, (n, F))
            # singleton star (2), one level up: families over Fin S
            sins = tuple(_singleton_family(A) for A in F)
            left = rc.star_masks(sins)
            middle = tuple(_singleton_family(B) for B in star_of[F])
            single2.record(_upper_le(left, middle) and _upper_le(middle, left), (n, F))
        for A in range(1 << n):
            pf = rc.star_masks((A,))
            sin = tuple(1 << a for a in members(A))
            single1.record(_upper_le(pf, sin) and _upper_le(sin, pf), (n, A))

    swap = rep.check("swap lemma (exhaustive)")
    for n in range(1, swap_exhaustive + 1):
        for m in range(1, swap_exhaustive + 1):
            stars_s = [rc.star_masks(F) for F in _families(n)]
            stars_t = [rc.star_masks(F) for F in _families(m)]
            for code in range(1 << (n * m)):
                r = np.array([(code >> k) & 1 for k in range(n * m)], dtype=bool).reshape(n, m)
                lhs, rhs = _swap_matrices(r, stars_s, stars_t)
                _record_matrix(swap, lhs, rhs, (n, m, code))

    sampled = rep.check("swap lemma (sampled, sizes up to 3)")
    rng = random.Random(seed)
    star_cache: dict[int, list] = {}
    sizes = [(a, b) for a in range(1, 4) for b in range(1, 4) if max(a, b) == 3]
    for _ in range(swap_relations):
        n, m = sizes[rng.randrange(len(sizes))]
        code = rng.getrandbits(n * m)
        for k in (n, m):
            if k not in star_cache:
                star_cache[k] = [rc.star_masks(F) for F in _families(k)]
        r = np.array([(code >> k) & 1 for k in range(n * m)], dtype=bool).reshape(n, m)
        lhs, rhs = _swap_matrices(r, star_cache[n], star_cache[m])
        _record_matrix(sampled, lhs, rhs, (n, m, code))
    return rep


def _record_matrix(check: Check, lhs: np.ndarray, rhs: np.ndarray, tag) -> None:
    """One case per matrix entry; the first differing entry is the witness."""
    total = lhs.size
    bad = np.argwhere(lhs != rhs)
    check.cases += total
    if len(bad):
        check.failures += len(bad)
        if len(check.witnesses) < MAX_WITNESSES:
            i, j = (int(x) for x in bad[0])
            check.witnesses.append([*tag, members(i), members(j)])


# ---------------------------------------------------------------- comonads

def _comonad_case(S) -> list[tuple[str, bool, list, list]]:
    out = []
    for which in (LOWER, UPPER):
        d = verify_comonad(S, which)
        for axiom in d.checked:
            fails = [list(w.example) for w in d.witnesses if w.axiom == axiom]
            skipped = [s for s in d.skipped if s.startswith(axiom)]
            out.append((f"{which}: {axiom}", not fails, fails[:1], skipped))
        for s in d.skipped:
            if not any(s.startswith(a) for a in d.checked):
                out.append((f"{which}: skipped", True, [], [s]))
    return out


@_timed
def comonad(max_size: int = 2, samples: int = 100, sample_size: int = 3, seed: int = 0,
            workers: int = 1, pool: list[Instance] | None = None) -> SuiteReport:
    """Counit, coassociativity and (co)KZ laws of both powerlocales."""
    rep = SuiteReport("comonad", {"max_size": max_size, "samples": samples, "sample_size": sample_size, "seed": seed})
    structures = [(f"enumerated #{i.index}", i.structure) for i in _instances("proximity-poset", max_size, pool)]
    structures += [(f"sample {k}", S) for k, S in enumerate(sample_proximity_posets(sample_size, samples, seed))]
    results = _map(_comonad_case, [S for _, S in structures], workers)
    for (label, S), res in zip(structures, results):
        for name, ok, fails, skipped in res:
            c = rep.check(name)
            if skipped:
                for s in skipped:
                    c.skip(s)
                continue
            c.record(ok, {"instance": _name(S), "witness": fails[0] if fails else None})
    return rep


# ---------------------------------------------------------------- distributive law

def _swap_sigma(S) -> tuple[np.ndarray, np.ndarray]:
    """σ and τ by the swap-lemma route, on class representatives.

    𝒰 σ 𝒱 iff 𝒰* (≺_U)_L 𝒱**, and 𝒱 τ 𝒰 iff 𝒱* (≺_L)_U 𝒰**.
    """
    S = S.poset
    K1, T1 = power(S, LOWER), power(S, UPPER)
    TK, KT = power(K1.result, UPPER), power(T1.result, LOWER)
    p = S.prec.matrix

    def prec_lower(A: int, B: int) -> bool:
        return all(any(p[a, b] for b in members(B)) for a in members(A))

    def prec_upper(A: int, B: int) -> bool:
        return all(any(p[a, b] for a in members(A)) for b in members(B))

    def fam_lower(rel, X, Y) -> bool:
        return all(any(rel(x, y) for y in Y) for x in X)

    def fam_upper(rel, X, Y) -> bool:
        return all(any(rel(x, y) for x in X) for y in Y)

    tk_fams = [[K1.reps[u] for u in members(U)] for U in TK.reps]
    kt_fams = [[T1.reps[v] for v in members(V)] for V in KT.reps]
    s = np.zeros((TK.size, KT.size), dtype=bool)
    for i, F in enumerate(tk_fams):
        Fs = rc.star_masks(F)
        for j, G in enumerate(kt_fams):
            Gss = rc.star_masks(rc.star_masks(G))
            s[i, j] = fam_lower(prec_upper, Fs, Gss)
    t = np.zeros((KT.size, TK.size), dtype=bool)
    for i, G in enumerate(kt_fams):
        Gs = rc.star_masks(G)
        for j, F in enumerate(tk_fams):
            Fss = rc.star_masks(rc.star_masks(F))
            t[i, j] = fam_upper(prec_lower, Gs, Fss)
    return s, t


def _distributive_case(S) -> list[tuple[str, bool, object]]:
    out = []
    s, t = sigma(S), tau(S)
    K1, T1 = power(S, LOWER), power(S, UPPER)
    TK, KT = power(K1.result, UPPER).result, power(T1.result, LOWER).result
    for name, got, want in (("τ∘σ = id", compose(t, s), identity(TK)), ("σ∘τ = id", compose(s, t), identity(KT))):
        out.append((name, got == want, got.first_difference(want)))
    for name, rel, a, b in (("σ approximable", s, TK, KT), ("τ approximable", t, KT, TK)):
        d = validate_morphism("approximable", rel, a, b)
        out.append((name, d.ok, d.summary() if not d.ok else None))
    s2, t2 = _swap_sigma(S)
    out.append(("σ by the swap route", bool(np.array_equal(s2, s.matrix)), None))
    out.append(("τ by the swap route", bool(np.array_equal(t2, t.matrix)), None))
    return out


@_timed
def distributive(max_size: int = 2, diagram_sizes: dict | None = None, pool: list[Instance] | None = None,
                 workers: int = 1) -> SuiteReport:
    """σ/τ inverse to each other for |S| ≤ max_size, plus the four diagrams
    (all four at size 1, the first two at size 2 by default)."""
    diagram_sizes = diagram_sizes or {1: (1, 2, 3, 4), 2: (1, 2)}
    rep = SuiteReport("distributive", {"max_size": max_size, "diagrams": {str(k): list(v) for k, v in sorted(diagram_sizes.items())}})
    insts = _instances("proximity-poset", max_size, pool)
    results = _map(_distributive_case, [i.structure for i in insts], workers)
    for inst, res in zip(insts, results):
        for name, ok, w in res:
            rep.check(name).record(ok, {"instance": _name(inst.structure), "witness": w})
    for inst in insts:
        wanted = diagram_sizes.get(inst.size, ())
        for k in wanted:
            d = check_distributive_law(inst.structure, diagrams=(k,))
            name = d.checked[0] if d.checked else f"diagram {k}"
            c = rep.check(name)
            if d.skipped:
                c.skip(d.skipped[0])
            else:
                c.record(d.ok, {"instance": _name(inst.structure), "witness": [list(w.example) for w in d.witnesses]})
    return rep


# ---------------------------------------------------------------- localization

def _localized_case(J) -> dict:
    verdicts = {
        "basic": is_localized(J, "basic").ok,
        "general": is_localized(J, "general").ok,
        "finite": is_localized(J, "finite").ok,
    }
    frame = frame_analysis(rounded_ideal_completion(J), J)
    verdicts["frame"] = frame.is_frame
    verdicts["double coalgebra"] = is_double_coalgebra(J, cross_check=False).ok
    return verdicts


def _upper_case(S) -> tuple[bool, bool]:
    has = coalgebra_structure(S, UPPER, search=False) is not None
    meets = frame_analysis(rounded_ideal_completion(S)).has_finite_meets
    return has, meets


def nondistributive_controls() -> list[tuple[str, ProximityJSL]]:
    """M3 and N5 with ≺ = ≤: strong, but their ideal lattices are not frames.

    Every lattice with at most four elements is distributive, so the
    enumerated range has no negative instances of its own.
    """
    m3 = [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]
    n5 = [("0", "a"), ("a", "b"), ("0", "c"), ("b", "1"), ("c", "1")]
    return [(name, ProximityJSL.from_base(ProximityPoset.build("0abc1", pairs))) for name, pairs in (("M3", m3), ("N5", n5))]


@_timed
def localized(max_size: int = 4, coalgebra_size: int = 3, pool: list[Instance] | None = None,
              workers: int = 1) -> SuiteReport:
    """The five localization verdicts on strong structures, and the
    upper-coalgebra criterion on proximity posets."""
    rep = SuiteReport("localized", {"max_size": max_size, "coalgebra_size": coalgebra_size})
    agree = rep.check("localized ⟺ general ⟺ finite ⟺ frame ⟺ double coalgebra")
    counts = {"localized": 0, "not localized": 0}
    insts = _instances("strong-proximity-jsl", max_size, pool)
    results = _map(_localized_case, [i.structure for i in insts], workers)
    for inst, verdicts in zip(insts, results):
        same = len(set(verdicts.values())) == 1
        agree.record(same, {"instance": _name(inst.structure), "verdicts": verdicts})
        counts["localized" if verdicts["basic"] else "not localized"] += 1
    agree.notes.append(f"{counts['localized']} localized, {counts['not localized']} not localized")
    controls = rep.check("non-distributive controls: all five verdicts are 'not localized'")
    for name, J in nondistributive_controls():
        verdicts = _localized_case(J)
        controls.record(not any(verdicts.values()), {"instance": name, "verdicts": verdicts})
    crit = rep.check("upper coalgebra exists ⟺ RIdl has finite meets")
    tally = {"coalgebra": 0, "no coalgebra": 0}
    posets = _instances("proximity-poset", coalgebra_size, pool)
    for inst, (has, meets) in zip(posets, _map(_upper_case, [i.structure for i in posets], workers)):
        crit.record(has == meets, {"instance": _name(inst.structure), "coalgebra": has, "meets": meets})
        tally["coalgebra" if has else "no coalgebra"] += 1
    crit.notes.append(f"{tally['coalgebra']} with coalgebra, {tally['no coalgebra']} without")
    return rep


# ---------------------------------------------------------------- round trips

def _relabel_cover(c: StrongContFinCover, p: tuple[int, ...]) -> bytes:
    """Key of ``c`` after moving element i to position p[i]."""
    n = c.n
    sub = [rc.mask_of(p[a] for a in members(A)) for A in range(1 << n)]
    inv_sub = np.argsort(sub)
    inv = np.argsort(p)
    cov = c.cov.matrix[np.ix_(inv, inv_sub)]
    interp = c.interp.matrix[np.ix_(inv, inv)]
    return np.packbits(cov).tobytes() + np.packbits(interp).tobytes()


def strong_cover_classes(n: int) -> list[StrongContFinCover]:
    """One strong continuous finitary cover per isomorphism class on n atoms."""
    seen = {}
    for c in strong_covers(Carrier(labels(n))):
        key = max(_relabel_cover(c, p) for p in permutations(range(n)))
        seen.setdefault(key, c)
    return [seen[k] for k in sorted(seen, reverse=True)]


def _cover_name(c) -> str:
    from .fileformat import dumps

    return dumps(c).replace("\n", " | ").strip(" |")


def _strengthen_case(J) -> list[tuple[str, bool, object]]:
    out = []
    try:
        res = strengthen(J)
    except LatkitError as exc:
        return [("strengthen succeeds", False, str(exc))]
    out.append(("strengthen succeeds", True, None))
    out.append(("strengthened structure is strong", validate_structure(Kind.STRONG, res.structure).ok, None))
    for name, got, want in (
        ("s∘r = ≺∨", compose(res.s, res.r), res.structure.prec),
        ("r∘s = ≺", compose(res.r, res.s), J.prec),
    ):
        out.append((name, got == want, got.first_difference(want)))
    return out


@_timed
def roundtrips(max_size: int = 3, cover_size: int = 2, pool: list[Instance] | None = None,
               workers: int = 1) -> SuiteReport:
    """Strengthening, the semilattice/cover round trips, P/Q, the formal
    topology round trip, and the map bijections."""
    rep = SuiteReport("roundtrips", {"max_size": max_size, "cover_size": cover_size})
    jsls = _instances("proximity-jsl", max_size, pool)
    for inst, res in zip(jsls, _map(_strengthen_case, [i.structure for i in jsls], workers)):
        for name, ok, w in res:
            rep.check(f"strengthen: {name}").record(ok, {"instance": _name(inst.structure), "witness": w})
    for inst in jsls:
        d = round_trip_semilattice(inst.structure)
        rep.check("J ≅ F(G(J))").record(d.ok, {"instance": _name(inst.structure), "summary": d.summary()})
    for n in range(1, max_size + 1):
        for c in all_finitary_covers(Carrier(labels(n))):
            d = round_trip_cover(c)
            rep.check("(S, ◁) ≅ G(F(S, ◁)), finitary covers").record(d.ok, {"cover": _cover_name(c), "summary": d.summary()})
    classes = [c for n in range(1, cover_size + 1) for c in strong_cover_classes(n)]
    for c in classes:
        d = round_trip_cover(c)
        rep.check("(S, ◁) ≅ G(F(S, ◁)), strong covers").record(d.ok, {"cover": _cover_name(c), "summary": d.summary()})
        d = round_trip_pq(c)
        rep.check("P/Q isomorphism").record(d.ok, {"cover": _cover_name(c), "summary": d.summary()})
    for inst in jsls:
        if inst.structure.prec == inst.structure.le:
            continue
        c = from_semilattice(inst.structure)
        d = round_trip_pq(c)
        rep.check("P/Q isomorphism").record(d.ok, {"cover": _cover_name(c), "summary": d.summary()})
    ftop = rep.check("cfc_from_cbc ∘ cover_from_cfc ≅ id (localized)")
    localized_classes = [c for c in classes if validate_cover("localized-strong-cfc", c).ok]
    for c in localized_classes:
        try:
            iso = cfc_from_cbc(cover_from_cfc(c))
            ok = iso.diagnosis.ok and validate_cover("localized-strong-cfc", iso.cfc).ok
            ftop.record(ok, {"cover": _cover_name(c), "summary": iso.diagnosis.summary()})
        except SizeCapExceeded as exc:
            ftop.skip(str(exc))
    bij = rep.check("map bijections († *, breve ‡)")
    ftm = rep.check("FTM1/FTM2 ⟺ (f),(g) (localized)")
    totals = {"join-approximable": 0, "single": 0, "basic cover": 0}
    for c in classes:
        for d in classes:
            r = check_bijections(c, d)
            bij.record(r.ok, {"src": _cover_name(c), "dst": _cover_name(d), "failures": [list(map(str, f)) for f in r.failures[:2]]})
            totals["join-approximable"] += r.join_maps
            totals["single"] += r.single_maps
            totals["basic cover"] += r.cover_maps
            if c in localized_classes and d in localized_classes:
                bad = [f for f in r.failures if f[0].startswith("FTM")]
                ftm.cases += r.ftm_agreements + len(bad)
                ftm.failures += len(bad)
                if bad and len(ftm.witnesses) < MAX_WITNESSES:
                    ftm.witnesses.append({"src": _cover_name(c), "dst": _cover_name(d), "relation": bad[0][1]})
    bij.notes.append(", ".join(f"{v} {k} maps" for k, v in totals.items()))
    return rep


# ---------------------------------------------------------------- everything

def run_suite(name: str, max_size: int | None = None, seed: int = 0, workers: int = 1,
              pool: list[Instance] | None = None) -> list[SuiteReport]:
    """Run one suite (or ``all``) with its default sizes, or ``max_size``."""
    if name == "all":
        out = []
        for n in SUITES:
            out.extend(run_suite(n, max_size, seed, workers, pool))
        return out
    kw = {} if max_size is None else {"max_size": max_size}
    if name == "starlemmas":
        return [starlemmas(seed=seed, **kw)]
    if name == "comonad":
        return [comonad(seed=seed, workers=workers, pool=pool, **kw)]
    if name == "distributive":
        return [distributive(workers=workers, pool=pool, **kw)]
    if name == "localized":
        return [localized(workers=workers, pool=pool, **kw)]
    if name == "roundtrips":
        return [roundtrips(workers=workers, pool=pool, **kw)]
    raise ValueError(f"unknown suite {name!r}")
