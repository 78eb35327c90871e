"""Lower, upper and double powerlocales of finite proximity posets.

The lower powerlocale of ``S`` lives on finite subsets of ``S`` modulo
``A ≡ B iff ↓A = ↓B``, so its classes are the lower sets of ``S``; the
upper one uses ``↑A`` instead. Both are enumerated directly, which keeps
three nested levels small. Each class is stored with its least member
(the antichain of maximal, resp. minimal, elements) as representative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import relcore as rc
from .completion import interpret_relation
from .diagnosis import Checker, Diagnosis
from .errors import InternalError, NoCoalgebra, NotApproximable, NotStrong, SizeCapExceeded
from .proximity import (
    Kind,
    ProximityJSL,
    ProximityPoset,
    Structure,
    is_localized,
    validate_morphism,
    validate_structure,
)
from .relcore import Carrier, Relation, bool_product, compose, compose_all, contained_in, members

LOWER, UPPER = "lower", "upper"


@dataclass(frozen=True, eq=False)
class PowerObject:
    base: ProximityPoset
    kind: str
    closures: tuple[int, ...]
    reps: tuple[int, ...]
    result: ProximityPoset

    @property
    def carrier(self) -> Carrier:
        return self.result.carrier

    @property
    def size(self) -> int:
        return len(self.reps)

    @cached_property
    def rep_bits(self) -> np.ndarray:
        return rc.masks_to_bits(self.reps, self.base.n)

    @cached_property
    def closure_bits(self) -> np.ndarray:
        return rc.masks_to_bits(self.closures, self.base.n)

    @cached_property
    def _by_closure(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.closures)}

    def closure(self, mask: int) -> int:
        table = self.base.down_le if self.kind == LOWER else self.base.up_le
        out = 0
        for x in members(mask):
            out |= table[x]
        return out

    def classify(self, mask: int) -> int:
        """Index of the class containing the finite subset ``mask``."""
        return self._by_closure[self.closure(mask)]

    def union(self, class_mask: int) -> int:
        """⋃ of the representatives of a set of classes, as a base mask."""
        out = 0
        for i in members(class_mask):
            out |= self.reps[i]
        return out

    @cached_property
    def jsl(self) -> ProximityJSL:
        """0 = class(∅), ∨ = class(∪); only meaningful for the lower kind."""
        if self.kind != LOWER:
            raise NotStrong("the upper powerlocale is not given a ∨-structure")
        k = self.size
        join = np.array([[self.classify(self.reps[i] | self.reps[j]) for j in range(k)] for i in range(k)])
        return ProximityJSL(self.result, self.classify(0), join)

    def embed(self, cap: int | None = None) -> rc.QuotientMap:
        """The quotient map from Fin(base) onto the classes."""
        fin = rc.fin_carrier(self.base.carrier, cap)
        class_of = tuple(self.classify(k) for k in range(len(fin)))
        return rc.QuotientMap(fin, class_of, self.reps)


def _build_power(S: ProximityPoset, kind: str, cap: int | None) -> PowerObject:
    le = S.le.matrix
    full = (1 << S.n) - 1
    if kind == LOWER:
        sets = rc.lower_sets(le, cap)
        pairs = sorted((rc.maximal_elements(m, le), m) for m in sets)
    elif kind == UPPER:
        sets = [full & ~m for m in rc.lower_sets(le, cap)]
        pairs = sorted((rc.minimal_elements(m, le), m) for m in sets)
    else:
        raise ValueError(f"unknown powerlocale kind {kind!r}")
    reps = tuple(p[0] for p in pairs)
    closures = tuple(p[1] for p in pairs)
    carrier = Carrier(tuple(S.carrier.render(m) for m in reps), origin=kind)
    rb = rc.masks_to_bits(reps, S.n)
    cb = rc.masks_to_bits(closures, S.n)
    incl = contained_in(cb, cb)
    order = incl if kind == LOWER else incl.T
    p = S.prec.matrix
    ext = rc.lower_matrix if kind == LOWER else rc.upper_matrix
    prec = ext(p, rb, rb)
    _check_well_defined(kind, ext, p, rb, cb, rb, cb, "≺ on classes")
    result = ProximityPoset(carrier, Relation(carrier, carrier, order), Relation(carrier, carrier, prec))
    return PowerObject(S, kind, closures, reps, result)


def _check_well_defined(kind, ext, rel, src_min, src_max, dst_min, dst_max, what) -> np.ndarray:
    """Every member of a class lies between its least and greatest member,
    and the extensions are monotone in each argument, so agreement of the
    two extreme evaluations proves independence of representatives."""
    if kind == LOWER:
        lo, hi = ext(rel, src_max, dst_min), ext(rel, src_min, dst_max)
    else:
        lo, hi = ext(rel, src_min, dst_max), ext(rel, src_max, dst_min)
    if not np.array_equal(lo, hi):
        i, j = np.argwhere(lo != hi)[0]
        raise InternalError(f"{what} depends on representatives", (int(i), int(j)))
    return lo


_POWERS: dict[tuple, PowerObject] = {}


def power(S: Structure, kind: str, cap: int | None = None) -> PowerObject:
    """P_L S or P_U S, memoized per structure. A cached object larger than
    the current cap still raises."""
    S = S.poset
    key = (S, kind)
    hit = _POWERS.get(key)
    if hit is None:
        hit = _build_power(S, kind, cap)
        if len(_POWERS) > 2048:
            _POWERS.clear()
        _POWERS[key] = hit
    rc.check_cap(hit.size, cap, f"{kind} powerlocale")
    return hit


def lower_powerlocale(S: Structure, cap: int | None = None) -> PowerObject:
    return power(S, LOWER, cap)


def upper_powerlocale(S: Structure, cap: int | None = None) -> PowerObject:
    return power(S, UPPER, cap)


def reflect_power(S: Structure, kind: str, cap: int | None = None) -> tuple[Relation, rc.QuotientMap]:
    """The same quotient computed the long way: Fin(S) and a poset reflection."""
    S = S.poset
    ext = rc.lower_extension if kind == LOWER else rc.upper_extension
    return rc.poset_reflection(ext(S.le, cap))


# ---------------------------------------------------------------- structure maps

def counit(S: Structure, kind: str, cap: int | None = None) -> Relation:
    """ε: A ε a iff A ≺_L {a} (lower) or A ≺_U {a} (upper)."""
    P = power(S, kind, cap)
    p = P.base.prec.matrix
    if kind == LOWER:
        m = contained_in(P.rep_bits, p.T.copy())  # rep ⊆ ↓≺a
    else:
        m = bool_product(P.rep_bits, p)  # some x in rep has x ≺ a
    return Relation(P.carrier, P.base.carrier, m)


def unit_lower(J: ProximityJSL, cap: int | None = None) -> Relation:
    """η: a η A iff a ≺ ⋁A."""
    if not isinstance(J, ProximityJSL):
        J = ProximityJSL.from_base(J)
    if Kind.STRONG.value not in J._badges and not validate_structure(Kind.STRONG, J).ok:
        raise NotStrong("η needs a strong proximity ∨-semilattice")
    P = power(J, LOWER, cap)
    p = J.prec.matrix
    tops = [J.join_of(r) for r in P.reps]
    return Relation(J.carrier, P.carrier, p[:, tops])


def comult(S: Structure, kind: str, cap: int | None = None) -> Relation:
    """ν: A ν 𝒰 iff A ≺_{L/U} ⋃𝒰."""
    P = power(S, kind, cap)
    PP = power(P.result, kind, cap)
    unions = rc.masks_to_bits([P.union(r) for r in PP.reps], P.base.n)
    ext = rc.lower_matrix if kind == LOWER else rc.upper_matrix
    return Relation(P.carrier, PP.carrier, ext(P.base.prec.matrix, P.rep_bits, unions))


def structural_map(S: Structure, which: str, cap: int | None = None) -> Relation:
    table = {
        "εL": lambda: counit(S, LOWER, cap),
        "εU": lambda: counit(S, UPPER, cap),
        "νL": lambda: comult(S, LOWER, cap),
        "νU": lambda: comult(S, UPPER, cap),
        "ηL": lambda: unit_lower(S, cap),
    }
    aliases = {"epsL": "εL", "epsU": "εU", "nuL": "νL", "nuU": "νU", "etaL": "ηL"}
    return table[aliases.get(which, which)]()


def lift_morphism(
    r: Relation, kind: str, src: Structure, dst: Structure, cap: int | None = None, check: bool = True
) -> Relation:
    """P_L r = r_L and P_U r = r_U, on classes."""
    if check:
        d = validate_morphism("approximable", r, src, dst)
        if not d.ok:
            raise NotApproximable(d.summary())
    A, B = power(src, kind, cap), power(dst, kind, cap)
    ext = rc.lower_matrix if kind == LOWER else rc.upper_matrix
    m = _check_well_defined(kind, ext, r.matrix, A.rep_bits, A.closure_bits, B.rep_bits, B.closure_bits, "lift")
    return Relation(A.carrier, B.carrier, m)


def identity(S: Structure) -> Relation:
    return S.poset.prec


# ---------------------------------------------------------------- comonad laws

def _law(ck: Checker, name: str, compute: Callable[[], tuple[Relation, Relation, str]]) -> None:
    """Record one law; ``compute`` returns (left, right, relation) where the
    relation is ``=`` or ``<=``."""
    try:
        left, right, rel = compute()
    except SizeCapExceeded as e:
        ck.skipped.append(f"{name}: skipped (size: {e.required} > {e.cap})")
        return
    ck.axiom(name)
    if rel == "=":
        if left != right:
            a, b, side = left.first_difference(right)
            ck.fail(name, a, b, "left" if side else "right")
    else:
        if not left <= right:
            bad = np.argwhere(left.matrix & ~right.matrix)[0]
            ck.fail(name, left.source.labels[bad[0]], left.target.labels[bad[1]])


def _functor(kind: str) -> Callable:
    def apply(r: Relation, src: Structure, dst: Structure, cap=None) -> Relation:
        return lift_morphism(r, kind, src, dst, cap, check=False)

    return apply


def verify_comonad(S: Structure, which: str, cap: int | None = None) -> Diagnosis:
    """Counit and coassociativity laws, plus the (co)KZ inequality."""
    S = S.poset
    if which == "double":
        return _verify_double(S, cap)
    ck = Checker()
    T = _functor(which)

    def level(k):
        X = S
        for _ in range(k):
            X = power(X, which, cap).result
        return X

    def counit_laws():
        TS = level(1)
        eps_TS = counit(TS, which, cap)
        nu_S = comult(S, which, cap)
        return compose(eps_TS, nu_S), identity(TS), "="

    def counit_laws_2():
        TS = level(1)
        nu_S = comult(S, which, cap)
        T_eps = T(counit(S, which, cap), TS, S)
        return compose(T_eps, nu_S), identity(TS), "="

    def coassoc():
        TS, TTS = level(1), level(2)
        nu_S = comult(S, which, cap)
        left = compose(comult(TS, which, cap), nu_S)
        right = compose(T(nu_S, TS, TTS), nu_S)
        return left, right, "="

    def kz():
        TS = level(1)
        T_eps = T(counit(S, which, cap), TS, S)
        eps_T = counit(TS, which, cap)
        return (T_eps, eps_T, "<=") if which == LOWER else (eps_T, T_eps, "<=")

    def approx(name, f):
        try:
            r, a, b = f()
        except SizeCapExceeded as e:
            ck.skipped.append(f"{name}: skipped (size: {e.required} > {e.cap})")
            return
        ck.absorb(validate_morphism("approximable", r, a, b), prefix=f"{name}: ")

    approx("ε approximable", lambda: (counit(S, which, cap), level(1), S))
    approx("ν approximable", lambda: (comult(S, which, cap), level(1), level(2)))
    _law(ck, "ε_T ∘ ν = id", counit_laws)
    _law(ck, "Tε ∘ ν = id", counit_laws_2)
    _law(ck, "ν_T ∘ ν = Tν ∘ ν", coassoc)
    _law(ck, "Tε ≤ ε_T (coKZ)" if which == LOWER else "ε_T ≤ Tε (KZ)", kz)
    return ck.done()


def cokz_strict(S: Structure, cap: int | None = None) -> tuple[str, str] | None:
    """A pair where ε_{P_L S} holds but P_L ε does not, if any."""
    S = S.poset
    TS = power(S, LOWER, cap).result
    T_eps = lift_morphism(counit(S, LOWER, cap), LOWER, TS, S, cap, check=False)
    eps_T = counit(TS, LOWER, cap)
    extra = np.argwhere(eps_T.matrix & ~T_eps.matrix)
    if len(extra) == 0:
        return None
    i, j = extra[0]
    return eps_T.source.labels[i], eps_T.target.labels[j]


# ---------------------------------------------------------------- distributive law

def _star_rows(families: list[list[int]], n: int, cap) -> list[np.ndarray]:
    return [rc.masks_to_bits(rc.star_masks(f, cap), n) for f in families]


def sigma(S: Structure, cap: int | None = None, use_closures: bool = False) -> Relation:
    """σ: P_U P_L S → P_L P_U S, 𝒰 σ 𝒱 iff 𝒰 (≺_L)_U 𝒱*."""
    S = S.poset
    K1, T1 = power(S, LOWER, cap), power(S, UPPER, cap)
    TK, KT = power(K1.result, UPPER, cap), power(T1.result, LOWER, cap)
    p = S.prec.matrix
    t1_sets = T1.closures if use_closures else T1.reps
    kt_sets = KT.closures if use_closures else KT.reps
    tk_bits = TK.closure_bits if use_closures else TK.rep_bits
    k1_bits = K1.closure_bits if use_closures else K1.rep_bits
    out = np.zeros((TK.size, KT.size), dtype=bool)
    for j, V in enumerate(kt_sets):
        fam = [t1_sets[v] for v in members(V)]
        B = rc.masks_to_bits(rc.star_masks(fam, cap), S.n)
        if len(B) == 0:
            out[:, j] = True
            continue
        pre = bool_product(B, p.T)  # pre[B, a]: a ≺ some b in B
        ok = contained_in(k1_bits, pre)  # A ≺_L B
        out[:, j] = bool_product(tk_bits, ok).all(axis=1)
    return Relation(TK.carrier, KT.carrier, out)


def tau(S: Structure, cap: int | None = None, use_closures: bool = False) -> Relation:
    """τ: P_L P_U S → P_U P_L S, 𝒱 τ 𝒰 iff 𝒱 (≺_U)_L 𝒰*."""
    S = S.poset
    K1, T1 = power(S, LOWER, cap), power(S, UPPER, cap)
    TK, KT = power(K1.result, UPPER, cap), power(T1.result, LOWER, cap)
    p = S.prec.matrix
    k1_sets = K1.closures if use_closures else K1.reps
    tk_sets = TK.closures if use_closures else TK.reps
    kt_bits = KT.closure_bits if use_closures else KT.rep_bits
    t1_bits = T1.closure_bits if use_closures else T1.rep_bits
    img = bool_product(t1_bits, p)  # img[V, b]: some v in V has v ≺ b
    out = np.zeros((KT.size, TK.size), dtype=bool)
    for j, U in enumerate(tk_sets):
        fam = [k1_sets[u] for u in members(U)]
        A = rc.masks_to_bits(rc.star_masks(fam, cap), S.n)
        hit = contained_in(A, img).any(axis=0)  # hit[V]: V ≺_U some A in 𝒰*
        out[:, j] = contained_in(kt_bits, hit[None, :]).ravel()
    return Relation(KT.carrier, TK.carrier, out)


def distributive_law_maps(S: Structure, cap: int | None = None, check: bool = True) -> tuple[Relation, Relation]:
    S = S.poset
    s, t = sigma(S, cap), tau(S, cap)
    if check:
        K1, T1 = power(S, LOWER, cap), power(S, UPPER, cap)
        TK, KT = power(K1.result, UPPER, cap).result, power(T1.result, LOWER, cap).result
        for name, rel, a, b in (("σ", s, TK, KT), ("τ", t, KT, TK)):
            d = validate_morphism("approximable", rel, a, b)
            if not d.ok:
                raise InternalError(f"{name} is not approximable", d.witnesses[0].example)
        if compose(t, s) != TK.prec:
            raise InternalError("τ∘σ is not the identity", compose(t, s).first_difference(TK.prec))
        if compose(s, t) != KT.prec:
            raise InternalError("σ∘τ is not the identity", compose(s, t).first_difference(KT.prec))
    return s, t


def check_distributive_law(S: Structure, cap: int | None = None, diagrams=(1, 2, 3, 4)) -> Diagnosis:
    """The four diagrams with T = P_U, K = P_L and σ: TK → KT."""
    S = S.poset
    ck = Checker()
    L, U = LOWER, UPPER

    def pw(X, *kinds):
        for k in reversed(kinds):
            X = power(X, k, cap).result
        return X

    def lift(r, kind, a, b):
        return lift_morphism(r, kind, a, b, cap, check=False)

    def d1():
        # K ε^T ∘ σ = ε^T K
        left = compose(lift(counit(S, U, cap), L, pw(S, U), S), sigma(S, cap))
        return left, counit(pw(S, L), U, cap), "="

    def d2():
        # ε^K T ∘ σ = T ε^K
        left = compose(counit(pw(S, U), L, cap), sigma(S, cap))
        return left, lift(counit(S, L, cap), U, pw(S, L), S), "="

    def d3():
        # K σ ∘ σ K ∘ T ν^K = ν^K T ∘ σ
        KS = pw(S, L)
        left = compose_all(
            lift(sigma(S, cap), L, pw(S, U, L), pw(S, L, U)),
            sigma(KS, cap),
            lift(comult(S, L, cap), U, KS, pw(S, L, L)),
        )
        right = compose(comult(pw(S, U), L, cap), sigma(S, cap))
        return left, right, "="

    def d4():
        # σ T ∘ T σ ∘ ν^T K = K ν^T ∘ σ
        TS, KS = pw(S, U), pw(S, L)
        left = compose_all(
            sigma(TS, cap),
            lift(sigma(S, cap), U, pw(S, U, L), pw(S, L, U)),
            comult(KS, U, cap),
        )
        right = compose(lift(comult(S, U, cap), L, TS, pw(S, U, U)), sigma(S, cap))
        return left, right, "="

    names = {
        1: ("diagram 1: Kε^T∘σ = ε^T K", d1),
        2: ("diagram 2: ε^K T∘σ = Tε^K", d2),
        3: ("diagram 3: Kσ∘σK∘Tν^K = ν^K T∘σ", d3),
        4: ("diagram 4: σT∘Tσ∘ν^T K = Kν^T∘σ", d4),
    }
    for k in diagrams:
        name, f = names[k]
        _law(ck, name, f)
    return ck.done()


# ---------------------------------------------------------------- double comonad

def double_object(S: Structure, cap: int | None = None) -> ProximityPoset:
    return power(power(S, LOWER, cap).result, UPPER, cap).result


def double_lift(r: Relation, src: Structure, dst: Structure, cap: int | None = None) -> Relation:
    """H r = (r_L)_U."""
    KS, KD = power(src, LOWER, cap).result, power(dst, LOWER, cap).result
    return lift_morphism(lift_morphism(r, LOWER, src, dst, cap, check=False), UPPER, KS, KD, cap, check=False)


def double_counit(S: Structure, cap: int | None = None) -> Relation:
    """ε^H = ε^T ∘ T ε^K."""
    S = S.poset
    KS = power(S, LOWER, cap).result
    return compose(counit(S, UPPER, cap), lift_morphism(counit(S, LOWER, cap), UPPER, KS, S, cap, check=False))


def double_comult(S: Structure, cap: int | None = None) -> Relation:
    """ν^H = T σ_K ∘ ν^T_KK ∘ T ν^K."""
    S = S.poset
    KS = power(S, LOWER, cap).result
    KKS = power(KS, LOWER, cap).result
    through_lower = lift_morphism(comult(S, LOWER, cap), UPPER, KS, KKS, cap, check=False)
    through_upper = comult(KKS, UPPER, cap)
    KTKS = power(power(KS, UPPER, cap).result, LOWER, cap).result
    swap = lift_morphism(sigma(KS, cap), UPPER, power(KKS, UPPER, cap).result, KTKS, cap, check=False)
    return compose_all(swap, through_upper, through_lower)


def _verify_double(S: ProximityPoset, cap) -> Diagnosis:
    ck = Checker()
    H = lambda X: double_object(X, cap)  # noqa: E731

    def counit_left():
        return compose(double_counit(H(S), cap), double_comult(S, cap)), identity(H(S)), "="

    def counit_right():
        lifted = double_lift(double_counit(S, cap), H(S), S, cap)
        return compose(lifted, double_comult(S, cap)), identity(H(S)), "="

    def coassoc():
        nu = double_comult(S, cap)
        left = compose(double_comult(H(S), cap), nu)
        right = compose(double_lift(nu, H(S), H(H(S)), cap), nu)
        return left, right, "="

    _law(ck, "ε_H ∘ ν = id", counit_left)
    _law(ck, "Hε ∘ ν = id", counit_right)
    _law(ck, "ν_H ∘ ν = Hν ∘ ν", coassoc)
    return ck.done()


# ---------------------------------------------------------------- coalgebras

@dataclass(frozen=True)
class CoalgebraWitness:
    structure: Relation
    laws: dict = field(default_factory=dict)
    uniqueness: str = "not searched"


UNIQUENESS_LIMIT = 12  # bits in a candidate relation for exhaustive search


def upper_candidate(S: Structure, cap: int | None = None) -> Relation:
    """a α A iff a ≺ b and {b} ≺_U A for some b."""
    S = S.poset
    P = power(S, UPPER, cap)
    p = S.prec.matrix
    under = contained_in(P.rep_bits, p).T  # under[b, A]: b ≺ every member of A
    return Relation(S.carrier, P.carrier, bool_product(p, under))


def _coalgebra_laws(S: ProximityPoset, alpha: Relation, kind: str, cap) -> dict:
    TS = power(S, kind, cap).result
    eps = counit(S, kind, cap)
    idS, idT = identity(S), identity(TS)
    laws = {}
    laws["approximable"] = validate_morphism("approximable", alpha, S, TS).ok
    laws["ε∘α = id"] = compose(eps, alpha) == idS
    ea, ae = compose(eps, alpha), compose(alpha, eps)
    if kind == LOWER:
        laws["ε ⊣ α"] = idT <= ae and ea <= idS
    else:
        laws["α ⊣ ε"] = idS <= ea and ae <= idT
    if laws["approximable"]:
        try:
            nu = comult(S, kind, cap)
            T_alpha = lift_morphism(alpha, kind, S, TS, cap, check=False)
            laws["ν∘α = Tα∘α"] = compose(nu, alpha) == compose(T_alpha, alpha)
        except SizeCapExceeded:
            laws["ν∘α = Tα∘α"] = None
    else:
        laws["ν∘α = Tα∘α"] = False
    return laws


def _search_coalgebras(S: ProximityPoset, kind: str, cap) -> list[Relation] | None:
    TS = power(S, kind, cap).result
    bits = S.n * TS.n
    if bits > UNIQUENESS_LIMIT:
        return None
    eps = counit(S, kind, cap)
    found = []
    for alpha in all_relations(S.carrier, TS.carrier):
        if compose(eps, alpha) != identity(S):
            continue
        if not validate_morphism("approximable", alpha, S, TS).ok:
            continue
        found.append(alpha)
    return found


def coalgebra_structure(S: Structure, which: str, cap: int | None = None, search: bool = True):
    """The coalgebra structure on ``S`` for P_L or P_U, or None.

    The canonical candidate is η (lower, on strong ∨-semilattices) or the
    interpolation formula (upper). On tiny carriers every approximable
    section of ε is enumerated to confirm there is no other one.
    """
    P = S.poset
    candidate = None
    if which == LOWER:
        J = S if isinstance(S, ProximityJSL) else None
        if J is None:
            try:
                J = ProximityJSL.from_base(P)
            except Exception:
                J = None
        if J is not None and validate_structure(Kind.STRONG, J).ok:
            candidate = unit_lower(J, cap)
    else:
        candidate = upper_candidate(P, cap)
    laws = _coalgebra_laws(P, candidate, which, cap) if candidate is not None else {}
    valid = bool(laws) and all(v is not False for v in laws.values())
    note = "not searched (size)"
    if search:
        found = _search_coalgebras(P, which, cap)
        if found is not None:
            good = [a for a in found if all(v is not False for v in _coalgebra_laws(P, a, which, cap).values())]
            if len(good) > 1:
                raise InternalError("more than one coalgebra structure", (str(len(good)),))
            if valid and (len(good) != 1 or good[0] != candidate):
                raise InternalError("search disagrees with the canonical coalgebra")
            if not valid and good:
                if which == LOWER and candidate is None:
                    return CoalgebraWitness(good[0], _coalgebra_laws(P, good[0], which, cap), "unique (exhaustive)")
                raise InternalError("search found a coalgebra the candidate missed")
            note = "unique (exhaustive)"
    if not valid:
        return None
    return CoalgebraWitness(candidate, laws, note)


# ---------------------------------------------------------------- homomorphisms

@dataclass(frozen=True)
class HomReport:
    which: str
    is_hom: bool
    join_approximable: bool | None = None
    lawson: bool | None = None
    meet_preserving: bool | None = None
    lower_hom: bool | None = None
    upper_hom: bool | None = None
    witness: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def _hom_equation(r: Relation, src, dst, which: str, cap) -> tuple[bool, tuple]:
    a = coalgebra_structure(src, which, cap, search=False)
    b = coalgebra_structure(dst, which, cap, search=False)
    if a is None or b is None:
        raise NoCoalgebra(f"{which} coalgebra missing on {'source' if a is None else 'target'}")
    left = compose(b.structure, r)
    right = compose(lift_morphism(r, which, src, dst, cap, check=False), a.structure)
    diff = left.first_difference(right)
    return diff is None, diff[:2] if diff else ()


def double_structure(J: Structure, cap: int | None = None) -> Relation:
    """γ = T α_K ∘ α_T: S → P_U P_L S, with α_K = η and α_T the upper structure."""
    up = coalgebra_structure(J, UPPER, cap, search=False)
    if up is None:
        raise NoCoalgebra("no upper coalgebra")
    low = coalgebra_structure(J, LOWER, cap, search=False)
    if low is None:
        raise NoCoalgebra("no lower coalgebra")
    KS = power(J, LOWER, cap).result
    return compose(lift_morphism(low.structure, UPPER, J.poset, KS, cap, check=False), up.structure)


def classify_coalgebra_hom(r: Relation, src: Structure, dst: Structure, which: str, cap: int | None = None) -> HomReport:
    """Decide whether ``r`` is a coalgebra homomorphism and cross-check the
    equivalent characterizations (join-approximable for lower; Lawson and
    meet preservation for upper; both for double)."""
    if not validate_morphism("approximable", r, src, dst).ok:
        raise NotApproximable("classification needs an approximable relation")
    if which == LOWER:
        hom, wit = _hom_equation(r, src, dst, LOWER, cap)
        ja = validate_morphism("join-approximable", r, _jsl(src), _jsl(dst)).ok
        if hom != ja:
            raise InternalError("lower hom and join-approximable disagree", wit)
        return HomReport(LOWER, hom, join_approximable=ja, witness=wit)
    if which == UPPER:
        hom, wit = _hom_equation(r, src, dst, UPPER, cap)
        lawson = validate_morphism("lawson", r, src, dst).ok
        f = interpret_relation(r, src, dst)
        meets, mwit = f.preserves_meets()
        if not (hom == lawson == meets):
            raise InternalError("upper hom, Lawson and meet preservation disagree", (str(hom), str(lawson), str(meets)))
        return HomReport(UPPER, hom, lawson=lawson, meet_preserving=meets, witness=wit or mwit)
    if which == "double":
        g_src, g_dst = double_structure(src, cap), double_structure(dst, cap)
        left = compose(g_dst, r)
        right = compose(double_lift(r, src, dst, cap), g_src)
        diff = left.first_difference(right)
        lo = classify_coalgebra_hom(r, src, dst, LOWER, cap)
        up = classify_coalgebra_hom(r, src, dst, UPPER, cap)
        hom = diff is None
        if hom != (lo.is_hom and up.is_hom):
            raise InternalError("double hom is not the conjunction of lower and upper homs")
        return HomReport(
            "double",
            hom,
            join_approximable=lo.join_approximable,
            lawson=up.lawson,
            meet_preserving=up.meet_preserving,
            lower_hom=lo.is_hom,
            upper_hom=up.is_hom,
            witness=diff[:2] if diff else (),
        )
    raise ValueError(f"unknown coalgebra kind {which!r}")


def _jsl(S: Structure) -> ProximityJSL:
    return S if isinstance(S, ProximityJSL) else ProximityJSL.from_base(S)


# ---------------------------------------------------------------- double coalgebras

def is_double_coalgebra(J: ProximityJSL, cap: int | None = None, cross_check: bool = True) -> Diagnosis:
    """σ ∘ P_U α ∘ β = P_L β ∘ α, with α = η and β the upper structure."""
    J = _jsl(J)
    if not validate_structure(Kind.STRONG, J).ok:
        raise NotStrong("double coalgebra test needs a strong structure")
    up = coalgebra_structure(J, UPPER, cap, search=False)
    if up is None:
        raise NoCoalgebra("the upper coalgebra candidate fails")
    alpha, beta = unit_lower(J, cap), up.structure
    S = J.base
    KS, TS = power(S, LOWER, cap).result, power(S, UPPER, cap).result
    left = compose_all(sigma(S, cap), lift_morphism(alpha, UPPER, S, KS, cap, check=False), beta)
    right = compose(lift_morphism(beta, LOWER, S, TS, cap, check=False), alpha)
    ck = Checker()
    name = "σ∘P_U α∘β = P_L β∘α"
    ck.axiom(name)
    diff = left.first_difference(right)
    if diff is not None:
        ck.fail(name, diff[0], diff[1])
    out = ck.done()
    if cross_check:
        loc = is_localized(J).ok
        if loc != out.ok:
            raise InternalError("double-coalgebra verdict differs from localization", (f"localized={loc}",))
    return out


def verify_double_structure(J: ProximityJSL, cap: int | None = None) -> Diagnosis:
    """For a double coalgebra, γ satisfies ε^H∘γ = id and ν^H∘γ = Hγ∘γ, and
    γ factors through its two parts."""
    J = _jsl(J)
    S = J.base
    ck = Checker()
    gamma = double_structure(J, cap)
    HS = double_object(S, cap)

    def counit_law():
        return compose(double_counit(S, cap), gamma), identity(S), "="

    def comult_law():
        left = compose(double_comult(S, cap), gamma)
        right = compose(double_lift(gamma, S, HS, cap), gamma)
        return left, right, "="

    def factor_law():
        # α_T = T ε^K ∘ γ and α_K = ε^T_K ∘ γ recover the two structures
        KS = power(S, LOWER, cap).result
        alpha_t = compose(lift_morphism(counit(S, LOWER, cap), UPPER, KS, S, cap, check=False), gamma)
        alpha_k = compose(counit(KS, UPPER, cap), gamma)
        rebuilt = compose(lift_morphism(alpha_k, UPPER, S, KS, cap, check=False), alpha_t)
        return rebuilt, gamma, "="

    _law(ck, "ε^H∘γ = id", counit_law)
    _law(ck, "ν^H∘γ = Hγ∘γ", comult_law)
    _law(ck, "γ = Tα_K∘α_T", factor_law)
    return ck.done()


# ---------------------------------------------------------------- extensions

@dataclass(frozen=True)
class Extension:
    relation: Relation
    unique: bool | None


def extend_to_lower(r: Relation, src: ProximityJSL, dst: Structure, cap: int | None = None) -> Extension:
    """The join-approximable r̄: src → P_L dst with ε ∘ r̄ = r.

    b r̄ A iff b ≤ ⋁B and B r_L A for some finite B.
    """
    src = _jsl(src)
    d = validate_morphism("approximable", r, src, dst)
    if not d.ok:
        raise NotApproximable(d.summary())
    P = power(dst, LOWER, cap)
    n = src.n
    rc.check_cap(1 << n, cap, "Fin of the source")
    r_l = rc.lower_matrix(r.matrix, rc.all_subset_bits(n), P.rep_bits)  # B r_L A
    covered = src.le.matrix[:, src.fin_joins]  # b ≤ ⋁B
    bar = Relation(src.carrier, P.carrier, bool_product(covered, r_l))
    target = P.jsl
    jd = validate_morphism("join-approximable", bar, src, target)
    if not jd.ok:
        raise InternalError("extension is not join-approximable", jd.witnesses[0].example)
    if compose(counit(dst, LOWER, cap), bar) != r:
        raise InternalError("ε ∘ r̄ ≠ r")
    unique = None
    bits = n * P.size
    if bits <= 8:
        eps = counit(dst, LOWER, cap)
        count = 0
        for cand in all_relations(src.carrier, P.carrier):
            if compose(eps, cand) != r:
                continue
            if validate_morphism("join-approximable", cand, src, target).ok:
                count += 1
        unique = count == 1
    return Extension(bar, unique)


def all_relations(src: Carrier, dst: Carrier):
    bits = len(src) * len(dst)
    for code in range(1 << bits):
        m = np.array([(code >> k) & 1 for k in range(bits)], dtype=bool).reshape(len(src), len(dst))
        yield Relation(src, dst, m)
