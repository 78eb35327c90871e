"""Upper relations, finitary covers and continuous finitary covers.

An upper relation ``r ⊆ S × Fin S'`` is stored as a dense table with one
column per finite subset of ``S'`` (subset k at column k). Upward closure
is enforced on construction, so every stored relation is upper.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import relcore as rc
from .diagnosis import Checker, Diagnosis
from .errors import CarrierMismatch, InternalError, NotApproximableMap
from .proximity import Kind, ProximityJSL, ProximityPoset, validate_morphism, validate_structure
from .relcore import Carrier, Relation, bool_product, members


def superset_closure(m: np.ndarray) -> np.ndarray:
    """Close each row upward in the subset lattice of the columns."""
    out = np.array(m, dtype=bool)
    cols = out.shape[1]
    width = cols.bit_length() - 1
    index = np.arange(cols)
    for i in range(width):
        bit = 1 << i
        top = index[(index & bit) != 0]
        out[:, top] |= out[:, top ^ bit]
    return out


def _all_of(rows: np.ndarray) -> np.ndarray:
    """out[B] = AND of rows[b] for b in B, for every subset B of the rows."""
    n, cols = rows.shape
    out = np.ones((1 << n, cols), dtype=bool)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        out[mask] = out[mask & (mask - 1)] & rows[low]
    return out


@dataclass(frozen=True, eq=False)
class UpperRelation:
    source: Carrier
    target_base: Carrier
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=bool)
        if m.shape != (len(self.source), 1 << len(self.target_base)):
            raise CarrierMismatch(f"upper relation shape {m.shape} does not fit its carriers")
        m = superset_closure(m)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, source: Carrier, target_base: Carrier, pairs, cap: int | None = None) -> "UpperRelation":
        """Generators ``(a, B)``; the result is their upward closure."""
        rc.fin_carrier(target_base, cap)
        m = np.zeros((len(source), 1 << len(target_base)), dtype=bool)
        for a, B in pairs:
            i = a if isinstance(a, int) else source.index(a)
            m[i, target_base.subset(B).mask] = True
        return cls(source, target_base, m)

    @classmethod
    def membership(cls, carrier: Carrier) -> "UpperRelation":
        n = len(carrier)
        masks = np.arange(1 << n)
        m = ((masks[None, :] >> np.arange(n)[:, None]) & 1).astype(bool)
        return cls(carrier, carrier, m)

    @classmethod
    def exists(cls, r: Relation) -> "UpperRelation":
        """``a r_∃ B iff a r b for some b in B``."""
        return cls(r.source, r.target, bool_product(r.matrix, rc.all_subset_bits(len(r.target)).T))

    @property
    def fin_target(self) -> Carrier:
        return rc.fin_carrier(self.target_base, rc.MAX_CARRIER)

    def holds(self, a: int | str, B) -> bool:
        i = a if isinstance(a, int) else self.source.index(a)
        mask = B if isinstance(B, int) else self.target_base.subset(B).mask
        return bool(self.matrix[i, mask])

    def __eq__(self, other) -> bool:
        if not isinstance(other, UpperRelation):
            return NotImplemented
        return (
            self.source == other.source
            and self.target_base == other.target_base
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target_base, self.matrix.tobytes()))

    def __le__(self, other: "UpperRelation") -> bool:
        return not np.any(self.matrix & ~other.matrix)

    def first_difference(self, other: "UpperRelation") -> tuple[str, str, bool] | None:
        diff = np.argwhere(self.matrix != other.matrix)
        if len(diff) == 0:
            return None
        i, k = (int(x) for x in diff[0])
        return self.source.labels[i], self.target_base.render(k), bool(self.matrix[i, k])

    def minimal_pairs(self) -> list[tuple[str, str]]:
        """Generators: pairs (a, B) with no proper subset of B related to a."""
        out = []
        for i in range(len(self.source)):
            for k in np.flatnonzero(self.matrix[i]).tolist():
                if not any(self.matrix[i, k & ~(1 << b)] for b in members(k)):
                    out.append((self.source.labels[i], self.target_base.render(k)))
        return out

    def __repr__(self) -> str:
        return f"UpperRelation({len(self.source)}x2^{len(self.target_base)}, {len(self.minimal_pairs())} generators)"


def ext(r: UpperRelation) -> Relation:
    """``B r̃ C iff b r C for every b in B``."""
    fin_s = rc.fin_carrier(r.source, rc.MAX_CARRIER)
    return Relation(fin_s, r.fin_target, _all_of(r.matrix))


def cut_compose(s: UpperRelation, r: UpperRelation) -> UpperRelation:
    """``a (s·r) C iff a r B and B s̃ C for some B``: first r, then s.

    Since r is upper, the witness B can always be taken to be the largest
    one, ``{b | b s C}``.
    """
    if r.target_base != s.source:
        raise CarrierMismatch("cut composition: carriers do not chain")
    n = len(s.source)
    weights = (1 << np.arange(n, dtype=np.int64))[:, None]
    largest = (s.matrix.astype(np.int64) * weights).sum(axis=0)  # column C -> mask {b | b s C}
    return UpperRelation(r.source, s.target_base, r.matrix[:, largest])


def compose_with_relation(r: UpperRelation, f: Relation) -> UpperRelation:
    """``a (r ∘ f) B iff a f a' and a' r B for some a'``."""
    return UpperRelation(f.source, r.target_base, bool_product(f.matrix, r.matrix))


# ---------------------------------------------------------------- covers

@dataclass(frozen=True, eq=False)
class FinitaryCover:
    carrier: Carrier
    cov: UpperRelation

    @property
    def n(self) -> int:
        return len(self.carrier)

    def holds(self, a, A) -> bool:
        return self.cov.holds(a, A)


@dataclass(frozen=True, eq=False)
class ContFinCover:
    cover: FinitaryCover
    ll: UpperRelation

    @property
    def carrier(self) -> Carrier:
        return self.cover.carrier

    @property
    def cov(self) -> UpperRelation:
        return self.cover.cov

    @property
    def n(self) -> int:
        return self.cover.n


@dataclass(frozen=True, eq=False)
class StrongContFinCover:
    cover: FinitaryCover
    interp: Relation

    @property
    def carrier(self) -> Carrier:
        return self.cover.carrier

    @property
    def cov(self) -> UpperRelation:
        return self.cover.cov

    @property
    def n(self) -> int:
        return self.cover.n

    @cached_property
    def interp_exists(self) -> UpperRelation:
        return UpperRelation.exists(self.interp)

    @cached_property
    def ll(self) -> UpperRelation:
        """≪ = ◁ · ⊏_∃ (first ⊏_∃, then ◁)."""
        return cut_compose(self.cov, self.interp_exists)

    def as_continuous(self) -> ContFinCover:
        return ContFinCover(self.cover, self.ll)


Cover = FinitaryCover | ContFinCover | StrongContFinCover


def _check_upper(ck: Checker, name: str, r: UpperRelation) -> None:
    # stored relations are closed on construction; recheck the raw table anyway
    closed = superset_closure(r.matrix)
    ck.axiom(name)
    if not np.array_equal(closed, r.matrix):
        i, k = np.argwhere(closed != r.matrix)[0]
        ck.fail(name, r.source.labels[i], r.target_base.render(int(k)))


def _equal(ck: Checker, name: str, left: UpperRelation, right: UpperRelation) -> None:
    ck.axiom(name)
    diff = left.first_difference(right)
    if diff is not None:
        ck.fail(name, diff[0], diff[1], "left" if diff[2] else "right")


def _check_fincov(ck: Checker, c: FinitaryCover) -> None:
    cov = c.cov.matrix
    n = c.n
    _check_upper(ck, "weakening", c.cov)
    member = UpperRelation.membership(c.carrier).matrix
    bad = np.argwhere(member & ~cov)
    ck.require("reflexivity", len(bad) == 0, *(() if len(bad) == 0 else (c.carrier.labels[bad[0][0]], c.carrier.render(int(bad[0][1])))))
    # cut: a ◁ A ∪ {b} and b ◁ A imply a ◁ A
    ck.axiom("cut")
    for A in range(1 << n):
        for b in range(n):
            if not cov[b, A]:
                continue
            broken = np.flatnonzero(cov[:, A | (1 << b)] & ~cov[:, A])
            if len(broken):
                ck.fail("cut", c.carrier.labels[broken[0]], c.carrier.render(A), c.carrier.labels[b])
                return


def _check_cfc_laws(ck: Checker, cov: UpperRelation, ll: UpperRelation, prefix: str = "") -> None:
    _check_upper(ck, prefix + "≪ upper", ll)
    _equal(ck, prefix + "≪·≪ = ≪", cut_compose(ll, ll), ll)
    _equal(ck, prefix + "◁·≪ = ≪", cut_compose(cov, ll), ll)
    _equal(ck, prefix + "≪·◁ = ≪", cut_compose(ll, cov), ll)


def _check_strong(ck: Checker, c: StrongContFinCover) -> None:
    p = c.interp.matrix
    ck.require("⊏ idempotent", np.array_equal(bool_product(p, p), p))
    left = c.ll  # ◁·⊏_∃
    right = cut_compose(c.interp_exists, c.cov)  # ⊏_∃·◁
    # exchange: ∃b (a ⊏ b ◁ A) iff ∃B (a ◁ B ⊏_L A)
    ck.axiom("exchange ⟹")
    bad = np.argwhere(left.matrix & ~right.matrix)
    if len(bad):
        ck.fail("exchange ⟹", c.carrier.labels[bad[0][0]], c.carrier.render(int(bad[0][1])))
    ck.axiom("exchange ⟸")
    bad = np.argwhere(right.matrix & ~left.matrix)
    if len(bad):
        ck.fail("exchange ⟸", c.carrier.labels[bad[0][0]], c.carrier.render(int(bad[0][1])))
    if ck.failed("exchange ⟹") or ck.failed("exchange ⟸") or ck.failed("⊏ idempotent"):
        return
    sub = Checker()
    _check_cfc_laws(sub, c.cov, c.ll, "derived ")
    if not sub.done().ok:
        raise InternalError("derived ≪ breaks the continuous cover laws", sub.witnesses[0].example)
    ck.absorb(sub.done())


def _down(p: np.ndarray, mask: int) -> int:
    """↓⊏X = {c | c ⊏ x for some x in X}."""
    if mask == 0:
        return 0
    return rc.bits_to_mask(p[:, list(members(mask))].any(axis=1))


def _localized_definition(c: StrongContFinCover) -> tuple[bool, tuple]:
    """b ⊏ a ◁ A implies b ◁ (a ↓⊏ A)."""
    p, cov = c.interp.matrix, c.cov.matrix
    for a in range(c.n):
        below = np.flatnonzero(p[:, a])
        for A in np.flatnonzero(cov[a]).tolist():
            meet = _down(p, 1 << a) & _down(p, A)
            for b in below.tolist():
                if not cov[b, meet]:
                    return False, (c.carrier.labels[b], c.carrier.labels[a], c.carrier.render(A))
    return True, ()


def _localized_two_premise(c: StrongContFinCover) -> tuple[bool, tuple]:
    """b ⊏ a ◁ A and a ◁ B imply b ◁ (A ↓⊏ B)."""
    p, cov = c.interp.matrix, c.cov.matrix
    for a in range(c.n):
        below = np.flatnonzero(p[:, a]).tolist()
        covers = np.flatnonzero(cov[a]).tolist()
        for A in covers:
            dA = _down(p, A)
            for B in covers:
                meet = dA & _down(p, B)
                for b in below:
                    if not cov[b, meet]:
                        return False, (c.carrier.labels[b], c.carrier.labels[a], c.carrier.render(A), c.carrier.render(B))
    return True, ()


COVER_KINDS = ("upper", "sent", "fincov", "contfincov", "strong-cfc", "localized-strong-cfc")


def validate_cover(kind: str, data) -> Diagnosis:
    if kind not in COVER_KINDS:
        raise ValueError(f"unknown cover kind {kind!r}")
    ck = Checker()
    if kind == "upper":
        _check_upper(ck, "upper", data)
        return ck.done()
    if kind == "sent":
        _check_upper(ck, "upper", data)
        _equal(ck, "≪·≪ = ≪", cut_compose(data, data), data)
        return ck.done()
    cover = data if isinstance(data, FinitaryCover) else data.cover
    _check_fincov(ck, cover)
    if kind == "fincov":
        return ck.done()
    if kind == "contfincov":
        ll = data.ll
        _check_cfc_laws(ck, cover.cov, ll)
        return ck.done()
    if not isinstance(data, StrongContFinCover):
        raise TypeError("strong cover kinds need a StrongContFinCover")
    _check_strong(ck, data)
    if kind == "localized-strong-cfc" and ck.done().ok:
        ok1, w1 = _localized_definition(data)
        ok2, w2 = _localized_two_premise(data)
        if ok1 != ok2:
            raise InternalError("the two forms of localization disagree", w1 or w2)
        ck.require("localized", ok1, *w1)
    return ck.done()


# ---------------------------------------------------------------- to and from ∨-semilattices

@dataclass(frozen=True, eq=False)
class CoverLattice:
    """L(S, ◁) with the quotient from Fin S."""

    structure: ProximityJSL
    quotient: rc.QuotientMap

    def class_of(self, mask: int) -> int:
        return self.quotient.class_of[mask]

    @property
    def reps(self) -> tuple[int, ...]:
        return self.quotient.representatives


def _on_classes(ext_rel: np.ndarray, q_src: rc.QuotientMap, q_dst: rc.QuotientMap, what: str) -> np.ndarray:
    """Restrict a relation on Fin carriers to class representatives after
    checking that it does not depend on the choice."""
    cs = np.array(q_src.class_of)
    cd = np.array(q_dst.class_of)
    m = ext_rel[np.ix_(list(q_src.representatives), list(q_dst.representatives))]
    if not np.array_equal(m[np.ix_(cs, cd)], ext_rel):
        raise InternalError(f"{what} is not constant on classes")
    return m


def to_semilattice(c: Cover) -> CoverLattice:
    """The poset reflection of (Fin S, ◁̃), joins by union; ≺ is ≪̃ when the
    cover carries one, else the order itself."""
    cover = c if isinstance(c, FinitaryCover) else c.cover
    order, q = rc.poset_reflection(ext(cover.cov))
    k = len(q.representatives)
    reps = q.representatives
    join = np.array([[q.class_of[reps[i] | reps[j]] for j in range(k)] for i in range(k)])
    if isinstance(c, FinitaryCover):
        prec = order.matrix
    else:
        prec = _on_classes(ext(c.ll).matrix, q, q, "≪̃")
    base = ProximityPoset(q.carrier, order, Relation(q.carrier, q.carrier, prec))
    return CoverLattice(ProximityJSL(base, q.class_of[0], join), q)


def lift_map(r: UpperRelation, src: CoverLattice, dst: CoverLattice) -> Relation:
    """r̃ between the quotients."""
    m = _on_classes(ext(r).matrix, src.quotient, dst.quotient, "r̃")
    return Relation(src.structure.carrier, dst.structure.carrier, m)


def _as_jsl(J) -> ProximityJSL:
    return J if isinstance(J, ProximityJSL) else ProximityJSL.from_base(J)


def from_semilattice(J, strong: bool = False) -> Cover:
    """a ◁_∨ A iff a ≤ ⋁A; with a proximity, a ≪_∨ A iff a ≺ ⋁A.

    A plain ∨-semilattice (≺ = ≤) gives a FinitaryCover. With ``strong``
    the result is (S, ◁_∨, ≺).
    """
    J = _as_jsl(J)
    rc.fin_carrier(J.carrier)
    joins = J.fin_joins
    cover = FinitaryCover(J.carrier, UpperRelation(J.carrier, J.carrier, J.le.matrix[:, joins]))
    if strong:
        return StrongContFinCover(cover, J.prec)
    if np.array_equal(J.prec.matrix, J.le.matrix):
        return cover
    return ContFinCover(cover, UpperRelation(J.carrier, J.carrier, J.prec.matrix[:, joins]))


def map_from_semilattice(r: Relation, dst) -> UpperRelation:
    """G on morphisms: a G(r) A iff a r ⋁A."""
    dst = _as_jsl(dst)
    return UpperRelation(r.source, dst.carrier, r.matrix[:, dst.fin_joins])


def _pair_check(ck: Checker, name: str, left: Relation, right: Relation) -> None:
    ck.axiom(name)
    diff = left.first_difference(right)
    if diff is not None:
        ck.fail(name, *diff[:2])


def round_trip_semilattice(J) -> Diagnosis:
    """J ≅ F(G(J)): r = (a ≺ ⋁A), s = (⋁A ≺ a) are mutually inverse
    approximable relations."""
    J = _as_jsl(J)
    c = from_semilattice(J)
    L = to_semilattice(c)
    reps = L.reps
    p = J.prec.matrix
    fj = J.fin_joins
    tops = fj[list(reps)]
    r = Relation(J.carrier, L.structure.carrier, p[:, tops])
    s = Relation(L.structure.carrier, J.carrier, p[tops, :])
    ck = Checker()
    ck.absorb(validate_morphism("approximable", r, J, L.structure), "r: ")
    ck.absorb(validate_morphism("approximable", s, L.structure, J), "s: ")
    _pair_check(ck, "s∘r = ≺", rc.compose(s, r), J.prec)
    _pair_check(ck, "r∘s = ≺′", rc.compose(r, s), L.structure.prec)
    return ck.done()


def round_trip_cover(c: Cover) -> Diagnosis:
    """(S, ◁) ≅ G(F(S, ◁)) in the Karoubi envelope, via
    a f 𝒜 iff a ◁ ⋃𝒜 and [A] g B iff A ◁̃ B."""
    cover = c if isinstance(c, FinitaryCover) else c.cover
    L = to_semilattice(cover)
    back = from_semilattice(L.structure)
    reps = L.reps
    k = len(reps)
    cov = cover.cov.matrix
    union = np.array([_union(reps, fam) for fam in range(1 << k)], dtype=np.int64)
    f = UpperRelation(cover.carrier, L.structure.carrier, cov[:, union])
    g = UpperRelation(L.structure.carrier, cover.carrier, ext(cover.cov).matrix[list(reps), :])
    ck = Checker()
    _equal(ck, "g·f = ◁", cut_compose(g, f), cover.cov)
    _equal(ck, "f·g = ◁_∨", cut_compose(f, g), back.cov)
    for name, m, own, other in (("f", f, cover.cov, back.cov), ("g", g, back.cov, cover.cov)):
        _equal(ck, f"{name} absorbs source", cut_compose(m, own), m)
        _equal(ck, f"{name} absorbs target", cut_compose(other, m), m)
    return ck.done()


def _union(reps: tuple[int, ...], family: int) -> int:
    out = 0
    for i in members(family):
        out |= reps[i]
    return out


def round_trip_pq(c: ContFinCover | StrongContFinCover) -> Diagnosis:
    """Q(P(S, ◁, ≪)) = (S, ∈, ≪) is isomorphic to (S, ◁, ≪) via ≪."""
    cc = c.as_continuous() if isinstance(c, StrongContFinCover) else c
    qp = ContFinCover(FinitaryCover(cc.carrier, UpperRelation.membership(cc.carrier)), cc.ll)
    ck = Checker()
    ck.absorb(validate_cover("contfincov", qp), "QP: ")
    ll = cc.ll
    for name, src, dst in (("≪: QP → S", qp, cc), ("≪: S → QP", cc, qp)):
        ok = is_approximable_map(ll, src, dst)
        ck.require(name, ok)
    _equal(ck, "≪·≪ = ≪ (inverse pair)", cut_compose(ll, ll), ll)
    return ck.done()


# ---------------------------------------------------------------- maps

def _ll(c) -> UpperRelation:
    return c.ll


def is_approximable_map(r: UpperRelation, src, dst) -> bool:
    """r · ≪ = r = ≪′ · r (first ≪ then r, and first r then ≪′)."""
    return cut_compose(r, _ll(src)) == r and cut_compose(_ll(dst), r) == r


def _join_clause(r: UpperRelation, src: StrongContFinCover) -> tuple[bool, tuple]:
    """a r B implies a ◁ A for some A with every a' in A related to a
    singleton inside B. The largest such A is {a' | a' r {b}, b ∈ B}."""
    m = len(r.target_base)
    single = r.matrix[:, [1 << b for b in range(m)]]  # single[a', b]: a' r {b}
    cov = src.cov.matrix
    for B in range(1 << m):
        reach = rc.bits_to_mask(single[:, list(members(B))].any(axis=1)) if B else 0
        bad = np.flatnonzero(r.matrix[:, B] & ~cov[:, reach])
        if len(bad):
            return False, (r.source.labels[bad[0]], r.target_base.render(B))
    return True, ()


def _lawson_clauses(r: UpperRelation, src: StrongContFinCover, dst: StrongContFinCover) -> tuple[bool, tuple]:
    p = src.interp.matrix
    n, m = len(r.source), len(r.target_base)
    full = (1 << m) - 1
    lab, ren = r.source.labels, r.target_base.render
    below = p.any(axis=1)  # a ⊏ a' for some a'
    bad = np.flatnonzero(below & ~r.matrix[:, full])
    if len(bad):
        return False, ("(1)", lab[bad[0]])
    llx = ext(dst.ll).matrix  # D ≪̃′ B
    for ap in range(n):
        rel = np.flatnonzero(r.matrix[ap]).tolist()
        lower = np.flatnonzero(p[:, ap]).tolist()
        if not lower:
            continue
        for B in rel:
            for C in rel:
                # largest D with D ≪̃′ B and D ≪̃′ C
                Y = sum(1 << d for d in range(m) if llx[1 << d, B] and llx[1 << d, C])
                for a in lower:
                    if not r.matrix[a, Y]:
                        return False, ("(2)", lab[a], lab[ap], ren(B), ren(C))
    return True, ()


def _lawson_localized_form(r: UpperRelation, src: StrongContFinCover, dst: StrongContFinCover) -> bool:
    """a ⊏ a′ r {b} and a′ r {c} imply a r D for some D ⊆ b ↓⊏′ c."""
    p, q = src.interp.matrix, dst.interp.matrix
    n, m = len(r.source), len(r.target_base)
    for ap in range(n):
        lower = np.flatnonzero(p[:, ap]).tolist()
        hits = [b for b in range(m) if r.matrix[ap, 1 << b]]
        for b in hits:
            for c in hits:
                meet = _down(q, 1 << b) & _down(q, 1 << c)
                if any(not r.matrix[a, meet] for a in lower):
                    return False
    return True


MAP_KINDS = ("approximable", "join-approximable", "lawson", "proximity")


def classify_map(kind: str, r: UpperRelation, src: StrongContFinCover, dst: StrongContFinCover) -> Diagnosis:
    """Verdict for one map class, checked on the covers and again on the
    ∨-semilattice side; the two must agree."""
    if kind not in MAP_KINDS:
        raise ValueError(f"unknown map kind {kind!r}")
    if not is_approximable_map(r, src, dst):
        raise NotApproximableMap("r·≪ = r = ≪′·r fails")
    ck = Checker()
    ck.axiom("approximable map")
    if kind == "approximable":
        return ck.done()
    Ls, Ld = to_semilattice(src), to_semilattice(dst)
    lifted = lift_map(r, Ls, Ld)
    join_ok = lawson_ok = None
    if kind in ("join-approximable", "proximity"):
        join_ok, wit = _join_clause(r, src)
        other = validate_morphism("join-approximable", lifted, Ls.structure, Ld.structure).ok
        if join_ok != other:
            raise InternalError("join clause disagrees with the ∨-semilattice side", wit)
        ck.require("join-preserving", join_ok, *wit)
    if kind in ("lawson", "proximity"):
        lawson_ok, wit = _lawson_clauses(r, src, dst)
        other = validate_morphism("lawson", lifted, Ls.structure, Ld.structure).ok
        if lawson_ok != other:
            raise InternalError("Lawson clauses disagree with the ∨-semilattice side", wit)
        ck.require("Lawson", lawson_ok, *wit)
    if kind == "proximity":
        for side, c in (("source", src), ("target", dst)):
            ck.require(f"{side} localized", validate_cover("localized-strong-cfc", c).ok)
        if join_ok and validate_cover("localized-strong-cfc", src).ok and validate_cover("localized-strong-cfc", dst).ok:
            if _lawson_localized_form(r, src, dst) != lawson_ok:
                raise InternalError("simplified Lawson condition disagrees")
    return ck.done()


def strong_image_is_strong(c: StrongContFinCover) -> bool:
    return validate_structure(Kind.STRONG, to_semilattice(c).structure).ok


# ---------------------------------------------------------------- enumeration

def moore_families(n: int):
    """Closure systems on an n-set, as sorted tuples of closed masks.

    Finitary covers on a finite set are the same as these: a ◁ A iff a
    lies in every closed set containing A.
    """
    full = (1 << n) - 1
    others = [m for m in range(1 << n) if m != full]
    for code in range(1 << len(others)):
        fam = [others[i] for i in range(len(others)) if (code >> i) & 1] + [full]
        fs = set(fam)
        if all((x & y) in fs for x in fam for y in fam):
            yield tuple(sorted(fs))


def cover_of_closure_system(carrier: Carrier, closed: tuple[int, ...]) -> FinitaryCover:
    n = len(carrier)
    m = np.zeros((n, 1 << n), dtype=bool)
    for A in range(1 << n):
        hull = (1 << n) - 1
        for c in closed:
            if c & A == A:
                hull &= c
        for a in members(hull):
            m[a, A] = True
    return FinitaryCover(carrier, UpperRelation(carrier, carrier, m))


def all_finitary_covers(carrier: Carrier) -> list[FinitaryCover]:
    return [cover_of_closure_system(carrier, fam) for fam in moore_families(len(carrier))]


def strong_covers(carrier: Carrier) -> list[StrongContFinCover]:
    """Every strong continuous finitary cover on ``carrier`` (labelled)."""
    n = len(carrier)
    out = []
    idem = []
    for code in range(1 << (n * n)):
        p = np.array([(code >> k) & 1 for k in range(n * n)], dtype=bool).reshape(n, n)
        if np.array_equal(bool_product(p, p), p):
            idem.append(Relation(carrier, carrier, p))
    for c in all_finitary_covers(carrier):
        for p in idem:
            s = StrongContFinCover(c, p)
            if s.ll == cut_compose(s.interp_exists, s.cov):
                out.append(s)
    return out
