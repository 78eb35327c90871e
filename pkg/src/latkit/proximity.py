"""Proximity posets and proximity join-semilattices.

A proximity poset is a finite poset ``(S, <=)`` with a relation ``prec``
(written ≺) whose lower sets ``↓≺a`` are rounded ideals and whose upper
sets ``↑≺a`` are rounded up-sets. Relations are stored with
``prec[a, b]`` meaning ``a ≺ b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from . import relcore as rc
from .diagnosis import Checker, Diagnosis
from .errors import CarrierMismatch, InternalError, KindUnavailable, NotStrong, ValidationError
from .relcore import Carrier, Relation, bits_to_mask, bool_product, members


class Kind(str, Enum):
    POSET = "poset"
    JSL = "jsl"
    PROXIMITY_POSET = "proximity-poset"
    PROXIMITY_JSL = "proximity-jsl"
    STRONG = "strong-proximity-jsl"
    LOCALIZED = "localized-strong-proximity-jsl"

    @property
    def needs_join(self) -> bool:
        return self in (Kind.JSL, Kind.PROXIMITY_JSL, Kind.STRONG, Kind.LOCALIZED)

    @property
    def needs_prec(self) -> bool:
        return self not in (Kind.POSET, Kind.JSL)


@dataclass(frozen=True, eq=False)
class ProximityPoset:
    carrier: Carrier
    le: Relation
    prec: Relation
    _badges: set = field(default_factory=set, repr=False)

    @classmethod
    def build(cls, labels: Iterable[str], le_pairs, prec_pairs=None, close_le: bool = True):
        """Build from label pairs. ``le_pairs`` is closed reflexively and
        transitively when ``close_le``; ``prec`` defaults to ``le``."""
        c = Carrier(tuple(labels))
        le = Relation.from_pairs(c, c, le_pairs)
        if close_le:
            le = Relation(c, c, rc.reflexive_transitive_closure(le.matrix))
        prec = le if prec_pairs is None else Relation.from_pairs(c, c, prec_pairs)
        return cls(c, le, prec)

    @classmethod
    def from_matrices(cls, carrier: Carrier, le: np.ndarray, prec: np.ndarray | None = None):
        le_rel = Relation(carrier, carrier, le)
        prec_rel = le_rel if prec is None else Relation(carrier, carrier, prec)
        return cls(carrier, le_rel, prec_rel)

    @property
    def n(self) -> int:
        return len(self.carrier)

    @cached_property
    def key(self) -> tuple:
        return (self.carrier, self.le.matrix.tobytes(), self.prec.matrix.tobytes())

    def __eq__(self, other) -> bool:
        return isinstance(other, ProximityPoset) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @cached_property
    def down_le(self) -> list[int]:
        return rc.down_masks(self.le.matrix)

    @cached_property
    def up_le(self) -> list[int]:
        return rc.up_masks(self.le.matrix)

    @cached_property
    def down_prec(self) -> list[int]:
        """``down_prec[a]`` is the mask of ↓≺a."""
        return [bits_to_mask(self.prec.matrix[:, a]) for a in range(self.n)]

    @cached_property
    def up_prec(self) -> list[int]:
        return [bits_to_mask(self.prec.matrix[a]) for a in range(self.n)]

    def down_prec_of(self, mask: int) -> int:
        out = 0
        for a in members(mask):
            out |= self.down_prec[a]
        return out

    def label(self, i: int) -> str:
        return self.carrier.labels[i]

    def render(self, mask: int) -> str:
        return self.carrier.render(mask)

    @property
    def poset(self) -> "ProximityPoset":
        return self

    def underlying_poset(self) -> "ProximityPoset":
        """The same order with ≺ replaced by ≤."""
        return ProximityPoset(self.carrier, self.le, self.le)

    def with_prec(self, prec: np.ndarray) -> "ProximityPoset":
        return ProximityPoset(self.carrier, self.le, Relation(self.carrier, self.carrier, prec))


@dataclass(frozen=True, eq=False)
class ProximityJSL:
    base: ProximityPoset
    bottom: int
    join: np.ndarray
    _badges: set = field(default_factory=set, repr=False)

    def __post_init__(self):
        j = np.array(self.join, dtype=np.int64, copy=True)
        if j.shape != (self.base.n, self.base.n):
            raise ValueError("join table has the wrong shape")
        j.setflags(write=False)
        object.__setattr__(self, "join", j)

    @classmethod
    def from_base(cls, base: ProximityPoset) -> "ProximityJSL":
        """Read off 0 and ∨ from the order; fails if they do not exist."""
        bottom, join = lub_table(base.le.matrix)
        if bottom is None:
            raise KindUnavailable("the order has no least element")
        if join is None:
            raise KindUnavailable("the order lacks binary joins")
        return cls(base, bottom, join)

    @property
    def carrier(self) -> Carrier:
        return self.base.carrier

    @property
    def le(self) -> Relation:
        return self.base.le

    @property
    def prec(self) -> Relation:
        return self.base.prec

    @property
    def n(self) -> int:
        return self.base.n

    @cached_property
    def key(self) -> tuple:
        return (self.base.key, self.bottom, self.join.tobytes())

    def __eq__(self, other) -> bool:
        return isinstance(other, ProximityJSL) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    @property
    def poset(self) -> ProximityPoset:
        return self.base

    def join_of(self, mask: int) -> int:
        """⋁ of the subset ``mask``; the empty join is 0."""
        out = self.bottom
        for a in members(mask):
            out = int(self.join[out, a])
        return out

    @cached_property
    def fin_joins(self) -> np.ndarray:
        """``fin_joins[k]`` is ⋁ of subset k, for every subset of the carrier."""
        rc.check_cap(1 << self.n, what="Fin of the carrier")
        out = np.empty(1 << self.n, dtype=np.int64)
        out[0] = self.bottom
        for k in range(1, 1 << self.n):
            low = k & -k
            out[k] = self.join[out[k ^ low], low.bit_length() - 1]
        return out

    def with_prec(self, prec: np.ndarray) -> "ProximityJSL":
        return ProximityJSL(self.base.with_prec(prec), self.bottom, self.join)


Structure = ProximityPoset | ProximityJSL


def lub_table(le: np.ndarray) -> tuple[int | None, np.ndarray | None]:
    """Least element and binary-join table of a finite partial order, if any."""
    n = len(le)
    bottoms = [x for x in range(n) if le[x].all()]
    bottom = bottoms[0] if bottoms else None
    join = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ub = np.flatnonzero(le[a] & le[b])
            least = [u for u in ub if le[u, ub].all()]
            if not least:
                return bottom, None
            join[a, b] = least[0]
    return bottom, join


# ---------------------------------------------------------------- validation

def _check_order(ck: Checker, S: ProximityPoset) -> None:
    le = S.le.matrix
    lab = S.carrier.labels
    for a in range(S.n):
        if not le[a, a]:
            ck.fail("≤ reflexive", lab[a])
    ck.axiom("≤ reflexive")
    bad = np.argwhere(bool_product(le, le) & ~le)
    ck.axiom("≤ transitive")
    if len(bad):
        a, c = bad[0]
        b = int(np.flatnonzero(le[a] & le[:, c])[0])
        ck.fail("≤ transitive", lab[a], lab[b], lab[c])
    both = np.argwhere(le & le.T & ~np.eye(S.n, dtype=bool))
    ck.axiom("≤ antisymmetric")
    if len(both):
        ck.fail("≤ antisymmetric", lab[both[0][0]], lab[both[0][1]])


def _check_prec(ck: Checker, S: ProximityPoset) -> None:
    le, p = S.le.matrix, S.prec.matrix
    lab = S.carrier.labels
    n = S.n
    diff = np.argwhere(bool_product(p, p) != p)
    ck.axiom("≺ idempotent")
    if len(diff):
        a, b = diff[0]
        ck.fail("≺ idempotent", lab[a], lab[b])

    # ↓≺a must be a rounded ideal
    for a in range(n):
        col = np.flatnonzero(p[:, a])
        if len(col) == 0:
            ck.fail("↓≺a inhabited", lab[a])
    ck.axiom("↓≺a inhabited")
    closed = bool_product(le, p) & ~p  # b <= c ≺ a but not b ≺ a
    ck.axiom("↓≺a down-closed")
    if closed.any():
        b, a = np.argwhere(closed)[0]
        c = int(np.flatnonzero(le[b] & p[:, a])[0])
        ck.fail("↓≺a down-closed", lab[b], lab[c], lab[a])
    ck.axiom("↓≺a directed")
    for a in range(n):
        inside = p[:, a]
        idx = np.flatnonzero(inside)
        if len(idx) < 2:
            continue
        # bounded[b, c]: some d ≺ a lies above both
        sub = le[np.ix_(idx, idx)]
        bounded = bool_product(sub, sub.T)
        if not bounded.all():
            i, j = np.argwhere(~bounded)[0]
            ck.fail("↓≺a directed", lab[a], lab[idx[i]], lab[idx[j]])
            break
    ck.axiom("↓≺a rounded")
    for a in range(n):
        # b ∈ ↓≺a iff some c with b ≺ c lies in ↓≺a
        via = bool_product(p, p[:, [a]])[:, 0]
        diff = np.flatnonzero(via != p[:, a])
        if len(diff):
            ck.fail("↓≺a rounded", lab[a], lab[diff[0]])
            break

    # ↑≺a must be a rounded up-set
    upper = bool_product(p, le) & ~p  # a ≺ b <= c but not a ≺ c
    ck.axiom("↑≺a up-closed")
    if upper.any():
        a, c = np.argwhere(upper)[0]
        b = int(np.flatnonzero(p[a] & le[:, c])[0])
        ck.fail("↑≺a up-closed", lab[a], lab[b], lab[c])
    ck.axiom("↑≺a rounded")
    for a in range(n):
        via = bool_product(p[[a]], p)[0]
        diff = np.flatnonzero(via != p[a])
        if len(diff):
            ck.fail("↑≺a rounded", lab[a], lab[diff[0]])
            break


def _check_join(ck: Checker, J: ProximityJSL) -> None:
    le = J.le.matrix
    lab = J.carrier.labels
    n = J.n
    ck.axiom("0 least")
    if not (0 <= J.bottom < n) or not le[J.bottom].all():
        ck.fail("0 least", lab[J.bottom] if 0 <= J.bottom < n else str(J.bottom))
    ck.axiom("∨ upper bound")
    ck.axiom("∨ least")
    for a in range(n):
        for b in range(n):
            j = int(J.join[a, b])
            if not (0 <= j < n):
                ck.fail("∨ upper bound", lab[a], lab[b])
                continue
            if not (le[a, j] and le[b, j]):
                ck.fail("∨ upper bound", lab[a], lab[b], lab[j])
            ub = le[a] & le[b]
            if np.any(ub & ~le[j]):
                d = int(np.flatnonzero(ub & ~le[j])[0])
                ck.fail("∨ least", lab[a], lab[b], lab[d])


def _check_join_prec(ck: Checker, J: ProximityJSL) -> None:
    p = J.prec.matrix
    lab = J.carrier.labels
    n = J.n
    z = J.bottom
    ck.require("0 ≺ 0", bool(p[z, z]), lab[z])
    ck.axiom("≺ ∨-monotone")
    for b in range(n):
        for b2 in range(n):
            below = p[:, int(J.join[b, b2])]
            lows = J.join[np.ix_(np.flatnonzero(p[:, b]), np.flatnonzero(p[:, b2]))]
            bad = [int(x) for x in np.unique(lows) if not below[x]]
            if bad:
                ck.fail("≺ ∨-monotone", lab[bad[0]], lab[int(J.join[b, b2])])
                return


def _strong_join_targets(J: ProximityJSL) -> np.ndarray:
    """reach[b, c] is the mask-as-row of {a | ∃b'≺b, c'≺c, a <= b'∨c'}."""
    n = J.n
    p, le = J.prec.matrix, J.le.matrix
    reach = np.zeros((n, n, n), dtype=bool)
    for b in range(n):
        bs = np.flatnonzero(p[:, b])
        for c in range(n):
            cs = np.flatnonzero(p[:, c])
            if len(bs) and len(cs):
                tops = np.unique(J.join[np.ix_(bs, cs)])
                reach[b, c] = le[:, tops].any(axis=1)
    return reach


def _check_strong(ck: Checker, J: ProximityJSL) -> None:
    p = J.prec.matrix
    lab = J.carrier.labels
    z = J.bottom
    ck.axiom("a ≺ 0 ⟹ a = 0")
    for a in np.flatnonzero(p[:, z]):
        if a != z:
            ck.fail("a ≺ 0 ⟹ a = 0", lab[a])
    ck.axiom("a ≺ b∨c splits")
    reach = _strong_join_targets(J)
    for b in range(J.n):
        for c in range(J.n):
            missing = p[:, int(J.join[b, c])] & ~reach[b, c]
            if missing.any():
                ck.fail("a ≺ b∨c splits", lab[int(np.flatnonzero(missing)[0])], lab[b], lab[c])
                return


def validate_structure(kind: Kind | str, data: Structure) -> Diagnosis:
    """Check every axiom of ``kind``; failures come back as witnesses."""
    kind = Kind(kind)
    ck = Checker()
    base = data.base if isinstance(data, ProximityJSL) else data
    if kind.needs_join and not isinstance(data, ProximityJSL):
        try:
            data = ProximityJSL.from_base(base)
        except KindUnavailable as e:
            ck.fail("∨-semilattice", str(e))
            return ck.done()
    _check_order(ck, base)
    if ck.witnesses:
        return ck.done()
    if kind.needs_prec:
        _check_prec(ck, base)
    if kind.needs_join:
        _check_join(ck, data)
        if kind.needs_prec and not ck.witnesses:
            _check_join_prec(ck, data)
    if kind in (Kind.STRONG, Kind.LOCALIZED) and not ck.witnesses:
        _check_strong(ck, data)
    if kind is Kind.LOCALIZED and not ck.witnesses:
        ck.absorb(_localized_basic(data))
    result = ck.done()
    if result.ok:
        data._badges.add(kind.value)
    return result


def require(kind: Kind | str, data: Structure) -> Structure:
    """Return ``data`` if it is a valid ``kind``, raising otherwise."""
    kind = Kind(kind)
    if kind.value in data._badges:
        return data
    if kind.needs_join and not isinstance(data, ProximityJSL):
        data = ProximityJSL.from_base(data)
    diag = validate_structure(kind, data)
    if not diag.ok:
        raise ValidationError(kind.value, diag)
    return data


def has_badge(data: Structure, kind: Kind | str) -> bool:
    return Kind(kind).value in data._badges


# ---------------------------------------------------------------- localization

def _localized_basic(J: ProximityJSL) -> Diagnosis:
    """a ≺ b ≤ c∨d ⟹ a ≺ a1∨a2 for some a1 ∈ ↓≺b∩↓≺c, a2 ∈ ↓≺b∩↓≺d."""
    ck = Checker()
    name = "localized"
    ck.axiom(name)
    p, le = J.prec.matrix, J.le.matrix
    lab = J.carrier.labels
    n = J.n
    for b in range(n):
        need = p[:, b]
        if not need.any():
            continue
        for c in range(n):
            for d in range(n):
                if not le[b, J.join[c, d]]:
                    continue
                xs = np.flatnonzero(p[:, b] & p[:, c])
                ys = np.flatnonzero(p[:, b] & p[:, d])
                got = np.zeros(n, dtype=bool)
                if len(xs) and len(ys):
                    tops = np.unique(J.join[np.ix_(xs, ys)])
                    got = p[:, tops].any(axis=1)
                miss = need & ~got
                if miss.any():
                    a = int(np.flatnonzero(miss)[0])
                    ck.fail(name, lab[a], lab[b], lab[c], lab[d])
                    return ck.done()
    return ck.done()


def _localized_general(J: ProximityJSL) -> Diagnosis:
    """a ≺ a' ≤ ⋁A, a' ≤ ⋁B ⟹ a ≺ ⋁C for some C ⊆ ↓≺A ∩ ↓≺B.

    Because ↑≺a is up-closed, a suitable C exists iff the whole
    intersection works, so it is tested directly.
    """
    ck = Checker()
    name = "localized (two-cover form)"
    ck.axiom(name)
    S = J.base
    fj = J.fin_joins
    le = S.le.matrix
    down_of = [S.down_prec_of(k) for k in range(1 << S.n)]
    for a2 in range(S.n):
        need = S.down_prec[a2]
        if not need:
            continue
        covers = [k for k in range(1 << S.n) if le[a2, fj[k]]]
        for A in covers:
            for B in covers:
                top = J.join_of(down_of[A] & down_of[B])
                miss = need & ~S.down_prec[top]
                if miss:
                    a = members(miss)[0]
                    ck.fail(name, S.label(a), S.label(a2), S.render(A), S.render(B))
                    return ck.done()
    return ck.done()


def _localized_finite(J: ProximityJSL) -> Diagnosis:
    """a ≺ a' ≤ ⋁A_i for all i ⟹ a ≺ ⋁C for some C ⊆ ⋂ ↓≺A_i.

    Adding covers only shrinks the intersection, so the family of all
    covers of a' is the hardest instance and it is the one tested; the
    empty family (intersection S) is implied by taking C = {a'}.
    """
    ck = Checker()
    name = "localized (finite-family form)"
    ck.axiom(name)
    S = J.base
    fj = J.fin_joins
    full = (1 << S.n) - 1
    for a2 in range(S.n):
        need = S.down_prec[a2]
        if not need:
            continue
        inter = full
        for k in range(1 << S.n):
            if S.le.matrix[a2, fj[k]]:
                inter &= S.down_prec_of(k)
        miss = need & ~S.down_prec[J.join_of(inter)]
        if miss:
            ck.fail(name, S.label(members(miss)[0]), S.label(a2))
            return ck.done()
    # the empty family
    for a2 in range(S.n):
        miss = S.down_prec[a2] & ~S.down_prec[J.join_of(1 << a2)]
        if miss:
            ck.fail(name, S.label(members(miss)[0]), S.label(a2), "no covers")
            return ck.done()
    return ck.done()


def is_localized(J: ProximityJSL, mode: str = "all") -> Diagnosis:
    """Decide localization in one of three equivalent formulations.

    ``mode="all"`` evaluates all three and raises ``InternalError`` if
    they disagree.
    """
    if not isinstance(J, ProximityJSL):
        J = ProximityJSL.from_base(J)
    if "strong-proximity-jsl" not in J._badges:
        diag = validate_structure(Kind.STRONG, J)
        if not diag.ok:
            raise NotStrong(diag.summary())
    modes = {"basic": _localized_basic, "general": _localized_general, "finite": _localized_finite}
    if mode != "all":
        return modes[mode](J)
    results = {m: f(J) for m, f in modes.items()}
    verdicts = {m: d.ok for m, d in results.items()}
    if len(set(verdicts.values())) != 1:
        raise InternalError("localization formulations disagree", tuple(f"{m}={v}" for m, v in verdicts.items()))
    out = results["basic"].merge(results["general"], results["finite"])
    if out.ok:
        J._badges.add(Kind.LOCALIZED.value)
    return out


# ---------------------------------------------------------------- morphisms

def _check_approximable(ck: Checker, r: Relation, src: ProximityPoset, dst: ProximityPoset) -> None:
    m = r.matrix
    le_s, le_t = src.le.matrix, dst.le.matrix
    sl, tl = src.carrier.labels, dst.carrier.labels
    # r⁻b is an ideal of the source
    ck.axiom("r⁻b inhabited")
    ck.axiom("r⁻b down-closed")
    ck.axiom("r⁻b directed")
    for b in range(dst.n):
        col = m[:, b]
        idx = np.flatnonzero(col)
        if len(idx) == 0:
            ck.fail("r⁻b inhabited", tl[b])
            continue
        below = le_s[:, idx].any(axis=1) & ~col
        if below.any():
            ck.fail("r⁻b down-closed", tl[b], sl[int(np.flatnonzero(below)[0])])
        sub = le_s[np.ix_(idx, idx)]
        bounded = bool_product(sub, sub.T)
        if not bounded.all():
            i, j = np.argwhere(~bounded)[0]
            ck.fail("r⁻b directed", tl[b], sl[idx[i]], sl[idx[j]])
    ck.axiom("r a up-closed")
    above = bool_product(m, le_t) & ~m
    if above.any():
        a, c = np.argwhere(above)[0]
        ck.fail("r a up-closed", sl[a], tl[c])
    for name, other in (
        ("r∘≺ = r", bool_product(src.prec.matrix, m)),
        ("≺′∘r = r", bool_product(m, dst.prec.matrix)),
    ):
        ck.axiom(name)
        diff = np.argwhere(other != m)
        if len(diff):
            a, b = diff[0]
            ck.fail(name, sl[a], tl[b])


def _as_jsl(x: Structure, role: str) -> ProximityJSL:
    if isinstance(x, ProximityJSL):
        return x
    try:
        return ProximityJSL.from_base(x)
    except KindUnavailable as e:
        raise KindUnavailable(f"{role}: {e}") from None


def _check_join_clauses(ck: Checker, r: Relation, src: ProximityJSL, dst: ProximityJSL) -> None:
    m = r.matrix
    le = src.le.matrix
    sl, tl = src.carrier.labels, dst.carrier.labels
    ck.axiom("a r 0′ ⟹ a = 0")
    for a in np.flatnonzero(m[:, dst.bottom]):
        if a != src.bottom:
            ck.fail("a r 0′ ⟹ a = 0", sl[a])
            break
    ck.axiom("a r b∨c splits")
    for b in range(dst.n):
        bs = np.flatnonzero(m[:, b])
        for c in range(dst.n):
            cs = np.flatnonzero(m[:, c])
            reach = np.zeros(src.n, dtype=bool)
            if len(bs) and len(cs):
                reach = le[:, np.unique(src.join[np.ix_(bs, cs)])].any(axis=1)
            miss = m[:, int(dst.join[b, c])] & ~reach
            if miss.any():
                ck.fail("a r b∨c splits", sl[int(np.flatnonzero(miss)[0])], tl[b], tl[c])
                return


def _check_lawson(ck: Checker, r: Relation, src: ProximityPoset, dst: ProximityPoset) -> None:
    m = r.matrix
    p, q = src.prec.matrix, dst.prec.matrix
    sl, tl = src.carrier.labels, dst.carrier.labels
    ck.axiom("Lawson: a ≺ a′ ⟹ ∃b, a r b")
    for a in range(src.n):
        if p[a].any() and not m[a].any():
            ck.fail("Lawson: a ≺ a′ ⟹ ∃b, a r b", sl[a], sl[int(np.flatnonzero(p[a])[0])])
            break
    name = "Lawson: a ≺ a′ r b, a′ r c ⟹ ∃d ≺′ b,c with a r d"
    ck.axiom(name)
    for a in range(src.n):
        for a2 in np.flatnonzero(p[a]):
            targets = np.flatnonzero(m[a2])
            for b in targets:
                for c in targets:
                    if not np.any(m[a] & q[:, b] & q[:, c]):
                        ck.fail(name, sl[a], sl[a2], tl[b], tl[c])
                        return


def _lawson_single_formula(r: Relation, src: ProximityPoset, dst: ProximityPoset) -> tuple[bool, tuple]:
    """a ≺ a′ and {a′} r_U B ⟹ a r b with {b} ≺′_U B, for every finite B."""
    rc.check_cap(1 << dst.n, what="Fin of the target")
    m = r.matrix
    p, q = src.prec.matrix, dst.prec.matrix
    for B in range(1 << dst.n):
        bm = list(members(B))
        # b with {b} ≺′_U B, i.e. b ≺′ every member of B
        under = q[:, bm].all(axis=1) if bm else np.ones(dst.n, dtype=bool)
        for a2 in range(src.n):
            if bm and not m[a2, bm].all():
                continue
            for a in np.flatnonzero(p[:, a2]):
                if not np.any(m[a] & under):
                    return False, (src.label(a), src.label(a2), dst.render(B))
    return True, ()


def validate_morphism(kind: str, r: Relation, src: Structure, dst: Structure) -> Diagnosis:
    """Classify ``r ⊆ src × dst`` as approximable, join-approximable,
    Lawson, or a proximity relation."""
    if r.source != src.carrier or r.target != dst.carrier:
        raise CarrierMismatch("relation is not between the given structures")
    ck = Checker()
    sp, dp = src.poset, dst.poset
    _check_approximable(ck, r, sp, dp)
    approximable = ck.done().ok
    if kind == "approximable":
        return ck.done()
    if kind in ("join-approximable", "proximity"):
        _check_join_clauses(ck, r, _as_jsl(src, "source"), _as_jsl(dst, "target"))
    if kind in ("lawson", "proximity"):
        _check_lawson(ck, r, sp, dp)
        lawson_two = not any(w.axiom.startswith("Lawson") for w in ck.done().witnesses)
        single, wit = _lawson_single_formula(r, sp, dp)
        ck.axiom("Lawson single-formula variant")
        if not single:
            ck.fail("Lawson single-formula variant", *wit)
        if approximable and single != lawson_two:
            raise InternalError("Lawson formulations disagree", (f"two-clause={lawson_two}", f"single={single}"))
    if kind == "proximity":
        for role, J in (("source", src), ("target", dst)):
            J = _as_jsl(J, role)
            try:
                loc = is_localized(J).ok
            except NotStrong:
                loc = False
            ck.require(f"{role} localized", loc, role)
    elif kind not in ("join-approximable", "lawson"):
        raise ValueError(f"unknown morphism kind {kind!r}")
    return ck.done()


# ---------------------------------------------------------------- strengthening

class Strengthening(NamedTuple):
    structure: ProximityJSL
    r: Relation
    s: Relation
    quotient: rc.QuotientMap


def strengthen(J: ProximityJSL, cap: int | None = None) -> Strengthening:
    """Build the strong proximity ∨-semilattice on Fin(S) isomorphic to ``J``.

    Returns the strong structure together with the inverse pair
    ``r ⊆ Fin(S) × S`` and ``s ⊆ S × Fin(S)`` (on quotient classes).
    """
    J = require(Kind.PROXIMITY_JSL, J)
    n = J.n
    rc.check_cap(1 << n, cap, "Fin of the carrier")
    size = 1 << n
    bits = rc.all_subset_bits(n)
    p = J.prec.matrix
    fj = J.fin_joins
    prec_l = rc.lower_matrix(p, bits, bits)  # C ≺_L A
    # values[A] = {⋁C | C ≺_L A} as a membership row over S
    values = np.zeros((size, n), dtype=bool)
    for A in range(size):
        values[A, np.unique(fj[prec_l[:, A]])] = True
    # A ≤∨ B iff every value of A is ≺ some value of B
    reach = bool_product(values, p.T)  # reach[B, v]: v ≺ some value of B
    le_vee = rc.contained_in(values, reach)
    fin = rc.fin_carrier(J.carrier, cap)
    order, q = rc.poset_reflection(Relation(fin, fin, le_vee))
    prec_vee_full = bool_product(le_vee, prec_l)  # ∃C: A ≤∨ C ≺_L B
    reps = list(q.representatives)
    cls = np.array(q.class_of)
    if not np.array_equal(prec_vee_full, prec_vee_full[np.ix_(reps, reps)][np.ix_(cls, cls)]):
        raise InternalError("≺∨ is not constant on classes")
    qc = q.carrier
    prec_vee = prec_vee_full[np.ix_(reps, reps)]
    join = np.array([[q.class_of[reps[i] | reps[j]] for j in range(len(reps))] for i in range(len(reps))])
    base = ProximityPoset(qc, order, Relation(qc, qc, prec_vee))
    strong = ProximityJSL(base, q.class_of[0], join)
    singles = [q.class_of[1 << a] for a in range(n)]
    r = Relation(qc, J.carrier, prec_vee[:, singles])
    # a s A iff ∃B ≺_L A with a ≺ ⋁B
    s_full = bool_product(p[:, fj], prec_l)
    s = Relation(J.carrier, qc, s_full[:, reps])

    diag = validate_structure(Kind.STRONG, strong)
    if not diag.ok:
        raise InternalError("strengthened structure is not strong", diag.witnesses[0].example)
    for name, got, want in (
        ("s∘r = ≺∨", rc.compose(s, r), strong.prec),
        ("r∘s = ≺", rc.compose(r, s), J.prec),
    ):
        if got != want:
            raise InternalError(f"{name} fails", got.first_difference(want))
    for rel, a, b in ((r, strong, J), (s, J, strong)):
        d = validate_morphism("approximable", rel, a, b)
        if not d.ok:
            raise InternalError("inverse pair is not approximable", d.witnesses[0].example)
    return Strengthening(strong, r, s, q)
