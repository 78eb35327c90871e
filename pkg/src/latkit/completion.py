"""Ideal and rounded-ideal completions, materialized as finite lattices.

Points are stored extensionally as masks over the base carrier, so two
points are the same exactly when they have the same members.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import numpy as np

from . import relcore as rc
from .errors import InternalError, NotApproximable, NotIdempotent
from .proximity import ProximityJSL, ProximityPoset, Structure, validate_morphism
from .relcore import Carrier, Relation, members

FIRST_PRINCIPLES_LIMIT = 12


@dataclass(frozen=True, eq=False)
class CompletionLattice:
    """A finite lattice-like poset of subsets of ``base``.

    ``joins``/``meets`` are partial tables (``-1`` where no bound exists).
    """

    base: Carrier
    points: tuple[int, ...]
    waybelow: Relation
    joins: np.ndarray
    meets: np.ndarray | None = None
    kind: str = "ideals"

    @cached_property
    def carrier(self) -> Carrier:
        return self.waybelow.source

    @property
    def size(self) -> int:
        return len(self.points)

    @cached_property
    def order(self) -> Relation:
        bits = rc.masks_to_bits(self.points, len(self.base))
        return Relation(self.carrier, self.carrier, rc.contained_in(bits, bits))

    @cached_property
    def index(self) -> dict[int, int]:
        return {m: i for i, m in enumerate(self.points)}

    @cached_property
    def bottom(self) -> int | None:
        le = self.order.matrix
        cands = [i for i in range(self.size) if le[i].all()]
        return cands[0] if cands else None

    @cached_property
    def top(self) -> int | None:
        le = self.order.matrix
        cands = [i for i in range(self.size) if le[:, i].all()]
        return cands[0] if cands else None

    def render(self, i: int) -> str:
        return self.base.render(self.points[i])


def _point_carrier(base: Carrier, points) -> Carrier:
    return Carrier(tuple(base.render(m) for m in points), origin="points")


def bound_tables(le: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force least upper and greatest lower bounds (``-1`` if absent)."""
    k = len(le)
    lub = np.full((k, k), -1, dtype=np.int64)
    glb = np.full((k, k), -1, dtype=np.int64)
    for i in range(k):
        for j in range(i, k):
            ub = np.flatnonzero(le[i] & le[j])
            least = [u for u in ub if le[u, ub].all()]
            if least:
                lub[i, j] = lub[j, i] = least[0]
            lb = np.flatnonzero(le[:, i] & le[:, j])
            greatest = [v for v in lb if le[lb, v].all()]
            if greatest:
                glb[i, j] = glb[j, i] = greatest[0]
    return lub, glb


def is_directed(mask: int, le: np.ndarray) -> bool:
    """Inhabited, and any two members have an upper bound inside."""
    idx = list(members(mask))
    if not idx:
        return False
    sub = le[np.ix_(idx, idx)]
    return bool(rc.bool_product(sub, sub.T).all())


def ideals(P: ProximityPoset, cap: int | None = None) -> list[int]:
    """All ideals of the order: down-closed, inhabited, directed subsets."""
    le = P.le.matrix
    return [m for m in rc.lower_sets(le, cap) if is_directed(m, le)]


def _check_directed_unions(points, le_points: np.ndarray) -> None:
    """Every directed family of points has its union among the points."""
    k = len(points)
    index = set(points)
    if k > FIRST_PRINCIPLES_LIMIT:
        pairs = ((i, j) for i in range(k) for j in range(k))
        for i, j in pairs:
            if le_points[i, j] and (points[i] | points[j]) not in index:
                raise InternalError("directed union missing", (i, j))
        return
    for fam in range(1, 1 << k):
        if is_directed(fam, le_points):
            u = 0
            for i in members(fam):
                u |= points[i]
            if u not in index:
                raise InternalError("directed union is not a point", tuple(members(fam)))


def ideal_completion(P: Structure, cap: int | None = None) -> CompletionLattice:
    P = P.poset
    pts = tuple(ideals(P, cap))
    rc.check_cap(len(pts), cap, "ideal completion")
    c = _point_carrier(P.carrier, pts)
    bits = rc.masks_to_bits(pts, P.n)
    le = rc.contained_in(bits, bits)
    _check_directed_unions(pts, le)
    # I ≪ J iff I ⊆ ↓a for some a in J
    down = rc.masks_to_bits(P.down_le, P.n)
    wb = rc.bool_product(rc.contained_in(bits, down), bits.T)
    lub, _ = bound_tables(le)
    return CompletionLattice(P.carrier, pts, Relation(c, c, wb), lub, kind="ideals")


def rounded_ideals_by_image(S: ProximityPoset, cap: int | None = None) -> list[int]:
    """{↓≺I | I an ideal}."""
    return sorted({S.down_prec_of(i) for i in ideals(S, cap)})


def rounded_ideals_by_predicate(S: ProximityPoset, cap: int | None = None) -> list[int]:
    """Down-closed, directed, inhabited subsets I with a ∈ I ⟺ a ≺ b for some b ∈ I."""
    le = S.le.matrix
    out = []
    for m in rc.lower_sets(le, cap):
        if is_directed(m, le) and S.down_prec_of(m) == m:
            out.append(m)
    return out


def rounded_ideal_completion(S: Structure, cap: int | None = None) -> CompletionLattice:
    P = S.poset
    by_image = rounded_ideals_by_image(P, cap)
    by_pred = rounded_ideals_by_predicate(P, cap)
    if by_image != by_pred:
        diff = sorted(set(by_image) ^ set(by_pred))
        raise InternalError("rounded ideals disagree", tuple(P.render(m) for m in diff[:2]))
    pts = tuple(by_image)
    rc.check_cap(len(pts), cap, "rounded ideal completion")
    c = _point_carrier(P.carrier, pts)
    bits = rc.masks_to_bits(pts, P.n)
    le = rc.contained_in(bits, bits)
    down = rc.masks_to_bits(P.down_prec, P.n)
    wb = rc.bool_product(rc.contained_in(bits, down), bits.T)
    lub, _ = bound_tables(le)
    if isinstance(S, ProximityJSL):
        formula = rounded_joins(S, pts)
        if not np.array_equal(formula, lub):
            i, j = np.argwhere(formula != lub)[0]
            raise InternalError("join formula is not the least upper bound", (c.labels[i], c.labels[j]))
    return CompletionLattice(P.carrier, pts, Relation(c, c, wb), lub, kind="rounded ideals")


def rounded_joins(J: ProximityJSL, pts) -> np.ndarray:
    """0 = ↓≺0 and I ∨ J = ⋃ ↓≺(a∨b), as indices into ``pts``."""
    index = {m: i for i, m in enumerate(pts)}
    out = np.full((len(pts), len(pts)), -1, dtype=np.int64)
    for i, I in enumerate(pts):
        for j, K in enumerate(pts):
            u = 0
            for a in members(I):
                for b in members(K):
                    u |= J.base.down_prec[int(J.join[a, b])]
            out[i, j] = index.get(u, -1)
    return out


def rounded_bottom(J: ProximityJSL, L: CompletionLattice) -> int:
    return L.index[J.base.down_prec[J.bottom]]


# ---------------------------------------------------------------- way-below

def _directed_families(le: np.ndarray):
    k = len(le)
    for fam in range(1, 1 << k):
        if is_directed(fam, le):
            yield fam


def waybelow_first_principles(L: CompletionLattice) -> Relation | None:
    """I ≪ J iff whenever J ≤ ⋁U for a directed U, some member of U is above I.

    Only for lattices with at most ``FIRST_PRINCIPLES_LIMIT`` points.
    """
    k = L.size
    if k > FIRST_PRINCIPLES_LIMIT:
        return None
    le = L.order.matrix
    wb = np.ones((k, k), dtype=bool)
    for fam in _directed_families(le):
        idx = list(members(fam))
        ub = le[idx].all(axis=0)
        sup = [u for u in np.flatnonzero(ub) if le[u, ub].all()]
        if not sup:
            continue
        covered = le[:, sup[0]]  # J ≤ ⋁U
        reached = le[:, idx].any(axis=1)  # I ≤ some Z in U
        wb[np.ix_(~reached, covered)] = False
    return Relation(L.carrier, L.carrier, wb)


# ---------------------------------------------------------------- frames

@dataclass(frozen=True)
class FrameReport:
    has_finite_meets: bool
    has_finite_joins: bool
    is_distributive: bool
    is_frame: bool
    meet_formula_agrees: bool | None
    witness: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "has_finite_meets": self.has_finite_meets,
            "has_finite_joins": self.has_finite_joins,
            "is_distributive": self.is_distributive,
            "is_frame": self.is_frame,
            "meet_formula_agrees": self.meet_formula_agrees,
            "witness": list(self.witness),
        }


def formula_meets(S: ProximityPoset, L: CompletionLattice) -> tuple[int | None, np.ndarray]:
    """1 = ↓≺S and I ∧ J = ↓≺(I ∩ J), as indices (``-1``/None when the set
    is not a point)."""
    full = (1 << S.n) - 1
    top = L.index.get(S.down_prec_of(full))
    k = L.size
    out = np.full((k, k), -1, dtype=np.int64)
    for i, I in enumerate(L.points):
        for j, K in enumerate(L.points):
            out[i, j] = L.index.get(S.down_prec_of(I & K), -1)
    return top, out


def frame_analysis(L: CompletionLattice, S: Structure | None = None) -> FrameReport:
    """Decide finite meets, distributivity and frame-hood by brute force.

    When the structure ``S`` behind a rounded-ideal lattice is given, the
    meet formulas are evaluated too; wherever a greatest lower bound exists
    the formula has to produce it.
    """
    le = L.order.matrix
    lub, glb = bound_tables(le)
    k = L.size
    top, bottom = L.top, L.bottom
    has_meets = top is not None and bool((glb >= 0).all())
    has_joins = bottom is not None and bool((lub >= 0).all())
    agrees = None
    witness: tuple[str, ...] = ()
    if S is not None:
        ftop, fmeet = formula_meets(S.poset, L)
        agrees = True
        if top is not None and ftop != top:
            agrees = False
        defined = glb >= 0
        if np.any(defined & (fmeet != glb)):
            agrees = False
        if not agrees:
            raise InternalError("meet formula differs from the greatest lower bound")
    distributive = has_meets and has_joins
    if distributive:
        for a in range(k):
            for b in range(k):
                for c in range(k):
                    left = glb[a, lub[b, c]]
                    right = lub[glb[a, b], glb[a, c]]
                    if left != right:
                        distributive = False
                        witness = (L.render(a), L.render(b), L.render(c))
                        break
                if not distributive:
                    break
            if not distributive:
                break
    if not has_meets and not witness:
        missing = np.argwhere(glb < 0)
        witness = ("no top",) if top is None else ("no meet", L.render(missing[0][0]), L.render(missing[0][1]))
    return FrameReport(has_meets, has_joins, distributive, has_meets and has_joins and distributive, agrees, witness)


# ---------------------------------------------------------------- maps

@dataclass(frozen=True, eq=False)
class LatticeMap:
    source: CompletionLattice
    target: CompletionLattice
    table: tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.table[i]

    def is_monotone(self) -> bool:
        s, t = self.source.order.matrix, self.target.order.matrix
        return all(t[self.table[i], self.table[j]] for i, j in zip(*np.nonzero(s)))

    def then(self, g: "LatticeMap") -> "LatticeMap":
        """``g`` after ``self``."""
        return LatticeMap(self.source, g.target, tuple(g.table[x] for x in self.table))

    def preserves_joins(self) -> tuple[bool, tuple]:
        s, t = self.source, self.target
        if s.bottom is not None and (t.bottom is None or self.table[s.bottom] != t.bottom):
            return False, ("0",)
        for i in range(s.size):
            for j in range(s.size):
                u = s.joins[i, j]
                if u < 0:
                    continue
                v = t.joins[self.table[i], self.table[j]]
                if v != self.table[u]:
                    return False, (s.render(i), s.render(j))
        return True, ()

    def preserves_meets(self) -> tuple[bool, tuple]:
        s, t = self.source, self.target
        _, sg = bound_tables(s.order.matrix)
        _, tg = bound_tables(t.order.matrix)
        if s.top is not None and (t.top is None or self.table[s.top] != t.top):
            return False, ("1",)
        for i in range(s.size):
            for j in range(s.size):
                m = sg[i, j]
                if m < 0:
                    continue
                if tg[self.table[i], self.table[j]] != self.table[m]:
                    return False, (s.render(i), s.render(j))
        return True, ()


def identity_map(L: CompletionLattice) -> LatticeMap:
    return LatticeMap(L, L, tuple(range(L.size)))


def interpret_relation(
    r: Relation,
    src: Structure,
    dst: Structure,
    src_lattice: CompletionLattice | None = None,
    dst_lattice: CompletionLattice | None = None,
) -> LatticeMap:
    """The function RIdl(dst) → RIdl(src), I ↦ r⁻I, of an approximable ``r``."""
    diag = validate_morphism("approximable", r, src, dst)
    if not diag.ok:
        raise NotApproximable(diag.summary())
    Ls = src_lattice or rounded_ideal_completion(src)
    if dst_lattice is None:
        dst_lattice = Ls if dst is src else rounded_ideal_completion(dst)
    Ld = dst_lattice
    table = []
    for I in Ld.points:
        pre = rc.preimage(r, rc.FinSubset(I)).mask
        if pre not in Ls.index:
            raise InternalError("r⁻I is not a rounded ideal", (Ld.base.render(I),))
        table.append(Ls.index[pre])
    f = LatticeMap(Ld, Ls, tuple(table))
    if not f.is_monotone():
        raise InternalError("interpretation is not monotone")
    for i in range(Ld.size):
        for j in range(Ld.size):
            if Ld.order.matrix[i, j] and Ld.points[i] | Ld.points[j] != Ld.points[j]:
                raise InternalError("directed union mismatch")
    return f


def split_idempotent(f: LatticeMap) -> CompletionLattice:
    """The image D_f of a monotone idempotent, with its own way-below and joins."""
    L = f.source
    if f.target.points != L.points:
        raise NotIdempotent("source and target differ")
    for i in range(L.size):
        if f.table[f.table[i]] != f.table[i]:
            raise NotIdempotent(f"f(f({L.render(i)})) ≠ f({L.render(i)})")
    if not f.is_monotone():
        raise NotIdempotent("map is not monotone")
    image = sorted(set(f.table))
    pts = tuple(L.points[i] for i in image)
    c = Carrier(tuple(L.carrier.labels[i] for i in image), origin="points")
    le = L.order.matrix
    wbL = L.waybelow.matrix
    k = len(image)
    # f(a) ≪_f f(b) iff f(a) ≤ f(c) and c ≪ f(b) for some c
    wb = np.zeros((k, k), dtype=bool)
    for x, fa in enumerate(image):
        for y, fb in enumerate(image):
            wb[x, y] = any(le[fa, f.table[cc]] and wbL[cc, fb] for cc in range(L.size))
    sub_le = le[np.ix_(image, image)]
    lub, _ = bound_tables(sub_le)
    D = CompletionLattice(L.base, pts, Relation(c, c, wb), lub, kind="split")
    brute = waybelow_first_principles(D)
    if brute is not None and not np.array_equal(brute.matrix, wb):
        raise InternalError("way-below of the split differs from first principles")
    if L.bottom is not None and (L.joins >= 0).all():
        pos = {i: x for x, i in enumerate(image)}
        if D.bottom != pos[f.table[L.bottom]]:
            raise InternalError("0_f is not the bottom of the split")
        for x, fa in enumerate(image):
            for y, fb in enumerate(image):
                want = pos[f.table[L.joins[fa, fb]]]
                if lub[x, y] != want:
                    raise InternalError("∨_f is not the join of the split", (c.labels[x], c.labels[y]))
    return D


def same_lattice_shape(a: CompletionLattice, b: CompletionLattice) -> bool:
    """Whether the two point-orders are isomorphic (brute force, small only)."""
    from itertools import permutations

    if a.size != b.size:
        return False
    A, B = a.order.matrix, b.order.matrix
    if sorted(A.sum(axis=0)) != sorted(B.sum(axis=0)):
        return False
    for perm in permutations(range(b.size)):
        if np.array_equal(A, B[np.ix_(perm, perm)]):
            return True
    return False
