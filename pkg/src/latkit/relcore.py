"""Finite relation algebra.

Carriers are ordered label lists. Finite subsets of a carrier are bit
masks over its indices, so the canonical order of subsets is plain integer
order and ``fin_carrier(C)`` lists subset ``k`` at index ``k``. Relations
are dense boolean matrices indexed (source, target).
"""

from __future__ import annotations

import contextvars
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CarrierMismatch, FinCarrierUnavailable, NotPreorder, SizeCapExceeded

DEFAULT_CAP = 4096
MAX_CARRIER = 1 << 16

_cap_var: contextvars.ContextVar[int | None] = contextvars.ContextVar("latkit_cap", default=None)


def resolve_cap(cap: int | None = None) -> int:
    if cap is not None:
        return cap
    active = _cap_var.get()
    return DEFAULT_CAP if active is None else active


@contextmanager
def size_cap(cap: int):
    """Temporarily change the default cap for everything built inside."""
    token = _cap_var.set(cap)
    try:
        yield
    finally:
        _cap_var.reset(token)


def check_cap(required: int, cap: int | None = None, what: str = "carrier") -> None:
    limit = resolve_cap(cap)
    if required > limit:
        raise SizeCapExceeded(required, limit, what)


# ---------------------------------------------------------------- bit masks

def members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing order, including 0."""
    subs = []
    s = mask
    while True:
        subs.append(s)
        if s == 0:
            break
        s = (s - 1) & mask
    return reversed(subs)


def masks_to_bits(masks: Sequence[int], n: int) -> np.ndarray:
    """Boolean matrix whose row k holds the members of ``masks[k]``."""
    out = np.zeros((len(masks), n), dtype=bool)
    for k, m in enumerate(masks):
        for i in members(m):
            out[k, i] = True
    return out


def bits_to_mask(row: np.ndarray) -> int:
    return mask_of(np.flatnonzero(row).tolist())


def all_subset_bits(n: int) -> np.ndarray:
    """Row k is the membership vector of subset k (all 2^n of them)."""
    ks = np.arange(1 << n, dtype=np.int64)
    return ((ks[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(bool)


def bool_product(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Boolean matrix product: out[i, k] = any_j left[i, j] and right[j, k]."""
    if left.shape[1] == 0:
        return np.zeros((left.shape[0], right.shape[1]), dtype=bool)
    return (left.astype(np.float32) @ right.astype(np.float32)) > 0.5


def contained_in(rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    """out[i, k] is True iff set rows[i] is a subset of set cols[k]."""
    return ~bool_product(rows, ~cols.T)


# ---------------------------------------------------------------- carriers

@dataclass(frozen=True)
class Carrier:
    """An ordered, duplicate-free list of element labels."""

    labels: tuple[str, ...]
    origin: str = "base"

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            seen = set()
            dup = next(x for x in labels if x in seen or seen.add(x))
            raise ValueError(f"duplicate element {dup!r}")
        if len(labels) > MAX_CARRIER:
            raise SizeCapExceeded(len(labels), MAX_CARRIER, "carrier")

    @classmethod
    def of(cls, *labels: str) -> "Carrier":
        return cls(tuple(labels))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.labels)}

    def __len__(self) -> int:
        return len(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not an element of this carrier") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def subset(self, items: Iterable[str | int]) -> "FinSubset":
        return FinSubset(mask_of(i if isinstance(i, int) else self.index(i) for i in items))

    def render(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in members(mask)) + "}"

    def __repr__(self) -> str:
        shown = ", ".join(self.labels[:6]) + (", ..." if len(self.labels) > 6 else "")
        return f"Carrier[{self.origin}]({shown})"


def fin_carrier(base: Carrier, cap: int | None = None) -> Carrier:
    """The carrier of all finite subsets of ``base``, subset k at index k."""
    n = len(base)
    limit = resolve_cap(cap)
    if n >= 63 or (1 << n) > limit:
        raise FinCarrierUnavailable(1 << min(n, 62), limit, f"Fin of a {n}-element carrier")
    return Carrier(tuple(base.render(k) for k in range(1 << n)), origin="fin")


# ---------------------------------------------------------------- subsets

@dataclass(frozen=True, order=True)
class FinSubset:
    """A finite subset of some carrier, stored as a bit mask of indices."""

    mask: int = 0

    @classmethod
    def of(cls, indices: Iterable[int]) -> "FinSubset":
        return cls(mask_of(indices))

    @property
    def members(self) -> tuple[int, ...]:
        return members(self.mask)

    def __iter__(self):
        return iter(members(self.mask))

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __or__(self, other: "FinSubset") -> "FinSubset":
        return FinSubset(self.mask | other.mask)

    def __and__(self, other: "FinSubset") -> "FinSubset":
        return FinSubset(self.mask & other.mask)

    def issubset(self, other: "FinSubset") -> bool:
        return self.mask & ~other.mask == 0

    def overlaps(self, other: "FinSubset") -> bool:
        return bool(self.mask & other.mask)

    def __repr__(self) -> str:
        return "FinSubset{" + ",".join(map(str, self.members)) + "}"


@dataclass(frozen=True)
class FinFamily:
    """A finite family of finite subsets, sorted and duplicate-free."""

    subsets: tuple[FinSubset, ...] = ()

    def __post_init__(self):
        canon = tuple(FinSubset(m) for m in sorted({s.mask for s in self.subsets}))
        object.__setattr__(self, "subsets", canon)

    @classmethod
    def of(cls, items: Iterable[FinSubset | int | Iterable[int]]) -> "FinFamily":
        out = []
        for x in items:
            if isinstance(x, FinSubset):
                out.append(x)
            elif isinstance(x, int):
                out.append(FinSubset(x))
            else:
                out.append(FinSubset.of(x))
        return cls(tuple(out))

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(s.mask for s in self.subsets)

    def __iter__(self):
        return iter(self.subsets)

    def __len__(self) -> int:
        return len(self.subsets)

    def __contains__(self, s: FinSubset) -> bool:
        return s in self.subsets

    def union(self) -> FinSubset:
        m = 0
        for s in self.subsets:
            m |= s.mask
        return FinSubset(m)


def star_masks(family: Iterable[int], cap: int | None = None) -> tuple[int, ...]:
    """Star of a family given as masks, folded in the given order."""
    limit = resolve_cap(cap)
    acc = {0}
    for a in family:
        parts = [c for c in submasks(a) if c]
        acc = {b | c for b in acc for c in parts}
        if len(acc) > limit:
            raise SizeCapExceeded(len(acc), limit, "star of a family")
    return tuple(sorted(acc))


def star(family: FinFamily | Sequence[FinSubset], cap: int | None = None) -> FinFamily:
    """All unions obtained by picking an inhabited part of every member.

    The empty family gives ``{∅}``; a family containing ∅ gives the empty
    family. Members are folded in the order given, which does not affect
    the result.
    """
    return FinFamily.of(star_masks([s.mask for s in family], cap))


def singletons(s: FinSubset) -> FinFamily:
    return FinFamily.of(1 << i for i in s.members)


# ---------------------------------------------------------------- relations

def _frozen(matrix: np.ndarray) -> np.ndarray:
    m = np.array(matrix, dtype=bool, copy=True)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Relation:
    """A binary relation between two finite carriers."""

    source: Carrier
    target: Carrier
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (len(self.source), len(self.target)):
            raise CarrierMismatch(
                f"matrix shape {m.shape} does not match carriers "
                f"({len(self.source)}, {len(self.target)})"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_pairs(cls, source: Carrier, target: Carrier, pairs: Iterable[tuple]) -> "Relation":
        m = np.zeros((len(source), len(target)), dtype=bool)
        for a, b in pairs:
            i = a if isinstance(a, (int, np.integer)) else source.index(a)
            j = b if isinstance(b, (int, np.integer)) else target.index(b)
            m[i, j] = True
        return cls(source, target, m)

    @classmethod
    def identity(cls, carrier: Carrier) -> "Relation":
        return cls(carrier, carrier, np.eye(len(carrier), dtype=bool))

    @classmethod
    def empty(cls, source: Carrier, target: Carrier) -> "Relation":
        return cls(source, target, np.zeros((len(source), len(target)), dtype=bool))

    @classmethod
    def full(cls, source: Carrier, target: Carrier) -> "Relation":
        return cls(source, target, np.ones((len(source), len(target)), dtype=bool))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.matrix.tobytes()))

    def __le__(self, other: "Relation") -> bool:
        _same_sort(self, other)
        return not np.any(self.matrix & ~other.matrix)

    def __or__(self, other: "Relation") -> "Relation":
        _same_sort(self, other)
        return Relation(self.source, self.target, self.matrix | other.matrix)

    def __and__(self, other: "Relation") -> "Relation":
        _same_sort(self, other)
        return Relation(self.source, self.target, self.matrix & other.matrix)

    def holds(self, a: int | str, b: int | str) -> bool:
        i = a if isinstance(a, int) else self.source.index(a)
        j = b if isinstance(b, int) else self.target.index(b)
        return bool(self.matrix[i, j])

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.matrix))]

    def labelled_pairs(self) -> list[tuple[str, str]]:
        return [(self.source.labels[i], self.target.labels[j]) for i, j in self.pairs()]

    def row(self, i: int) -> int:
        return bits_to_mask(self.matrix[i])

    def column(self, j: int) -> int:
        return bits_to_mask(self.matrix[:, j])

    def first_difference(self, other: "Relation") -> tuple[str, str, bool] | None:
        """A pair where the two relations disagree, with this side's value."""
        _same_sort(self, other)
        diff = np.argwhere(self.matrix != other.matrix)
        if len(diff) == 0:
            return None
        i, j = (int(x) for x in diff[0])
        return self.source.labels[i], self.target.labels[j], bool(self.matrix[i, j])

    def __repr__(self) -> str:
        return f"Relation({len(self.source)}x{len(self.target)}, {int(self.matrix.sum())} pairs)"


def _same_sort(r: Relation, s: Relation) -> None:
    if r.source != s.source or r.target != s.target:
        raise CarrierMismatch("relations are between different carriers")


def compose(s: Relation, r: Relation) -> Relation:
    """``s ∘ r``: first ``r``, then ``s``."""
    if r.target != s.source:
        raise CarrierMismatch(f"cannot compose: {r.target!r} is not {s.source!r}")
    return Relation(r.source, s.target, bool_product(r.matrix, s.matrix))


def compose_all(*rels: Relation) -> Relation:
    """``compose_all(t, s, r)`` is ``t ∘ s ∘ r``."""
    out = rels[-1]
    for s in reversed(rels[:-1]):
        out = compose(s, out)
    return out


def converse(r: Relation) -> Relation:
    return Relation(r.target, r.source, r.matrix.T)


def image(r: Relation, subset: FinSubset) -> FinSubset:
    rows = list(subset.members)
    if not rows:
        return FinSubset(0)
    return FinSubset(bits_to_mask(r.matrix[rows].any(axis=0)))


def preimage(r: Relation, subset: FinSubset) -> FinSubset:
    cols = list(subset.members)
    if not cols:
        return FinSubset(0)
    return FinSubset(bits_to_mask(r.matrix[:, cols].any(axis=1)))


def lower_matrix(rel: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Lower extension between explicit lists of sets.

    ``left`` (k x n) and ``right`` (l x m) hold membership rows; the result
    marks (A, B) when every a in A relates to some b in B.
    """
    reach = bool_product(right, rel.T)  # reach[B, a]: a relates into B
    return contained_in(left, reach)


def upper_matrix(rel: np.ndarray, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """Upper extension: (A, B) when every b in B is related from some a in A."""
    reach = bool_product(left, rel)  # reach[A, b]: some a in A relates to b
    return ~bool_product(~reach, right.T)


def lower_extension(r: Relation, cap: int | None = None) -> Relation:
    src, dst = fin_carrier(r.source, cap), fin_carrier(r.target, cap)
    m = lower_matrix(r.matrix, all_subset_bits(len(r.source)), all_subset_bits(len(r.target)))
    return Relation(src, dst, m)


def upper_extension(r: Relation, cap: int | None = None) -> Relation:
    src, dst = fin_carrier(r.source, cap), fin_carrier(r.target, cap)
    m = upper_matrix(r.matrix, all_subset_bits(len(r.source)), all_subset_bits(len(r.target)))
    return Relation(src, dst, m)


# ---------------------------------------------------------------- preorders

def is_reflexive(m: np.ndarray) -> bool:
    return bool(np.all(np.diag(m)))


def is_transitive(m: np.ndarray) -> bool:
    return not np.any(bool_product(m, m) & ~m)


def is_antisymmetric(m: np.ndarray) -> bool:
    both = m & m.T
    return not np.any(both & ~np.eye(len(m), dtype=bool))


def reflexive_transitive_closure(m: np.ndarray) -> np.ndarray:
    out = np.array(m, dtype=bool) | np.eye(len(m), dtype=bool)
    while True:
        nxt = out | bool_product(out, out)
        if np.array_equal(nxt, out):
            return out
        out = nxt


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """A partition of a carrier into classes, each with its least index as
    representative. Classes are listed in order of their representatives."""

    base: Carrier
    class_of: tuple[int, ...]
    representatives: tuple[int, ...]

    @cached_property
    def carrier(self) -> Carrier:
        return Carrier(tuple(self.base.labels[r] for r in self.representatives), origin="quotient")

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.representatives]
        for x, c in enumerate(self.class_of):
            out[c].append(x)
        return tuple(tuple(c) for c in out)

    def as_relation(self) -> Relation:
        m = np.zeros((len(self.base), len(self.representatives)), dtype=bool)
        m[np.arange(len(self.base)), list(self.class_of)] = True
        return Relation(self.base, self.carrier, m)


def poset_reflection(pre: Relation) -> tuple[Relation, QuotientMap]:
    """Collapse a preorder to the partial order on its equivalence classes."""
    if pre.source != pre.target:
        raise CarrierMismatch("a preorder lives on a single carrier")
    m = pre.matrix
    n = len(pre.source)
    labels = pre.source.labels
    for i in range(n):
        if not m[i, i]:
            raise NotPreorder("reflexivity", (labels[i],))
    bad = np.argwhere(bool_product(m, m) & ~m)
    if len(bad):
        i, k = (int(x) for x in bad[0])
        j = int(np.flatnonzero(m[i] & m[:, k])[0])
        raise NotPreorder("transitivity", (labels[i], labels[j], labels[k]))
    equiv = m & m.T
    class_of = [-1] * n
    reps: list[int] = []
    for i in range(n):
        if class_of[i] < 0:
            c = len(reps)
            reps.append(i)
            for j in np.flatnonzero(equiv[i]).tolist():
                class_of[j] = c
    q = QuotientMap(pre.source, tuple(class_of), tuple(reps))
    order = Relation(q.carrier, q.carrier, m[np.ix_(reps, reps)])
    return order, q


# ---------------------------------------------------------------- lower sets

def down_masks(le: np.ndarray) -> list[int]:
    """down_masks(le)[x] is the mask of {y | y <= x}."""
    return [bits_to_mask(le[:, x]) for x in range(len(le))]


def up_masks(le: np.ndarray) -> list[int]:
    return [bits_to_mask(le[x]) for x in range(len(le))]


def lower_sets(le: np.ndarray, cap: int | None = None) -> list[int]:
    """All down-closed subsets of a finite partial order, sorted as masks.

    Walks a linear extension and only adds an element once everything
    strictly below it is present, so every leaf is a distinct lower set.
    """
    n = len(le)
    limit = resolve_cap(cap)
    below = [bits_to_mask(le[:, x]) & ~(1 << x) for x in range(n)]
    order = sorted(range(n), key=lambda x: (bin(below[x]).count("1"), x))
    out: list[int] = []
    stack = [(0, 0)]
    while stack:
        i, cur = stack.pop()
        if i == n:
            out.append(cur)
            if len(out) > limit:
                raise SizeCapExceeded(len(out), limit, "lower sets")
            continue
        x = order[i]
        stack.append((i + 1, cur))
        if below[x] & ~cur == 0:
            stack.append((i + 1, cur | (1 << x)))
    return sorted(out)


def maximal_elements(mask: int, le: np.ndarray) -> int:
    """Members of ``mask`` with nothing strictly above them inside ``mask``."""
    out = 0
    for x in members(mask):
        above = bits_to_mask(le[x]) & ~(1 << x) & mask
        if not above:
            out |= 1 << x
    return out


def minimal_elements(mask: int, le: np.ndarray) -> int:
    out = 0
    for x in members(mask):
        below = bits_to_mask(le[:, x]) & ~(1 << x) & mask
        if not below:
            out |= 1 << x
    return out
