"""Slow, definition-by-definition reference implementations.

Everything here works on plain Python sets of ints and tuples so that the
tests never lean on the numpy code paths they are checking.
"""

from __future__ import annotations

from itertools import chain, combinations, permutations, product


def subsets(xs):
    xs = sorted(xs)
    return [frozenset(c) for c in chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))]


def inhabited_subsets(xs):
    return [s for s in subsets(xs) if s]


def to_mask(s) -> int:
    return sum(1 << i for i in s)


def from_mask(m: int) -> frozenset:
    return frozenset(i for i in range(m.bit_length()) if m >> i & 1)


def pairs_of(rel) -> set:
    """A library Relation as a set of index pairs."""
    return {(int(a), int(b)) for a, b in rel.pairs()}


# ------------------------------------------------------------- relations

def compose(s: set, r: set) -> set:
    """First r, then s."""
    return {(a, c) for (a, b) in r for (b2, c) in s if b == b2}


def lower_ext(r: set, A, B) -> bool:
    return all(any((a, b) in r for b in B) for a in A)


def upper_ext(r: set, A, B) -> bool:
    return all(any((a, b) in r for a in A) for b in B)


def star(family) -> set:
    """The inductive definition, folding members in the order given."""
    acc = {frozenset()}
    for A in family:
        acc = {B | C for B in acc for C in inhabited_subsets(A)}
    return acc


def family_lower_of_upper(r: set, U, V) -> bool:
    """U (r_L)_U V: every member of V is r_L-above some member of U."""
    return all(any(lower_ext(r, A, B) for A in U) for B in V)


def family_upper_of_lower(r: set, U, V) -> bool:
    """U (r_U)_L V: every member of U is r_U-below some member of V."""
    return all(any(upper_ext(r, A, B) for B in V) for A in U)


def refined_by(X, Y) -> bool:
    """Every member of Y contains a member of X."""
    return all(any(x <= y for x in X) for y in Y)


# ------------------------------------------------------------- orders

def rt_closure(n: int, pairs) -> set:
    rel = {(i, i) for i in range(n)} | set(pairs)
    while True:
        extra = compose(rel, rel) - rel
        if not extra:
            return rel
        rel |= extra


def is_partial_order(n: int, le: set) -> bool:
    refl = all((i, i) in le for i in range(n))
    trans = compose(le, le) <= le
    anti = all(a == b for (a, b) in le if (b, a) in le)
    return refl and trans and anti


def down(rel: set, b) -> frozenset:
    return frozenset(a for (a, c) in rel if c == b)


def up(rel: set, a) -> frozenset:
    return frozenset(c for (b, c) in rel if b == a)


def is_directed(I, le: set) -> bool:
    return bool(I) and all(any((x, z) in le and (y, z) in le for z in I) for x in I for y in I)


def is_rounded_ideal(I, le: set, prec: set) -> bool:
    down_closed = all(a in I for b in I for a in down(le, b))
    rounded = all((b in I) == any((b, c) in prec for c in I) for b in {a for a, _ in le})
    return down_closed and is_directed(I, le) and rounded


def is_rounded_upper(U, le: set, prec: set) -> bool:
    up_closed = all(c in U for b in U for c in up(le, b))
    rounded = all((b in U) == any((c, b) in prec for c in U) for b in {a for a, _ in le})
    return up_closed and rounded


def is_proximity_poset(n: int, le: set, prec: set) -> bool:
    if not is_partial_order(n, le):
        return False
    if compose(prec, prec) != prec:
        return False
    return all(
        is_rounded_ideal(down(prec, a), le, prec) and is_rounded_upper(up(prec, a), le, prec)
        for a in range(n)
    )


def lub(n: int, le: set, xs):
    ubs = [z for z in range(n) if all((x, z) in le for x in xs)]
    least = [z for z in ubs if all((z, w) in le for w in ubs)]
    return least[0] if least else None


def is_jsl(n: int, le: set) -> bool:
    return all(lub(n, le, xs) is not None for xs in subsets(range(n)))


def is_strong(n: int, le: set, prec: set) -> bool:
    bottom = lub(n, le, ())
    if any((a, bottom) in prec and a != bottom for a in range(n)):
        return False
    for a, b, c in product(range(n), repeat=3):
        if (a, lub(n, le, (b, c))) in prec:
            if not any(
                (b1, b) in prec and (c1, c) in prec and (a, lub(n, le, (b1, c1))) in le
                for b1 in range(n)
                for c1 in range(n)
            ):
                return False
    return True


def isomorphic(n: int, rels_a, rels_b) -> bool:
    """Some permutation carries every relation of a onto the matching one of b."""
    for p in permutations(range(n)):
        if all({(p[x], p[y]) for x, y in ra} == rb for ra, rb in zip(rels_a, rels_b)):
            return True
    return False


def iso_classes(n: int, structures) -> list:
    reps: list = []
    for s in structures:
        if not any(isomorphic(n, s, r) for r in reps):
            reps.append(s)
    return reps


def labelled_posets(n: int):
    strict = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    for chosen in subsets(strict):
        le = frozenset(rt_closure(n, chosen))
        if le not in seen and is_partial_order(n, le):
            seen.add(le)
            yield set(le)


# ------------------------------------------------------------- lattices

def rounded_ideals(n: int, le: set, prec: set) -> list[frozenset]:
    return [I for I in subsets(range(n)) if is_rounded_ideal(I, le, prec)]


def lattice_report(points) -> dict:
    """Meets, joins and distributivity of a finite family under inclusion."""
    pts = list(points)

    def bound(xs, below: bool):
        if below:
            cands = [z for z in pts if all(z <= x for x in xs)]
            best = [z for z in cands if all(w <= z for w in cands)]
        else:
            cands = [z for z in pts if all(x <= z for x in xs)]
            best = [z for z in cands if all(z <= w for w in cands)]
        return best[0] if best else None

    meets_ok = bound([], True) is not None and all(bound((x, y), True) is not None for x in pts for y in pts)
    joins_ok = bound([], False) is not None and all(bound((x, y), False) is not None for x in pts for y in pts)
    distributive = meets_ok and joins_ok and all(
        bound((x, bound((y, z), False)), True) == bound((bound((x, y), True), bound((x, z), True)), False)
        for x in pts
        for y in pts
        for z in pts
    )
    return {"meets": meets_ok, "joins": joins_ok, "distributive": distributive}


# ------------------------------------------------------------- covers

def cut_compose(s: set, r: set, m: int) -> set:
    """a (s·r) C iff a r B and b s C for every b in B, for some B.

    ``r`` and ``s`` are sets of (element, frozenset) pairs; ``m`` is the
    size of the carrier the sets C live in."""
    out = set()
    for (a, B) in r:
        for C in subsets(range(m)):
            if all((b, C) in s for b in B):
                out.add((a, C))
    return out


def is_finitary_cover(n: int, cov: set) -> bool:
    every = subsets(range(n))
    refl = all((a, A) in cov for A in every for a in A)
    weak = all((a, B) in cov for (a, A) in cov for B in every if A <= B)
    cut = all(
        (a, B) in cov
        for (a, A) in cov
        for B in every
        if all((b, B) in cov for b in A)
    )
    return refl and weak and cut


def basic_saturation(n: int, axioms, U) -> frozenset:
    sat = set(U)
    changed = True
    while changed:
        changed = False
        for a, V in axioms:
            if a not in sat and set(V) <= sat:
                sat.add(a)
                changed = True
    return frozenset(sat)
