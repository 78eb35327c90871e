"""Exhaustive enumeration of small structures up to isomorphism.

On a finite poset a proximity relation is the same thing as a monotone
idempotent map f with ``a ≺ b iff a ≤ f(b)``; the enumerator walks those
maps instead of all 2^(n²) relations. ``proximity_relations_brute`` keeps
the slow route around for cross-checking.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator

import numpy as np

from .errors import KindUnavailable, SizeCapExceeded
from .proximity import Kind, ProximityJSL, ProximityPoset, is_localized, lub_table, validate_structure
from .relcore import Carrier, is_antisymmetric, is_transitive

LABELS = "abcdefgh"
MAX_PROXIMITY_SIZE = 4


def labels(n: int) -> tuple[str, ...]:
    return tuple(LABELS[:n])


@lru_cache(maxsize=None)
def _perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(n)))


def canonical_key(*matrices: np.ndarray) -> tuple[bytes, tuple[int, ...]]:
    """Largest bit string over all relabelings, and the relabeling achieving it.

    Maximizing puts ``le`` as close to upper-triangular as possible, so the
    canonical labeling is a linear extension and the bottom gets index 0.
    """
    n = len(matrices[0])
    best, best_p = None, None
    for p in _perms(n):
        idx = np.array(p, dtype=int)
        key = b"".join(np.packbits(m[np.ix_(idx, idx)]).tobytes() for m in matrices)
        if best is None or key > best:
            best, best_p = key, p
    return best, best_p


def _relabel(m: np.ndarray, p: tuple[int, ...]) -> np.ndarray:
    idx = np.array(p, dtype=int)
    return np.ascontiguousarray(m[np.ix_(idx, idx)])


# ---------------------------------------------------------------- posets

def labelled_posets(n: int) -> Iterator[np.ndarray]:
    off = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for code in range(1 << (2 * len(off))):
        le = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(off):
            if (code >> (2 * k)) & 1:
                le[i, j] = True
            if (code >> (2 * k + 1)) & 1:
                le[j, i] = True
        if is_antisymmetric(le) and is_transitive(le):
            yield le


@lru_cache(maxsize=None)
def poset_classes(n: int) -> tuple[np.ndarray, ...]:
    """One canonical order matrix per isomorphism class of n-element posets."""
    seen = {}
    for le in labelled_posets(n):
        key, p = canonical_key(le)
        if key not in seen:
            m = _relabel(le, p)
            m.setflags(write=False)
            seen[key] = m
    return tuple(seen[k] for k in sorted(seen, reverse=True))


def _is_jsl(le: np.ndarray) -> bool:
    bottom, join = lub_table(le)
    return bottom is not None and join is not None


def jsl_classes(n: int) -> tuple[np.ndarray, ...]:
    return tuple(le for le in poset_classes(n) if _is_jsl(le))


# ---------------------------------------------------------------- proximity

def monotone_idempotents(le: np.ndarray) -> Iterator[tuple[int, ...]]:
    n = len(le)
    for f in product(range(n), repeat=n):
        if any(f[f[a]] != f[a] for a in range(n)):
            continue
        if all(le[f[a], f[b]] for a in range(n) for b in range(n) if le[a, b]):
            yield f


def prec_of_map(le: np.ndarray, f: tuple[int, ...]) -> np.ndarray:
    return le[:, list(f)]


def proximity_relations(le: np.ndarray) -> list[np.ndarray]:
    return [prec_of_map(le, f) for f in monotone_idempotents(le)]


def proximity_relations_brute(le: np.ndarray) -> list[np.ndarray]:
    """Every relation passing the proximity-poset validator. Slow."""
    n = len(le)
    car = Carrier(labels(n))
    out = []
    for code in range(1 << (n * n)):
        m = np.array([(code >> k) & 1 for k in range(n * n)], dtype=bool).reshape(n, n)
        S = ProximityPoset.from_matrices(car, le, m)
        if validate_structure(Kind.PROXIMITY_POSET, S).ok:
            out.append(m)
    return out


@dataclass(frozen=True)
class Instance:
    kind: str
    index: int
    structure: ProximityPoset | ProximityJSL
    flags: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return self.structure.n


def automorphisms(le: np.ndarray) -> list[tuple[int, ...]]:
    return [p for p in _perms(len(le)) if np.array_equal(_relabel(le, p), le)]


def _classes_with_prec(n: int, jsl_only: bool) -> list[tuple[np.ndarray, np.ndarray]]:
    """Canonical (≤, ≺) pairs. The orders are already canonical, so the
    relabelings maximizing the joint key are the automorphisms of ≤."""
    seen = {}
    bases = jsl_classes(n) if jsl_only else poset_classes(n)
    for le in bases:
        le_key = np.packbits(le).tobytes()
        autos = automorphisms(le)
        for prec in proximity_relations(le):
            best, best_p = max((np.packbits(_relabel(prec, p)).tobytes(), p) for p in autos)
            key = le_key + best
            if key not in seen:
                seen[key] = (le, _relabel(prec, best_p))
    return [seen[k] for k in sorted(seen, reverse=True)]


def _flags(S: ProximityPoset | ProximityJSL) -> dict:
    from .completion import frame_analysis, rounded_ideal_completion
    from .powerlocale import coalgebra_structure

    flags = {}
    if isinstance(S, ProximityJSL):
        strong = validate_structure(Kind.STRONG, S).ok
        flags["strong"] = strong
        flags["localized"] = is_localized(S, "basic").ok if strong else None
    flags["frame"] = frame_analysis(rounded_ideal_completion(S)).is_frame
    flags["upper_coalgebra"] = coalgebra_structure(S.poset, "upper", search=False) is not None
    return flags


def enumerate_structures(kind: Kind | str, size: int, flags: bool = True) -> list[Instance]:
    """All instances of exactly ``size`` elements, one per isomorphism class,
    in canonical order."""
    kind = Kind(kind)
    if kind.needs_prec and size > MAX_PROXIMITY_SIZE:
        raise SizeCapExceeded(size, MAX_PROXIMITY_SIZE, "proximity enumeration size")
    car = Carrier(labels(size))
    out: list[Instance] = []
    if kind == Kind.POSET:
        for le in poset_classes(size):
            out.append(Instance(kind.value, len(out), ProximityPoset.from_matrices(car, le)))
        return out
    if kind == Kind.JSL:
        for le in jsl_classes(size):
            J = ProximityJSL.from_base(ProximityPoset.from_matrices(car, le))
            out.append(Instance(kind.value, len(out), J))
        return out
    if kind == Kind.PROXIMITY_POSET:
        for le, prec in _classes_with_prec(size, jsl_only=False):
            S = ProximityPoset.from_matrices(car, le, prec)
            out.append(Instance(kind.value, len(out), S, _flags(S) if flags else {}))
        return out
    for le, prec in _classes_with_prec(size, jsl_only=True):
        J = ProximityJSL.from_base(ProximityPoset.from_matrices(car, le, prec))
        if not validate_structure(Kind.PROXIMITY_JSL, J).ok:
            continue
        f = _flags(J) if flags or kind != Kind.PROXIMITY_JSL else {}
        if kind in (Kind.STRONG, Kind.LOCALIZED) and not f["strong"]:
            continue
        if kind == Kind.LOCALIZED and not f["localized"]:
            continue
        out.append(Instance(kind.value, len(out), J, f))
    return out


def catalog(kind: Kind | str, max_size: int, min_size: int = 1, flags: bool = True) -> list[Instance]:
    """Instances of every size from ``min_size`` to ``max_size``, renumbered."""
    out: list[Instance] = []
    for n in range(min_size, max_size + 1):
        for inst in enumerate_structures(kind, n, flags):
            out.append(Instance(inst.kind, len(out), inst.structure, inst.flags))
    return out


def sample_proximity_posets(size: int, count: int, seed: int = 0) -> list[ProximityPoset]:
    """Random labelled proximity posets: a random order, then a random
    monotone idempotent map on it."""
    rng = random.Random(seed)
    orders = list(labelled_posets(size))
    car = Carrier(labels(size))
    out = []
    for _ in range(count):
        le = orders[rng.randrange(len(orders))]
        maps = list(monotone_idempotents(le))
        f = maps[rng.randrange(len(maps))]
        out.append(ProximityPoset.from_matrices(car, le, prec_of_map(le, f)))
    return out


def isomorphic(a: ProximityPoset | ProximityJSL, b: ProximityPoset | ProximityJSL) -> bool:
    """Brute-force structure isomorphism (≤ and ≺ both preserved)."""
    if a.n != b.n:
        return False
    la, pa = a.le.matrix, a.prec.matrix
    lb, pb = b.le.matrix, b.prec.matrix
    for p in _perms(a.n):
        if np.array_equal(_relabel(la, p), lb) and np.array_equal(_relabel(pa, p), pb):
            return True
    return False


def instance_record(inst: Instance) -> dict:
    from .fileformat import to_json

    return {"kind": inst.kind, "index": inst.index, "size": inst.size, "flags": inst.flags, "structure": to_json(inst.structure, inst.kind)}


def write_catalog(instances: list[Instance], path) -> None:
    """Newline-delimited JSON, one instance record per line."""
    import json

    with open(path, "w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(instance_record(inst), ensure_ascii=False, sort_keys=True) + "\n")


def load_catalog(path) -> list[Instance]:
    import json

    from .fileformat import from_json

    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            doc = from_json(rec["structure"])
            out.append(Instance(rec["kind"], rec["index"], doc.structure, rec.get("flags", {})))
    return out


def require_kind(name: str) -> Kind:
    try:
        return Kind(name)
    except ValueError:
        raise KindUnavailable(f"unknown structure kind {name!r}") from None
