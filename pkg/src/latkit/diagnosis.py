"""Verdicts with counterexamples.

A ``Diagnosis`` is what every validator returns. It fails exactly when it
holds at least one witness; each witness names the violated axiom and the
elements (by label) that violate it.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    axiom: str
    example: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"axiom": self.axiom, "example": list(self.example)}


@dataclass(frozen=True)
class Diagnosis:
    witnesses: tuple[Witness, ...] = ()
    checked: tuple[str, ...] = ()
    skipped: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.witnesses

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"

    def __bool__(self) -> bool:
        return self.ok

    def failed_axioms(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(w.axiom for w in self.witnesses))

    def merge(self, *others: "Diagnosis") -> "Diagnosis":
        parts = (self, *others)
        return Diagnosis(
            witnesses=tuple(w for d in parts for w in d.witnesses),
            checked=tuple(dict.fromkeys(c for d in parts for c in d.checked)),
            skipped=tuple(s for d in parts for s in d.skipped),
            notes=tuple(n for d in parts for n in d.notes),
        )

    def summary(self) -> str:
        if self.ok:
            text = f"pass ({len(self.checked)} axioms)"
        else:
            w = self.witnesses[0]
            text = f"fail: {w.axiom} at ({', '.join(w.example)})"
        if self.skipped:
            text += f"; {len(self.skipped)} skipped"
        return text

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "checked": list(self.checked),
            "witnesses": [w.to_dict() for w in self.witnesses],
            "skipped": list(self.skipped),
            "notes": list(self.notes),
        }


@dataclass
class Checker:
    """Accumulates axiom checks; keeps the first counterexample per axiom."""

    witnesses: list[Witness] = field(default_factory=list)
    checked: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    _seen: set = field(default_factory=set)

    def axiom(self, name: str) -> None:
        if name not in self.checked:
            self.checked.append(name)

    def fail(self, name: str, *example) -> None:
        self.axiom(name)
        if name in self._seen:
            return
        self._seen.add(name)
        self.witnesses.append(Witness(name, tuple(str(e) for e in example)))

    def require(self, name: str, condition: bool, *example) -> bool:
        self.axiom(name)
        if not condition:
            self.fail(name, *example)
        return bool(condition)

    def absorb(self, diagnosis: Diagnosis, prefix: str = "") -> None:
        for c in diagnosis.checked:
            self.axiom(prefix + c)
        for w in diagnosis.witnesses:
            self.fail(prefix + w.axiom, *w.example)
        self.skipped.extend(diagnosis.skipped)
        self.notes.extend(diagnosis.notes)

    def failed(self, name: str) -> bool:
        return name in self._seen

    def done(self) -> Diagnosis:
        return Diagnosis(
            witnesses=tuple(self.witnesses),
            checked=tuple(self.checked),
            skipped=tuple(self.skipped),
            notes=tuple(self.notes),
        )
