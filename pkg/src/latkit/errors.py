"""Exception types shared by every latkit module.

Axiom failures are never raised; they come back as a ``Diagnosis``.
The exceptions here cover misuse (wrong carriers, wrong sorts), size
limits, and internal disagreements between two routes that are supposed
to compute the same thing.
"""

from __future__ import annotations


class LatkitError(Exception):
    """Base class for all latkit errors."""


class CarrierMismatch(LatkitError):
    pass


class SizeCapExceeded(LatkitError):
    """A construction would materialize more elements than the cap allows."""

    def __init__(self, required: int, cap: int, what: str = "carrier"):
        self.required = required
        self.cap = cap
        self.what = what
        super().__init__(f"{what} needs {required} elements, cap is {cap}")


class FinCarrierUnavailable(SizeCapExceeded):
    pass


class NotPreorder(LatkitError):
    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"not a preorder ({axiom}): {witness}")


class KindUnavailable(LatkitError):
    pass


class NotStrong(LatkitError):
    pass


class NotApproximable(LatkitError):
    pass


class NotApproximableMap(LatkitError):
    pass


class NotIdempotent(LatkitError):
    pass


class NoCoalgebra(LatkitError):
    pass


class SortMismatch(LatkitError):
    pass


class InternalError(LatkitError):
    """Two computations that must agree did not. Carries the witness."""

    def __init__(self, message: str, witness: tuple = ()):
        self.witness = witness
        super().__init__(f"{message}: {witness}" if witness else message)


class ParseError(LatkitError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class ValidationError(LatkitError):
    def __init__(self, kind: str, diagnosis):
        self.kind = kind
        self.diagnosis = diagnosis
        super().__init__(f"structure is not a valid {kind}: {diagnosis.summary()}")
