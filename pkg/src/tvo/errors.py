"""Exception types and the validation report shared by all modules."""
from __future__ import annotations

from dataclasses import dataclass, field


class TVOError(Exception):
    """Base class for errors raised by this package."""


class NoPositiveSolution(TVOError):
    pass


class MissingEntry(TVOError):
    """An admissible F-symbol block is absent."""


class MissingFBlock(MissingEntry):
    pass


class TypeMismatch(TVOError):
    """Two morphisms cannot be composed or an argument lives in the wrong Hom space."""


class DimensionMismatch(TVOError):
    pass


class DegenerateSplit(TVOError):
    pass


class NotDiagonal(TVOError):
    pass


class VacuumNotUnique(TVOError):
    pass


class AxiomFailure(TVOError):
    def __init__(self, message, axioms=()):
        super().__init__(message)
        self.axioms = tuple(axioms)


class NonIntegral(TVOError):
    pass


class SchemaError(TVOError):
    pass


class BadInput(TVOError, ValueError):
    pass


class BadCongruence(BadInput):
    pass


class EmptyChain(BadInput):
    pass


@dataclass
class ValidationReport:
    """Collected outcome of a validation pass.

    ``violations`` holds ``(tag, message)`` pairs; a report with no violations is valid.
    ``warnings`` never affect validity. ``residuals`` records the worst numerical
    defect seen per check, which is useful even when everything passes.
    """

    subject: str = ""
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.valid

    def fail(self, tag, message):
        self.violations.append((tag, message))

    def warn(self, tag, message):
        self.warnings.append((tag, message))

    def record(self, name, value):
        value = float(value)
        self.residuals[name] = max(value, self.residuals.get(name, 0.0))

    def tags(self):
        return {t for t, _ in self.violations}

    def merge(self, other: "ValidationReport"):
        self.violations.extend(other.violations)
        self.warnings.extend(other.warnings)
        for k, v in other.residuals.items():
            self.record(k, v)
        self.notes.extend(other.notes)
        return self

    def format(self) -> str:
        lines = [f"{self.subject}: {'valid' if self.valid else 'INVALID'}"]
        for name, value in sorted(self.residuals.items()):
            lines.append(f"  residual {name} = {value:.3e}")
        for tag, msg in self.violations:
            lines.append(f"  FAIL [{tag}] {msg}")
        for tag, msg in self.warnings:
            lines.append(f"  warn [{tag}] {msg}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


class InvalidSystem(SchemaError):
    """A fusion-system file whose ring violates the unit, associativity or duality laws."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
