"""Exception types raised by the library."""

from __future__ import annotations

from dataclasses import dataclass


class DivisionError(Exception):
    """Base class for every domain error raised by boltzdiv."""


@dataclass(frozen=True)
class Violation:
    """One broken invariant found while validating a problem.

    ``code`` is a stable machine-readable tag (``"NonPositiveNeed"``,
    ``"RowSumViolation"``, ...); ``path`` locates the offending field using
    the problem-file layout, e.g. ``players[2].need``.
    """

    code: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message} [{self.code}]"


class ValidationError(DivisionError, ValueError):
    def __init__(self, violations: list[Violation]):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"{len(self.violations)} validation error(s):\n{lines}")

    @property
    def codes(self) -> list[str]:
        return [v.code for v in self.violations]


class ProblemSyntaxError(DivisionError, ValueError):
    """Problem text is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class NegativeBeta(DivisionError, ValueError):
    pass


class NonFiniteInput(DivisionError, ValueError):
    pass


class HeterogeneousProblemGiven(DivisionError, ValueError):
    pass


class HomogeneousProblemGiven(DivisionError, ValueError):
    pass


class NegativeShare(DivisionError, ValueError):
    pass


class LengthMismatch(DivisionError, ValueError):
    pass


class ZeroBasisSum(DivisionError, ValueError):
    pass


class InvalidSearchConfig(DivisionError, ValueError):
    pass
