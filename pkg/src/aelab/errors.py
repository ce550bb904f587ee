"""Exception types shared across the package."""

from __future__ import annotations


class AelabError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(AelabError):
    """A configured enumeration cap (atoms, interpretations, kernels) was hit."""


class ParseError(AelabError):
    """Concrete-syntax error; positions are 1-based."""

    def __init__(self, line: int, column: int, expected: str):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(f"{line}:{column}: expected {expected}")


class SemanticError(AelabError):
    """Well-formed syntax that violates a side condition (free variables, equality in rules)."""


class GroundingError(AelabError):
    """A program with variables cannot be grounded because the signature has no names."""


class NotNormal(AelabError):
    """A normal-program-only embedding was applied to a disjunctive rule."""


class NotGHorn(AelabError):
    """Skolemization input falls outside the generalized Horn fragment."""


class NotNamed(AelabError):
    """Model intersection requires interpretations in which every individual is named."""


class ModalNotAllowed(AelabError):
    """An operation on objective theories received a formula with the belief operator."""


class ModalScopeTooRich(AelabError):
    """A kernel-lookup oracle met a belief atom whose scope is not an atomic formula."""


class InconsistentKernel(AelabError):
    """A modal membership law was applied to an inconsistent expansion."""
