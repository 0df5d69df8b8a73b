"""
Errors - Exception hierarchy shared by the VelociLogic modules.

Negative results (Unsat, Countermodel, Invalid, Unknown) are returned as
values; exceptions are reserved for malformed input and resource guards.
Module-specific errors (proof syntax, Datalog, BDD, puzzle specs) live next
to the code that raises them and derive from LogicError.
"""

from typing import Optional


class LogicError(Exception):
    """Base class for every VelociLogic error."""
    pass


# ─────────────────────────────────────────────────────────────────────────────
# Input errors
# ─────────────────────────────────────────────────────────────────────────────

class FormulaSyntaxError(LogicError):
    """Formula text could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None,
                 column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ArityError(LogicError):
    """A predicate or function symbol was used with two different arities."""

    def __init__(self, symbol: str, first: int, second: int):
        self.symbol = symbol
        self.arities = (first, second)
        super().__init__(
            f"symbol '{symbol}' used with arity {first} and arity {second}"
        )


class NotPropositionalError(LogicError):
    """Operation requires a quantifier-free formula over 0-ary atoms."""
    pass


class NotSentenceError(LogicError):
    """Operation requires a formula without free variables."""

    def __init__(self, free: frozenset):
        self.free = free
        names = ", ".join(sorted(free))
        super().__init__(f"formula is not a sentence (free: {names})")


class EvaluationError(LogicError):
    """Formula cannot be evaluated under the given assignment or model."""
    pass


class MissingAtomError(EvaluationError):
    """Assignment does not cover an atom of the formula."""

    def __init__(self, atom: str):
        self.atom = atom
        super().__init__(f"no truth value for atom '{atom}'")


class UncoveredSymbolError(EvaluationError):
    """Interpretation or environment does not cover a symbol of the formula."""

    def __init__(self, kind: str, symbol: str):
        self.kind = kind
        self.symbol = symbol
        super().__init__(f"interpretation has no {kind} '{symbol}'")


# ─────────────────────────────────────────────────────────────────────────────
# Resource guards
# ─────────────────────────────────────────────────────────────────────────────

class ResourceLimitError(LogicError):
    """A configured size guard tripped."""
    pass


class TooManyAtomsError(ResourceLimitError):
    """Truth table would exceed the configured atom count."""

    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} atoms exceeds the truth-table limit of {limit}")


class CapExceededError(ResourceLimitError):
    """Interpretation enumeration would exceed the configured cap."""

    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"{count} interpretations exceeds the cap of {cap}")


class FormulaTooLargeError(ResourceLimitError):
    """Distributive normal form grew past the node guard."""

    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"normal form exceeds {limit} nodes")
