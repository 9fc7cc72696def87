class CyclamError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(CyclamError, ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(f"syntax error{where}: {message}")


class OpenTermError(CyclamError, ValueError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"open term: {name}")


class SystemDefinitionError(CyclamError, ValueError):
    """Undefined call target, arity mismatch, unguarded cycle, open start."""


class UnguardedError(CyclamError, ValueError):
    def __init__(self, message: str = "unguarded mu"):
        super().__init__(message)


class BudgetError(CyclamError):
    """A construction needed a definitive verdict but the budget ran out."""
