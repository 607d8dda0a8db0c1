class OpgError(Exception):
    """Base class for errors raised by this package."""


class OrderError(OpgError, ValueError):
    pass


class InvalidGameError(OpgError, ValueError):
    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = list(violations or [])


class ArityError(OpgError, ValueError):
    pass


class OracleBoundError(OpgError):
    pass


class SolverInconsistency(OpgError, AssertionError):
    """A computed front breaks a structural property it must have; indicates a solver bug."""


class ParseError(OpgError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 definition: str | None = None):
        where = []
        if definition is not None:
            where.append(f"in '{definition}'")
        if line is not None:
            where.append(f"line {line}" + (f", column {column}" if column is not None else ""))
        super().__init__(message + (f" ({'; '.join(where)})" if where else ""))
        self.line = line
        self.column = column
        self.definition = definition
        self.reason = message
