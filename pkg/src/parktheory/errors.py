"""Exception hierarchy shared by every layer of the workbench."""


class ParkError(Exception):
    """Base class for all errors raised by parktheory."""


class LatticeError(ParkError):
    """Raised when a declared order is not a finite lattice."""


class SortError(ParkError):
    """Raised when morphisms or terms are combined at incompatible sorts."""


class BudgetExceeded(ParkError):
    """Raised when a construction would exceed a configured size budget."""


class ParseError(ParkError):
    """Raised on malformed input text; carries a location when one is known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class EvalError(ParkError):
    """A backend failure during term evaluation, tagged with the term path."""

    def __init__(self, message, path=()):
        self.path = tuple(path)
        loc = "/".join(self.path) or "<root>"
        super().__init__(f"at {loc}: {message}")
