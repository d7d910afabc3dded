"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class KummerError(Exception):
    pass


class GroupError(KummerError, ValueError):
    """Invalid group or involution data (bad factor, non-involution, ...)."""


class TableError(KummerError, ValueError):
    """Malformed kappa table: missing/duplicate pair, unknown element."""


class NotVerifiedError(KummerError):
    """Operation requires a structure that passes A1-A4."""


class DomainError(KummerError, ValueError):
    """Arguments outside an operation's domain (e.g. strings over different bases)."""


class InvariantError(KummerError, AssertionError):
    """A proven invariant failed; indicates a bug or corrupt input."""


class KstParseError(KummerError, ValueError):
    """Malformed KST text; ``line`` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line
