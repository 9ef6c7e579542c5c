"""Exception hierarchy shared across genome-kit."""

from __future__ import annotations


class GenomeError(Exception):
    """Base class for every error raised by genome-kit."""


class TurtleSyntaxError(GenomeError, ValueError):
    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else "line "
        super().__init__(f"{where}{line}:{column}: {message}")


class CorpusError(GenomeError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MatrixError(GenomeError, ValueError):
    pass


class TemplateError(GenomeError, ValueError):
    """Aggregated KR-template validation failure.

    ``errors`` holds ``(row_number, message)`` pairs, row numbers counted from
    the first line of the CSV document (header included).
    """

    def __init__(self, errors: list[tuple[int, str]]):
        self.errors = list(errors)
        lines = [f"row {row}: {msg}" for row, msg in self.errors]
        super().__init__("invalid KR template:\n  " + "\n  ".join(lines))


class PopulateError(GenomeError, ValueError):
    pass


class PatchError(GenomeError, ValueError):
    pass


class GuardError(GenomeError):
    """An operation was refused because a methodology precondition is unmet."""


class ConfigError(GenomeError, ValueError):
    pass
