"""Exception types shared across the seqtax modules."""
from __future__ import annotations


class TaxonomyError(Exception):
    """Base class for all seqtax domain errors."""


class ParseError(TaxonomyError):
    """A document (schema, rules, evidence, corpus) could not be parsed.

    ``line``/``column`` locate syntax errors; ``subject`` names the offending
    field or element for structural errors.
    """

    def __init__(self, message: str, *, line: int | None = None,
                 column: int | None = None, subject: str | None = None):
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + location)
        self.line = line
        self.column = column
        self.subject = subject


class DuplicateKeyError(ParseError):
    """A JSON object repeated a field name."""


class DuplicateName(TaxonomyError):
    """A corpus document named the same dossier twice."""

    def __init__(self, name: str, line: int | None = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"duplicate dossier name {name!r}{where}")
        self.name = name
        self.line = line


class NotFound(TaxonomyError):
    """A lookup by id or name found nothing."""

    def __init__(self, kind: str, key: str):
        super().__init__(f"{kind} {key!r} not found")
        self.kind = kind
        self.key = key


class SchemaMismatch(TaxonomyError):
    """A rule, action or classification references ids a schema does not define."""

    def __init__(self, message: str, subject: str | None = None):
        super().__init__(message)
        self.subject = subject
