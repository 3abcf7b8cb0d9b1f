"""Diagnostic records produced by the parser and the semantic analyzer.

A diagnostic pinpoints a problem at a 1-based line/column position and
carries a short stable code (see the README for the full enumeration) so
tools and tests can match on the kind of problem without parsing the
human-readable message.
"""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # ERROR or WARNING
    line: int  # 1-based
    column: int  # 1-based
    code: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


def error(line, column, code, message):
    return Diagnostic(ERROR, line, column, code, message)


def warning(line, column, code, message):
    return Diagnostic(WARNING, line, column, code, message)


def has_errors(diagnostics):
    """True if any diagnostic in the list is an error (warnings pass)."""
    return any(d.severity == ERROR for d in diagnostics)
