"""Positioned diagnostics shared by the parser, resolver, checker and compiler."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    file: str | None = None
    line: int | None = None
    entry: str | None = None
    path: tuple[str, ...] | None = None

    def render(self) -> str:
        """One-line report: position prefix, then 'severity [entry [path]]: message'."""
        prefix = "%s:%d: " % (self.file, self.line) if self.file else ""
        if self.entry is not None:
            where = self.entry
            if self.path:
                where += " " + " ".join(self.path)
            return "%s%s %s: %s" % (prefix, self.severity, where, self.message)
        return "%s%s: %s" % (prefix, self.severity, self.message)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity == ERROR for d in diagnostics)
