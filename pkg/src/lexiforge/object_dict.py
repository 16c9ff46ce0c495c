"""The object dictionary: compiled entries plus lookup indexes.

An entry pairs a surface string with a feature tree; the dictionary
keeps three hash indexes over its entries (by surface, by the lemma
feature, by the concatenation-category feature).  The on-disk form is
line based and canonical: a version header, then entries sorted by
surface and canonical tree text, each entry being its surface line
followed by two-space-indented canonical form lines and a blank line.
Saving the same dictionary twice yields identical bytes.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import IO, Iterable

from .diagnostics import WARNING, Diagnostic
from .feature_tree import FeatureTree, ValueSet
from .source import SourceSyntaxError, parse_equation, term_node

MAGIC = "LEXIFORGE-OBJDICT"
FORMAT_VERSION = "1"
HEADER = "%s %s" % (MAGIC, FORMAT_VERSION)


class FormatError(Exception):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else "line %d: %s" % (line, message))


class VersionError(FormatError):
    pass


@dataclass(frozen=True)
class ObjectEntry:
    surface: str
    tree: FeatureTree
    section: str = field(default="", compare=False)
    source_name: str = field(default="", compare=False)
    rule_index: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class DictStats:
    entries: int
    surfaces: int
    lemmas: int
    homographs: int


class ObjectDictionary:
    """Immutable collection of object entries with derived indexes.

    The index feature names are configurable because the dictionary
    rules decide what ends up meaning "lemma" and "concatenation
    category"; `lex` and `concat` are the conventional defaults.
    """

    def __init__(
        self,
        entries: Iterable[ObjectEntry],
        lex_feature: str = "lex",
        concat_feature: str = "concat",
        warnings: Iterable[Diagnostic] = (),
    ):
        self.entries = tuple(entries)
        self.lex_feature = lex_feature
        self.concat_feature = concat_feature
        self.warnings = tuple(warnings)
        self.surface_index: dict[str, list[int]] = {}
        self.lemma_index: dict[str, list[int]] = {}
        self.concat_index: dict[str, list[int]] = {}
        for i, entry in enumerate(self.entries):
            self.surface_index.setdefault(entry.surface, []).append(i)
            for index, feature in (
                (self.lemma_index, lex_feature),
                (self.concat_index, concat_feature),
            ):
                node = entry.tree.get((feature,))
                if isinstance(node, ValueSet):
                    for atom in node:
                        index.setdefault(atom.text, []).append(i)

    @classmethod
    def build(
        cls,
        entries: Iterable[ObjectEntry],
        lex_feature: str = "lex",
        concat_feature: str = "concat",
    ) -> "ObjectDictionary":
        """Deduplicate and index.  Exact duplicates (same surface and
        canonical tree) collapse to the first occurrence, each with a
        warning."""
        kept: list[ObjectEntry] = []
        warnings: list[Diagnostic] = []
        seen: set[tuple[str, str]] = set()
        for entry in entries:
            key = (entry.surface, entry.tree.canonical_form())
            if key in seen:
                warnings.append(
                    Diagnostic(
                        WARNING,
                        "duplicate object entry '%s' collapsed (from '%s')"
                        % (entry.surface, entry.source_name or entry.surface),
                        entry=entry.source_name or entry.surface,
                    )
                )
                continue
            seen.add(key)
            kept.append(entry)
        return cls(kept, lex_feature, concat_feature, warnings)

    # -- lookups ---------------------------------------------------------

    def lookup(self, surface: str) -> list[ObjectEntry]:
        return [self.entries[i] for i in self.surface_index.get(surface, ())]

    def lookup_by_lemma(self, lemma: str) -> list[ObjectEntry]:
        return [self.entries[i] for i in self.lemma_index.get(lemma, ())]

    def lookup_by_concat(self, category: str) -> list[ObjectEntry]:
        return [self.entries[i] for i in self.concat_index.get(category, ())]

    def stats(self) -> DictStats:
        surfaces = len(self.surface_index)
        homographs = sum(1 for ids in self.surface_index.values() if len(ids) > 1)
        return DictStats(len(self.entries), surfaces, len(self.lemma_index), homographs)


def save(dictionary: ObjectDictionary, dest: str | IO[str]) -> None:
    """Write the canonical on-disk form (byte deterministic)."""
    rows = []
    for entry in dictionary.entries:
        if not entry.surface or entry.surface[0].isspace() or "\n" in entry.surface:
            raise ValueError("surface %r is not serializable" % entry.surface)
        rows.append((entry.surface, entry.tree.canonical_form()))
    rows.sort()
    out = io.StringIO()
    out.write(HEADER + "\n")
    for surface, canon in rows:
        out.write(surface + "\n")
        for line in canon.splitlines():
            out.write("  " + line + "\n")
        out.write("\n")
    text = out.getvalue()
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        dest.write(text)


def load(
    src: str | IO[str],
    lex_feature: str = "lex",
    concat_feature: str = "concat",
) -> ObjectDictionary:
    """Read the on-disk form back; indexes are rebuilt from scratch."""
    if isinstance(src, str):
        with open(src, "r", encoding="utf-8") as handle:
            text = handle.read()
    else:
        text = src.read()
    lines = text.split("\n")
    if not lines or lines[0] != HEADER:
        head = lines[0] if lines else ""
        if head.startswith(MAGIC):
            raise VersionError("unsupported dictionary version %r" % head, line=1)
        raise FormatError("missing dictionary header", line=1)

    entries: list[ObjectEntry] = []
    surface: str | None = None
    tree = FeatureTree()
    paths: set[tuple[str, ...]] = set()

    def close_entry():
        nonlocal surface, tree, paths
        if surface is not None:
            entries.append(ObjectEntry(surface, tree))
            surface, tree, paths = None, FeatureTree(), set()

    for line_no, line in enumerate(lines[1:], start=2):
        if line == "":
            close_entry()
            continue
        if line.startswith("  "):
            if surface is None:
                raise FormatError("indented line outside an entry", line=line_no)
            try:
                eq = parse_equation(line[2:], line=line_no)
            except SourceSyntaxError as exc:
                raise FormatError(exc.message, line=line_no)
            node = term_node(eq.values)
            if not isinstance(node, ValueSet):
                raise FormatError("placeholders are not dictionary values", line=line_no)
            if eq.path in paths:
                raise FormatError(
                    "duplicate feature path '%s'" % " ".join(eq.path), line=line_no
                )
            paths.add(eq.path)
            try:
                tree = tree.set(eq.path, node)
            except Exception as exc:
                raise FormatError(str(exc), line=line_no)
            continue
        if line[0].isspace():
            raise FormatError("bad indentation", line=line_no)
        close_entry()
        surface = line
    close_entry()
    return ObjectDictionary.build(entries, lex_feature, concat_feature)
