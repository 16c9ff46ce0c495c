"""The source lexical base: data types, parser and pretty printer.

A source base is a sectioned text format.  `#MORPHEMES`, `#WORDS`,
`#CLASSES` and `#LEXEMES` hold blank-line separated entries (a name
line with optional parent list, then `path = value ...` equations).
`#ALO-RULES` holds string-rewriting rule blocks, `#DATA-DICT` feature
declarations, `#DICT-RULES` the equations that turn resolved entries
into object dictionary entries.  `#INCLUDE "relative/path"` splices
another file in between entries.

Section headers start at column 0.  `;` starts a comment (except inside
quoted strings), a trailing backslash joins the next physical line
before tokenizing, and blank lines separate entries and rules.

Parses are total: any input produces a ParseResult whose diagnostics
carry file and line positions.  The strict helpers (parse_equation,
parse_alo_rule, parse_dict_rules, parse_tree) raise SourceSyntaxError
instead.
"""

from __future__ import annotations

import posixpath
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple

from .diagnostics import ERROR, Diagnostic, has_errors
from .feature_tree import (
    EMPTY_TREE,
    Atom,
    FeatureTree,
    RESERVED_CHARS,
    ValueSet,
)

SECTION_HEADERS = {
    "#MORPHEMES": "morphemes",
    "#WORDS": "words",
    "#CLASSES": "classes",
    "#LEXEMES": "lexemes",
    "#ALO-RULES": "alo-rules",
    "#DATA-DICT": "data-dict",
    "#DICT-RULES": "dict-rules",
}

ENTRY_SECTIONS = ("morphemes", "words", "classes", "lexemes")
DICT_SUBSECTIONS = {"LEXEMES": "lexemes", "MORPHEMES": "morphemes", "WORDS": "words"}


class SourceSyntaxError(Exception):
    def __init__(self, message: str, file: str | None = None, line: int | None = None):
        self.message = message
        self.file = file
        self.line = line
        super().__init__(message)

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(ERROR, self.message, file=self.file, line=self.line)


class UndeclaredVariable(SourceSyntaxError):
    """A production references a pattern variable with no declaration."""


class MissingTarget(SourceSyntaxError):
    """A dictionary rule fails to assign the entry name or the tree."""


# -- value terms ---------------------------------------------------------

@dataclass(frozen=True)
class RuleCall:
    """Placeholder value: apply the named allomorphy rule to the entry name."""

    rule: str


@dataclass(frozen=True)
class SelfRef:
    """Placeholder value for the token `$$`: the entry's own name."""


def term_node(values: tuple) -> object:
    """Leaf node for an equation's values: a marker or a ValueSet."""
    first = values[0]
    if isinstance(first, (RuleCall, SelfRef)):
        return first
    return ValueSet(values)


# -- definitions ---------------------------------------------------------

@dataclass
class Equation:
    path: tuple[str, ...]
    values: tuple
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class Entry:
    name: str
    parents: tuple[str, ...]
    equations: tuple[Equation, ...]
    section: str
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)

    def tree(self) -> FeatureTree:
        """Equations folded in source order; later assignments override.

        Raises PathThroughLeaf when the entry treats some feature both
        as atomic and as structured.
        """
        t = EMPTY_TREE
        for eq in self.equations:
            t = t.set(eq.path, term_node(eq.values))
        return t


@dataclass
class Production:
    """One rewrite: segment tuples of ('lit', text) / ('var', name)."""

    lhs: tuple[tuple[str, str], ...]
    rhs: tuple[tuple[str, str], ...]


@dataclass
class AloRule:
    name: str
    variables: dict[str, str]
    productions: tuple[Production, ...]
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class DictEquation:
    """target/source: None is the entry name (`$$`), a tuple is a path
    under `@` (the empty tuple being the whole tree).  Deletions apply
    to a copy of the source subtree before assignment."""

    target: tuple[str, ...] | None
    source: tuple[str, ...] | None
    deletions: tuple[tuple[str, ...], ...] = ()
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class DictRule:
    equations: tuple[DictEquation, ...]
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class DictRuleSet:
    lexemes: tuple[DictRule, ...] = ()
    morphemes: tuple[DictRule, ...] = ()
    words: tuple[DictRule, ...] = ()

    def for_section(self, section: str) -> tuple[DictRule, ...]:
        return getattr(self, section)


OPEN, CLOSED, STRUCTURED = "open", "closed", "structured"


@dataclass
class TypeDecl:
    label: str
    kind: str
    values: ValueSet | None = None
    alternatives: tuple[tuple[str, ...], ...] = ()
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class SourceBase:
    morphemes: dict[str, Entry] = field(default_factory=dict)
    words: dict[str, Entry] = field(default_factory=dict)
    classes: dict[str, Entry] = field(default_factory=dict)
    lexemes: dict[str, Entry] = field(default_factory=dict)
    alo_rules: dict[str, AloRule] = field(default_factory=dict)
    data_dict: dict[str, TypeDecl] = field(default_factory=dict)
    dict_rules: DictRuleSet = field(default_factory=DictRuleSet)
    sections_seen: frozenset[str] = field(default=frozenset(), compare=False)
    includes: tuple[tuple[str, str], ...] = field(default=(), compare=False)

    def entries_in(self, section: str) -> dict[str, Entry]:
        return getattr(self, section)


@dataclass
class ParseResult:
    base: SourceBase
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


# -- lexical layer -------------------------------------------------------

class Token(NamedTuple):
    kind: str  # sym, str, =, (, ), call, self
    text: str


def _strip_comment(text: str) -> tuple[str, bool]:
    """Drop a ';' comment, honoring quoted strings; also report whether
    the line ends inside an unterminated string."""
    out = []
    in_str = False
    i = 0
    while i < len(text):
        c = text[i]
        if in_str:
            if c == "\\" and i + 1 < len(text):
                out.append(c)
                out.append(text[i + 1])
                i += 2
                continue
            if c == '"':
                in_str = False
            out.append(c)
        else:
            if c == ";":
                break
            if c == '"':
                in_str = True
            out.append(c)
        i += 1
    return "".join(out), in_str


def _logical_lines(text: str) -> list[tuple[int, str]]:
    """Comment-stripped lines with backslash continuations joined.

    Each result keeps the line number of its first physical line.
    """
    out: list[tuple[int, str]] = []
    pending: str | None = None
    pending_line = 0
    for i, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        stripped, open_quote = _strip_comment(raw)
        body = stripped.rstrip()
        if body.endswith("\\") and not open_quote:
            piece = body[:-1]
            if pending is None:
                pending, pending_line = piece, i
            else:
                pending += piece
            continue
        if pending is not None:
            out.append((pending_line, pending + stripped))
            pending = None
        else:
            out.append((i, stripped))
    if pending is not None:
        out.append((pending_line, pending))
    return out


def tokenize(text: str, file: str | None = None, line: int | None = None) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == '"':
            j = i + 1
            buf: list[str] = []
            closed = False
            while j < n:
                ch = text[j]
                if ch == "\\" and j + 1 < n and text[j + 1] in ('"', "\\"):
                    buf.append(text[j + 1])
                    j += 2
                    continue
                if ch == '"':
                    closed = True
                    break
                buf.append(ch)
                j += 1
            if not closed:
                raise SourceSyntaxError("unterminated string", file, line)
            tokens.append(Token("str", "".join(buf)))
            i = j + 1
            continue
        if c in "=()":
            tokens.append(Token(c, c))
            i += 1
            continue
        if c == "$":
            if i + 1 < n and text[i + 1] == "$":
                tokens.append(Token("self", "$$"))
                i += 2
                continue
            j = i + 1
            while j < n and not text[j].isspace() and text[j] not in RESERVED_CHARS:
                j += 1
            name = text[i + 1 : j]
            if not name:
                raise SourceSyntaxError("expected a rule name after '$'", file, line)
            tokens.append(Token("call", name))
            i = j
            continue
        if c in "#;\\":
            raise SourceSyntaxError("unexpected character %r" % c, file, line)
        j = i
        while j < n and not text[j].isspace() and text[j] not in RESERVED_CHARS:
            j += 1
        tokens.append(Token("sym", text[i:j]))
        i = j
    return tokens


# -- equations -----------------------------------------------------------

def parse_equation(text: str, file: str | None = None, line: int | None = None) -> Equation:
    """`path = v1 v2 ...` with symbol, string, `$rule` and `$$` values."""
    tokens = tokenize(text, file, line)
    split = [i for i, t in enumerate(tokens) if t.kind == "="]
    if len(split) != 1:
        raise SourceSyntaxError("an equation needs exactly one '='", file, line)
    lhs, rhs = tokens[: split[0]], tokens[split[0] + 1 :]
    if not lhs:
        raise SourceSyntaxError("missing feature path before '='", file, line)
    for t in lhs:
        if t.kind != "sym":
            raise SourceSyntaxError("feature paths hold bare labels only", file, line)
    if not rhs:
        raise SourceSyntaxError("missing values after '='", file, line)
    values: list = []
    for t in rhs:
        if t.kind == "sym":
            values.append(Atom(t.text))
        elif t.kind == "str":
            values.append(Atom(t.text, quoted=True))
        elif t.kind == "call":
            values.append(RuleCall(t.text))
        elif t.kind == "self":
            values.append(SelfRef())
        else:
            raise SourceSyntaxError("unexpected %r in value list" % t.text, file, line)
    if len(values) > 1:
        if any(isinstance(v, (RuleCall, SelfRef)) for v in values):
            raise SourceSyntaxError(
                "a rule call or '$$' must be the only value", file, line
            )
        if any(v.quoted for v in values):
            raise SourceSyntaxError(
                "a string value must be the only value", file, line
            )
    return Equation(tuple(t.text for t in lhs), tuple(values), file, line)


def parse_tree(text: str, file: str | None = None) -> FeatureTree:
    """Equation lines folded into a tree; placeholders are rejected."""
    t = EMPTY_TREE
    for line_no, line_text in _logical_lines(text):
        if not line_text.strip():
            continue
        eq = parse_equation(line_text, file, line_no)
        node = term_node(eq.values)
        if not isinstance(node, ValueSet):
            raise SourceSyntaxError("rule calls are not allowed here", file, line_no)
        t = t.set(eq.path, node)
    return t


# -- allomorphy rule blocks ----------------------------------------------

def _scan_segments(
    s: str, variables: dict[str, str], file: str | None, line: int | None
) -> tuple[tuple[str, str], ...]:
    segs: list[tuple[str, str]] = []
    lit: list[str] = []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "$":
            if i + 1 >= len(s) or not s[i + 1].isalpha():
                raise SourceSyntaxError("expected a variable letter after '$'", file, line)
            v = s[i + 1]
            if v not in variables:
                raise UndeclaredVariable("undeclared variable '$%s'" % v, file, line)
            if lit:
                segs.append(("lit", "".join(lit)))
                lit = []
            segs.append(("var", v))
            i += 2
            continue
        if c.isspace():
            raise SourceSyntaxError("patterns may not contain spaces", file, line)
        lit.append(c)
        i += 1
    if lit:
        segs.append(("lit", "".join(lit)))
    return tuple(segs)


def _parse_alo_block(block: list[tuple[int, str]], file: str | None) -> AloRule:
    first_line, first_text = block[0]
    head = tokenize(first_text, file, first_line)
    if len(head) != 1 or head[0].kind != "sym":
        raise SourceSyntaxError("expected a rule name on its own line", file, first_line)
    name = head[0].text
    variables: dict[str, str] = {}
    productions: list[Production] = []
    for line_no, text in block[1:]:
        body = text.strip()
        if body.startswith("{"):
            if productions:
                raise SourceSyntaxError(
                    "variable declarations must precede productions", file, line_no
                )
            if not body.endswith("}"):
                raise SourceSyntaxError("unterminated variable declaration", file, line_no)
            inner = body[1:-1]
            eq = inner.find("=")
            if eq < 0:
                raise SourceSyntaxError("expected '=' in variable declaration", file, line_no)
            var = inner[:eq].strip()
            pattern = inner[eq + 1 :].strip()
            if len(var) != 1 or not var.isalpha():
                raise SourceSyntaxError(
                    "variable names are single letters", file, line_no
                )
            if var in variables:
                raise SourceSyntaxError("variable '%s' redeclared" % var, file, line_no)
            if not pattern:
                raise SourceSyntaxError("empty pattern for variable '%s'" % var, file, line_no)
            variables[var] = pattern
            continue
        parts = body.split("->")
        if len(parts) != 2:
            raise SourceSyntaxError(
                "expected 'pattern -> replacement'", file, line_no
            )
        lhs_text, rhs_text = parts[0].strip(), parts[1].strip()
        if not lhs_text:
            raise SourceSyntaxError("empty pattern", file, line_no)
        if not rhs_text:
            raise SourceSyntaxError("empty replacement", file, line_no)
        lhs = _scan_segments(lhs_text, variables, file, line_no)
        rhs = _scan_segments(rhs_text, variables, file, line_no)
        bound = {v for kind, v in lhs if kind == "var"}
        for kind, v in rhs:
            if kind == "var" and v not in bound:
                raise SourceSyntaxError(
                    "variable '$%s' in the replacement is not matched by the pattern" % v,
                    file,
                    line_no,
                )
        productions.append(Production(lhs, rhs))
    if not productions:
        raise SourceSyntaxError("rule '%s' has no productions" % name, file, first_line)
    return AloRule(name, variables, tuple(productions), file, first_line)


def parse_alo_rule(text: str, file: str | None = None) -> AloRule:
    """One rule block: name line, `{V = regexp}` lines, productions."""
    block = [(n, t) for n, t in _logical_lines(text) if t.strip()]
    if not block:
        raise SourceSyntaxError("empty rule block", file, None)
    return _parse_alo_block(block, file)


# -- data dictionary declarations ----------------------------------------

def _parse_decl(text: str, file: str | None, line: int | None) -> TypeDecl:
    tokens = tokenize(text, file, line)
    if len(tokens) < 2 or tokens[0].kind != "sym" or tokens[1].kind != "=":
        raise SourceSyntaxError("expected 'label = ...'", file, line)
    label = tokens[0].text
    rest = tokens[2:]
    if not rest:
        return TypeDecl(label, OPEN, file=file, line=line)
    if any(t.kind == "sym" and t.text == "@" for t in rest):
        alternatives: list[tuple[str, ...]] = []
        i = 0
        while i < len(rest):
            if rest[i].kind != "sym" or rest[i].text != "@":
                raise SourceSyntaxError("expected '@(' alternative", file, line)
            if i + 1 >= len(rest) or rest[i + 1].kind != "(":
                raise SourceSyntaxError("expected '(' after '@'", file, line)
            i += 2
            labels: list[str] = []
            while i < len(rest) and rest[i].kind == "sym":
                labels.append(rest[i].text)
                i += 1
            if i >= len(rest) or rest[i].kind != ")":
                raise SourceSyntaxError("unterminated alternative", file, line)
            if not labels:
                raise SourceSyntaxError("empty alternative", file, line)
            alternatives.append(tuple(labels))
            i += 1
        return TypeDecl(label, STRUCTURED, alternatives=tuple(alternatives), file=file, line=line)
    atoms: list[Atom] = []
    for t in rest:
        if t.kind == "sym":
            atoms.append(Atom(t.text))
        elif t.kind == "str":
            atoms.append(Atom(t.text, quoted=True))
        else:
            raise SourceSyntaxError("declared values must be atoms", file, line)
    return TypeDecl(label, CLOSED, values=ValueSet(atoms), file=file, line=line)


# -- dictionary generation rules -----------------------------------------

def _parse_dict_equation(text: str, file: str | None, line: int | None) -> DictEquation:
    tokens = tokenize(text, file, line)
    split = [i for i, t in enumerate(tokens) if t.kind == "="]
    if len(split) != 1:
        raise SourceSyntaxError("an equation needs exactly one '='", file, line)
    lhs, rhs = tokens[: split[0]], tokens[split[0] + 1 :]

    if len(lhs) == 1 and lhs[0].kind == "self":
        target = None
    elif lhs and lhs[0].kind == "sym" and lhs[0].text == "@":
        labels = []
        for t in lhs[1:]:
            if t.kind != "sym":
                raise SourceSyntaxError("target paths hold bare labels only", file, line)
            labels.append(t.text)
        target = tuple(labels)
    else:
        raise SourceSyntaxError("the target is '$$' or '@ path'", file, line)

    deletions: list[tuple[str, ...]] = []
    if len(rhs) == 1 and rhs[0].kind == "self":
        source = None
    elif rhs and rhs[0].kind == "sym" and rhs[0].text == "@":
        labels = []
        i = 1
        while i < len(rhs) and rhs[i].kind == "sym":
            labels.append(rhs[i].text)
            i += 1
        source = tuple(labels)
        if i < len(rhs):
            if rhs[i].kind != "(":
                raise SourceSyntaxError("unexpected %r" % rhs[i].text, file, line)
            i += 1
            while i < len(rhs) and rhs[i].kind != ")":
                if rhs[i].kind != "sym" or rhs[i].text != "-":
                    raise SourceSyntaxError("deletions are written '- path'", file, line)
                i += 1
                dpath = []
                while i < len(rhs) and rhs[i].kind == "sym" and rhs[i].text != "-":
                    dpath.append(rhs[i].text)
                    i += 1
                if not dpath:
                    raise SourceSyntaxError("empty deletion path", file, line)
                deletions.append(tuple(dpath))
            if i >= len(rhs) or rhs[i].kind != ")":
                raise SourceSyntaxError("unterminated deletion list", file, line)
            if i + 1 != len(rhs):
                raise SourceSyntaxError("trailing tokens after deletions", file, line)
    else:
        raise SourceSyntaxError("the source is '$$' or '@ path'", file, line)
    return DictEquation(target, source, tuple(deletions), file, line)


def _parse_dict_rule(block: list[tuple[int, str]], file: str | None) -> DictRule:
    equations = [_parse_dict_equation(t, file, n) for n, t in block]
    if not any(eq.target is None for eq in equations):
        raise MissingTarget("a rule must assign '$$'", file, block[0][0])
    if not any(eq.target is not None for eq in equations):
        raise MissingTarget("a rule must assign '@'", file, block[0][0])
    return DictRule(tuple(equations), file, block[0][0])


def parse_dict_rules(text: str, file: str | None = None) -> DictRuleSet:
    """The body of a `#DICT-RULES` section (strict: raises on errors)."""
    result = parse_source_text("#DICT-RULES\n" + text, name=file or "<dict-rules>")
    for d in result.diagnostics:
        if d.severity == ERROR:
            raise SourceSyntaxError(d.message, d.file, d.line)
    return result.base.dict_rules


# -- the file-level parser -----------------------------------------------

Loader = Callable[[str], str]


def _fs_loader(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


class _State:
    def __init__(self, loader: Loader):
        self.loader = loader
        self.base = SourceBase()
        self.diagnostics: list[Diagnostic] = []
        self.sections_seen: set[str] = set()
        self.includes: list[tuple[str, str]] = []
        self.active: list[str] = []
        self.loaded: set[str] = set()
        self.dict_rules: dict[str, list[DictRule]] = {
            "lexemes": [],
            "morphemes": [],
            "words": [],
        }

    def error(self, message: str, file=None, line=None):
        self.diagnostics.append(Diagnostic(ERROR, message, file=file, line=line))

    def syntax_error(self, exc: SourceSyntaxError):
        self.diagnostics.append(exc.to_diagnostic())

    # -- registration ----------------------------------------------------

    def add_entry(self, entry: Entry):
        table = self.base.entries_in(entry.section)
        old = table.get(entry.name)
        if old is not None:
            self.error(
                "duplicate entry '%s' in #%s (first defined at %s:%s)"
                % (entry.name, entry.section.upper(), old.file, old.line),
                file=entry.file,
                line=entry.line,
            )
            return
        table[entry.name] = entry

    def add_alo_rule(self, rule: AloRule):
        old = self.base.alo_rules.get(rule.name)
        if old is not None:
            self.error(
                "duplicate rule '%s' (first defined at %s:%s)"
                % (rule.name, old.file, old.line),
                file=rule.file,
                line=rule.line,
            )
            return
        self.base.alo_rules[rule.name] = rule

    def add_decl(self, decl: TypeDecl):
        old = self.base.data_dict.get(decl.label)
        if old is not None:
            self.error(
                "feature '%s' redeclared (first declared at %s:%s)"
                % (decl.label, old.file, old.line),
                file=decl.file,
                line=decl.line,
            )
            return
        self.base.data_dict[decl.label] = decl

    # -- file parsing ------------------------------------------------

    def parse_file(self, path: str, site: tuple[str | None, int | None] = (None, None)):
        key = posixpath.normpath(path)
        if key in self.active:
            self.error(
                "include cycle: %s" % " -> ".join(self.active + [key]),
                file=site[0],
                line=site[1],
            )
            return
        if key in self.loaded:
            return
        try:
            text = self.loader(key)
        except UnicodeDecodeError as exc:
            self.error(
                "%s is not valid UTF-8 at byte %d" % (key, exc.start),
                file=site[0],
                line=site[1],
            )
            return
        except OSError as exc:
            self.error("cannot read %s: %s" % (key, exc), file=site[0], line=site[1])
            return
        self.active.append(key)
        self.loaded.add(key)
        try:
            self._parse_lines(key, _logical_lines(text))
        finally:
            self.active.pop()

    def _parse_lines(self, file: str, lines: list[tuple[int, str]]):
        section: str | None = None
        dict_subsection: str | None = None
        block: list[tuple[int, str]] = []

        def flush():
            nonlocal block
            if block:
                self._handle_block(file, section, dict_subsection, block)
                block = []

        for line_no, text in lines:
            if not text.strip():
                flush()
                continue
            if text.startswith("#"):
                flush()
                head = text.split(None, 1)[0]
                if head == "#INCLUDE":
                    self._handle_include(file, line_no, text[len("#INCLUDE") :])
                    continue
                target = SECTION_HEADERS.get(text.strip())
                if target is None:
                    self.error("unknown directive %r" % text.strip(), file, line_no)
                    section = "<invalid>"
                    continue
                section = target
                dict_subsection = None
                self.sections_seen.add(target)
                continue
            if section == "dict-rules":
                keyword = DICT_SUBSECTIONS.get(text.strip())
                if keyword is not None and not block:
                    dict_subsection = keyword
                    continue
            block.append((line_no, text))
        flush()

    def _handle_include(self, file: str, line_no: int, rest: str):
        try:
            tokens = tokenize(rest, file, line_no)
        except SourceSyntaxError as exc:
            self.syntax_error(exc)
            return
        if len(tokens) != 1 or tokens[0].kind != "str":
            self.error('#INCLUDE takes one quoted path', file, line_no)
            return
        target = posixpath.normpath(posixpath.join(posixpath.dirname(file), tokens[0].text))
        self.includes.append((file, target))
        self.parse_file(target, (file, line_no))

    def _handle_block(self, file, section, dict_subsection, block):
        if section is None:
            self.error("content before any section header", file, block[0][0])
            return
        if section == "<invalid>":
            return
        if section in ENTRY_SECTIONS:
            self._entry_block(file, section, block)
        elif section == "alo-rules":
            try:
                self.add_alo_rule(_parse_alo_block(block, file))
            except SourceSyntaxError as exc:
                self.syntax_error(exc)
        elif section == "data-dict":
            for line_no, text in block:
                try:
                    self.add_decl(_parse_decl(text, file, line_no))
                except SourceSyntaxError as exc:
                    self.syntax_error(exc)
        elif section == "dict-rules":
            if dict_subsection is None:
                self.error(
                    "dictionary rules need a LEXEMES/MORPHEMES/WORDS subsection",
                    file,
                    block[0][0],
                )
                return
            try:
                self.dict_rules[dict_subsection].append(_parse_dict_rule(block, file))
            except SourceSyntaxError as exc:
                self.syntax_error(exc)

    def _entry_block(self, file, section, block):
        first_line, first_text = block[0]
        try:
            head = tokenize(first_text, file, first_line)
        except SourceSyntaxError as exc:
            self.syntax_error(exc)
            return
        if not head or head[0].kind != "sym":
            self.error("expected an entry name", file, first_line)
            return
        name = head[0].text
        parents: tuple[str, ...] = ()
        rest = head[1:]
        if rest:
            if rest[0].kind != "(" or rest[-1].kind != ")":
                self.error(
                    "expected '(parents)' or nothing after the entry name",
                    file,
                    first_line,
                )
                return
            inner = rest[1:-1]
            if any(t.kind != "sym" for t in inner):
                self.error("parent lists hold bare names only", file, first_line)
                return
            parents = tuple(t.text for t in inner)
        equations: list[Equation] = []
        for line_no, text in block[1:]:
            try:
                equations.append(parse_equation(text, file, line_no))
            except SourceSyntaxError as exc:
                self.syntax_error(exc)
        self.add_entry(Entry(name, parents, tuple(equations), section, file, first_line))

    def result(self) -> ParseResult:
        self.base.dict_rules = DictRuleSet(
            lexemes=tuple(self.dict_rules["lexemes"]),
            morphemes=tuple(self.dict_rules["morphemes"]),
            words=tuple(self.dict_rules["words"]),
        )
        self.base.sections_seen = frozenset(self.sections_seen)
        self.base.includes = tuple(self.includes)
        return ParseResult(self.base, self.diagnostics)


def parse_source(root: str, loader: Loader | None = None) -> ParseResult:
    """Parse a source base starting at `root`, following includes.

    `loader` maps a normalized path to file text; the default reads the
    filesystem as UTF-8.  All problems are reported as positioned
    diagnostics; a best-effort base is always returned.
    """
    state = _State(loader or _fs_loader)
    state.parse_file(str(root))
    return state.result()


def parse_source_text(
    text: str, name: str = "<source>", files: dict[str, str] | None = None
) -> ParseResult:
    """Parse from a string; `files` supplies include targets by path."""
    table = dict(files or {})
    table[name] = text

    def loader(path: str) -> str:
        try:
            return table[path]
        except KeyError:
            raise FileNotFoundError(path)

    return parse_source(name, loader)


# -- pretty printer -------------------------------------------------------

def _format_values(values: tuple) -> str:
    parts = []
    for v in values:
        if isinstance(v, RuleCall):
            parts.append("$" + v.rule)
        elif isinstance(v, SelfRef):
            parts.append("$$")
        else:
            parts.append(v.rendered())
    return " ".join(parts)


def _format_entry(entry: Entry) -> str:
    head = entry.name
    if entry.parents:
        head += " (%s)" % " ".join(entry.parents)
    lines = [head]
    for eq in entry.equations:
        lines.append("%s = %s" % (" ".join(eq.path), _format_values(eq.values)))
    return "\n".join(lines)


def _format_segments(segs: tuple[tuple[str, str], ...]) -> str:
    return "".join(text if kind == "lit" else "$" + text for kind, text in segs)


def _format_dict_side(path: tuple[str, ...] | None) -> str:
    if path is None:
        return "$$"
    if not path:
        return "@"
    return "@ " + " ".join(path)


def _format_dict_rule(rule: DictRule) -> str:
    lines = []
    for eq in rule.equations:
        rhs = _format_dict_side(eq.source)
        if eq.deletions:
            rhs += " (%s)" % " ".join("- " + " ".join(p) for p in eq.deletions)
        lines.append("%s = %s" % (_format_dict_side(eq.target), rhs))
    return "\n".join(lines)


def format_source(base: SourceBase) -> str:
    """Render a base back to source text; reparsing yields an equal base."""
    chunks: list[str] = []
    for header, section in (
        ("#MORPHEMES", "morphemes"),
        ("#WORDS", "words"),
        ("#CLASSES", "classes"),
        ("#LEXEMES", "lexemes"),
    ):
        table = base.entries_in(section)
        if table:
            chunks.append(header + "\n")
            chunks.extend(_format_entry(e) + "\n" for e in table.values())
    if base.alo_rules:
        chunks.append("#ALO-RULES\n")
        for rule in base.alo_rules.values():
            lines = [rule.name]
            lines.extend("{%s = %s}" % (v, p) for v, p in rule.variables.items())
            lines.extend(
                "%s -> %s" % (_format_segments(p.lhs), _format_segments(p.rhs))
                for p in rule.productions
            )
            chunks.append("\n".join(lines) + "\n")
    if base.data_dict:
        chunks.append("#DATA-DICT\n")
        decl_lines = []
        for decl in base.data_dict.values():
            if decl.kind == OPEN:
                decl_lines.append("%s =" % decl.label)
            elif decl.kind == CLOSED:
                decl_lines.append(
                    "%s = %s" % (decl.label, " ".join(a.rendered() for a in decl.values))
                )
            else:
                decl_lines.append(
                    "%s = %s"
                    % (decl.label, " ".join("@(%s)" % " ".join(alt) for alt in decl.alternatives))
                )
        chunks.append("\n".join(decl_lines) + "\n")
    rules = base.dict_rules
    if rules.lexemes or rules.morphemes or rules.words:
        chunks.append("#DICT-RULES\n")
        for keyword, group in (
            ("LEXEMES", rules.lexemes),
            ("MORPHEMES", rules.morphemes),
            ("WORDS", rules.words),
        ):
            if group:
                chunks.append(keyword + "\n")
                chunks.extend(_format_dict_rule(r) + "\n" for r in group)
    return "\n".join(chunks)
