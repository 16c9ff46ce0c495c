"""Default multiple inheritance over class hierarchies.

An entry names its parent classes in priority order.  Linearization is
a depth-first, left-to-right walk from the entry where only the first
occurrence of a revisited class is kept, so an earlier (higher
priority) mention always wins.  Resolution folds the linearized bodies
from least to most specific with override merging, then evaluates the
placeholders the fold left behind: `$rule` applies the named allomorphy
rule to the resolving entry's own name (not the class that wrote the
equation), and `$$` is that name itself.  A rule that does not match
simply removes its leaf, and interior nodes emptied that way are
pruned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .alo_rules import BadPattern, CompiledAloRule, compile_alo_rule
from .diagnostics import ERROR, Diagnostic
from .feature_tree import EMPTY_TREE, Atom, FeatureTree, ValueSet, is_symbol_text
from .source import Entry, RuleCall, SelfRef, SourceBase


class ResolveError(Exception):
    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class UnknownClass(ResolveError):
    pass


class InheritanceCycle(ResolveError):
    pass


class UnknownRule(ResolveError):
    pass


@dataclass
class ResolvedEntry:
    name: str
    tree: FeatureTree
    section: str


def linearize(entry: Entry, classes: Mapping[str, Entry]) -> tuple[str, ...]:
    """Ancestor names from most to least specific, entry first.

    Names are unique identifiers: a diamond contributes one occurrence
    (the earliest), while a class on the active descent path is a
    cycle.
    """
    order: list[str] = []
    seen: set[str] = set()
    active: list[str] = []

    def visit(name: str, parents: tuple[str, ...]):
        order.append(name)
        seen.add(name)
        active.append(name)
        for parent in parents:
            if parent in active:
                raise InheritanceCycle(
                    "inheritance cycle: %s" % " -> ".join(active + [parent])
                )
            if parent in seen:
                continue
            cls = classes.get(parent)
            if cls is None:
                raise UnknownClass("unknown class '%s'" % parent)
            visit(parent, cls.parents)
        active.pop()

    visit(entry.name, entry.parents)
    return tuple(order)


def _evaluate(
    tree: FeatureTree,
    entry_name: str,
    rules: Mapping[str, CompiledAloRule],
) -> FeatureTree:
    """Replace placeholders, dropping leaves whose rule does not match
    and pruning interior nodes that lost all their children."""
    children: dict = {}
    for label, node in tree.children.items():
        if isinstance(node, FeatureTree):
            sub = _evaluate(node, entry_name, rules)
            if sub.is_empty and not node.is_empty:
                continue
            children[label] = sub
        elif isinstance(node, RuleCall):
            rule = rules.get(node.rule)
            if rule is None:
                raise UnknownRule("unknown allomorphy rule '%s'" % node.rule)
            result = rule.apply(entry_name)
            if result is None:
                continue
            children[label] = ValueSet([Atom(result, quoted=not is_symbol_text(result))])
        elif isinstance(node, SelfRef):
            children[label] = ValueSet([Atom(entry_name)])
        else:
            children[label] = node
    return FeatureTree(children)


def compile_rules(
    base: SourceBase, diagnostics: list[Diagnostic] | None = None
) -> dict[str, CompiledAloRule]:
    """Compile every allomorphy rule, reporting failures as diagnostics."""
    compiled: dict[str, CompiledAloRule] = {}
    for name, rule in base.alo_rules.items():
        try:
            compiled[name] = compile_alo_rule(rule)
        except BadPattern as exc:
            if diagnostics is None:
                raise
            diagnostics.append(
                Diagnostic(ERROR, str(exc), file=rule.file, line=rule.line)
            )
    return compiled


def resolve(
    entry: Entry,
    base: SourceBase,
    compiled_rules: Mapping[str, CompiledAloRule] | None = None,
    class_trees: Mapping[str, FeatureTree] | None = None,
) -> ResolvedEntry:
    """Inherited view of one entry with all placeholders evaluated.

    Raises UnknownClass, InheritanceCycle, UnknownRule, or
    PathThroughLeaf (from an internally inconsistent body).
    """
    if compiled_rules is None:
        compiled_rules = compile_rules(base)
    order = linearize(entry, base.classes)
    tree = EMPTY_TREE
    for name in reversed(order):
        if name == entry.name:
            body = entry.tree()
        elif class_trees is not None and name in class_trees:
            body = class_trees[name]
        else:
            body = base.classes[name].tree()
        tree = tree.merge(body)
    return ResolvedEntry(entry.name, _evaluate(tree, entry.name, compiled_rules), entry.section)


def resolve_all(
    base: SourceBase,
) -> tuple[dict[str, list[ResolvedEntry]], list[Diagnostic]]:
    """Resolve every morpheme, word and lexeme; classes are never
    emitted.  A failing entry is skipped with a diagnostic and the rest
    of the base still resolves."""
    diagnostics: list[Diagnostic] = []
    compiled = compile_rules(base, diagnostics)
    class_trees: dict[str, FeatureTree] = {}
    for name, cls in base.classes.items():
        try:
            class_trees[name] = cls.tree()
        except Exception as exc:
            diagnostics.append(
                Diagnostic(ERROR, str(exc), file=cls.file, line=cls.line, entry=name)
            )
    resolved: dict[str, list[ResolvedEntry]] = {}
    for section in ("morphemes", "words", "lexemes"):
        out: list[ResolvedEntry] = []
        for entry in base.entries_in(section).values():
            try:
                out.append(resolve(entry, base, compiled, class_trees))
            except Exception as exc:
                diagnostics.append(
                    Diagnostic(
                        ERROR,
                        str(exc),
                        file=entry.file,
                        line=entry.line,
                        entry=entry.name,
                    )
                )
        resolved[section] = out
    return resolved, diagnostics
