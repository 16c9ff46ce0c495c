"""Turns resolved entries into object dictionary entries.

A dictionary rule is a short program of equations executed top to
bottom against one resolved source entry.  `$$` on the right reads the
source entry's name and `@ path` reads (a copy of) the source subtree
at that path, minus any `(- path ...)` deletions; the source is never
modified.  `$$` on the left assigns the object entry's surface and
`@ path` merges into the object tree under construction, later
assignments overriding earlier ones.  An equation whose right side
reads an absent path is a no-op, so one rule per allomorph slot simply
does not fire for entries lacking that slot: the rule emits an entry
only when something gave `$$` a value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import ERROR, WARNING, Diagnostic, has_errors
from .feature_tree import Atom, EMPTY_TREE, FeatureTree, ValueSet, is_symbol_text
from .inheritance import resolve_all
from .object_dict import ObjectDictionary, ObjectEntry
from .source import DictRule, SourceBase
from .type_checker import check_base


class DictRuleError(Exception):
    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class NonAtomicName(DictRuleError):
    """`$$` ended up bound to several values or to an interior node."""


def apply_dict_rule(
    rule: DictRule,
    source_name: str,
    source_tree: FeatureTree,
    section: str = "",
    rule_index: int = -1,
) -> ObjectEntry | None:
    """Run one rule against one resolved entry.

    Returns None when the rule never assigned `$$` (the normal skip).
    Raises NonAtomicName or DictRuleError on lexicographer errors, and
    lets PathThroughLeaf from target assignment propagate.
    """
    name_node = None
    target = EMPTY_TREE
    for eq in rule.equations:
        if eq.source is None:
            node = ValueSet([Atom(source_name, quoted=not is_symbol_text(source_name))])
        else:
            node = source_tree.get(eq.source)
            if node is None:
                continue
            if isinstance(node, FeatureTree):
                for dpath in eq.deletions:
                    node = node.delete(dpath)
        if eq.target is None:
            name_node = node
        elif eq.target == ():
            if not isinstance(node, FeatureTree):
                raise DictRuleError("cannot assign an atomic value to the whole entry")
            target = target.merge(node)
        else:
            existing = target.get(eq.target)
            if isinstance(existing, FeatureTree) and isinstance(node, FeatureTree):
                node = existing.merge(node)
            target = target.set(eq.target, node)
    if name_node is None:
        return None
    if isinstance(name_node, FeatureTree) or len(name_node) != 1:
        raise NonAtomicName("'$$' must come out as a single atomic value")
    surface = name_node.values[0].text
    if not surface:
        raise DictRuleError("the entry name came out empty")
    return ObjectEntry(surface, target, section, source_name, rule_index)


@dataclass
class CompileResult:
    dictionary: ObjectDictionary | None
    diagnostics: list[Diagnostic]

    @property
    def ok(self) -> bool:
        return self.dictionary is not None


def compile_base(
    base: SourceBase,
    lex_feature: str = "lex",
    concat_feature: str = "concat",
) -> CompileResult:
    """Full pipeline: resolve, type-check, apply dictionary rules, index.

    Diagnostics from every stage are aggregated.  Any error-severity
    diagnostic suppresses the dictionary; warnings never do.
    """
    resolved, diagnostics = resolve_all(base)
    diagnostics.extend(check_base(base, resolved))

    entries: list[ObjectEntry] = []
    for section in ("morphemes", "words", "lexemes"):
        rules = base.dict_rules.for_section(section)
        items = resolved[section]
        if items and not rules and "dict-rules" in base.sections_seen:
            diagnostics.append(
                Diagnostic(
                    WARNING,
                    "no dictionary rules for #%s; %d entries not emitted"
                    % (section.upper(), len(items)),
                )
            )
        for item in items:
            emitted = False
            for index, rule in enumerate(rules):
                try:
                    entry = apply_dict_rule(
                        rule, item.name, item.tree, section, index
                    )
                except Exception as exc:
                    diagnostics.append(
                        Diagnostic(
                            ERROR,
                            "rule %d: %s" % (index + 1, exc),
                            file=rule.file,
                            line=rule.line,
                            entry=item.name,
                        )
                    )
                    continue
                if entry is not None:
                    entries.append(entry)
                    emitted = True
            if section == "lexemes" and rules and not emitted:
                diagnostics.append(
                    Diagnostic(
                        WARNING,
                        "lemma produced no object entries",
                        entry=item.name,
                    )
                )

    if has_errors(diagnostics):
        return CompileResult(None, diagnostics)
    dictionary = ObjectDictionary.build(entries, lex_feature, concat_feature)
    diagnostics.extend(dictionary.warnings)
    return CompileResult(dictionary, diagnostics)
