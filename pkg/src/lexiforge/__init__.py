"""Lexicon compiler and unification-based morphology.

A human-edited source base (morphemes, words, lexemes, inheritance
classes, string rewriting rules, type declarations and compilation
rules) is compiled into an object dictionary indexed by surface form,
and word formation rules then analyze and generate inflected words
over that dictionary by feature unification.
"""

from .alo_rules import BadPattern, CompiledAloRule, compile_alo_rule
from .diagnostics import Diagnostic, ERROR, WARNING, has_errors
from .dict_compiler import CompileResult, apply_dict_rule, compile_base
from .feature_tree import (
    Atom,
    EMPTY_TREE,
    FeatureTree,
    PathThroughLeaf,
    ValueSet,
    leaf,
    unify,
)
from .inheritance import ResolveError, ResolvedEntry, linearize, resolve, resolve_all
from .morph_engine import Analysis, WFRule, analyze, generate, parse_wf_rules
from .object_dict import (
    FormatError,
    ObjectDictionary,
    ObjectEntry,
    VersionError,
    load,
    save,
)
from .source import (
    Entry,
    ParseResult,
    SourceBase,
    SourceSyntaxError,
    format_source,
    parse_source,
    parse_source_text,
)
from .type_checker import check_base, check_tree

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "Atom",
    "BadPattern",
    "CompileResult",
    "CompiledAloRule",
    "Diagnostic",
    "EMPTY_TREE",
    "ERROR",
    "Entry",
    "FeatureTree",
    "FormatError",
    "ObjectDictionary",
    "ObjectEntry",
    "ParseResult",
    "PathThroughLeaf",
    "ResolveError",
    "ResolvedEntry",
    "SourceBase",
    "SourceSyntaxError",
    "ValueSet",
    "VersionError",
    "WARNING",
    "WFRule",
    "analyze",
    "apply_dict_rule",
    "check_base",
    "check_tree",
    "compile_alo_rule",
    "compile_base",
    "format_source",
    "generate",
    "has_errors",
    "leaf",
    "linearize",
    "load",
    "parse_source",
    "parse_source_text",
    "parse_wf_rules",
    "resolve",
    "resolve_all",
    "save",
    "unify",
]
