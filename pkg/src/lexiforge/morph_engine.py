"""Concatenative morphology driven by word-formation rules.

A rule file starts with `#WF-RULES` and holds blank-line separated
rules: a header `LHS -> C1 C2 ...` naming the result category and at
least two constituents, then indented equations.  `Ci path = Cj path`
unifies two constituent subtrees (copying when one side is absent,
since these trees cannot share nodes), and `Ci path = v1 v2 ...`
unifies a constituent subtree with a literal value set.

Analysis tries, for every rule, every split of the surface into as
many non-empty parts as the rule has constituents, looks each part up
in the object dictionary, and runs the equations over each combination
of entries; a combination survives when every equation unifies.
Generation runs the same engine over candidate entries drawn from the
lemma and concatenation-category indexes and keeps the candidates
whose result tree unifies with the caller's constraints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable

from .feature_tree import EMPTY_TREE, FeatureTree, ValueSet, unify
from .object_dict import ObjectDictionary, ObjectEntry
from .source import (
    SourceSyntaxError,
    _logical_lines,
    parse_equation,
    term_node,
)


class UnknownConstituent(SourceSyntaxError):
    pass


@dataclass
class PathEquation:
    left_root: str
    left_path: tuple[str, ...]
    right_root: str
    right_path: tuple[str, ...]


@dataclass
class ValueEquation:
    root: str
    path: tuple[str, ...]
    values: ValueSet


@dataclass
class WFRule:
    name: str
    lhs: str
    rhs: tuple[str, ...]
    equations: tuple = ()
    file: str | None = field(default=None, compare=False)
    line: int | None = field(default=None, compare=False)


@dataclass
class Analysis:
    surface: str
    lemma: str | None
    category: str
    tree: FeatureTree
    segmentation: tuple[tuple[str, ObjectEntry], ...]


# -- parsing ---------------------------------------------------------------

def _parse_wf_equation(text: str, rule: WFRule, file, line):
    eq = parse_equation(text.strip(), file, line)
    # parse_equation splits on '='; reinterpret both sides here
    roots = {rule.lhs, *rule.rhs}
    left_root, *left_path = eq.path
    if left_root not in roots:
        raise UnknownConstituent(
            "unknown constituent '%s'" % left_root, file, line
        )
    if not left_path:
        raise SourceSyntaxError("expected a path after '%s'" % left_root, file, line)
    first = eq.values[0]
    node = term_node(eq.values)
    if not isinstance(node, ValueSet):
        raise SourceSyntaxError("rule calls are not allowed here", file, line)
    if first.text in roots and not first.quoted:
        right_root = first.text
        right_path = tuple(a.text for a in eq.values[1:])
        if any(a.quoted for a in eq.values[1:]):
            raise SourceSyntaxError("paths hold bare labels only", file, line)
        if not right_path:
            raise SourceSyntaxError(
                "expected a path after '%s'" % right_root, file, line
            )
        return PathEquation(left_root, tuple(left_path), right_root, right_path)
    return ValueEquation(left_root, tuple(left_path), node)


def parse_wf_rules(text: str, file: str | None = None) -> list[WFRule]:
    """Strict parse of a rule file; raises on the first problem."""
    lines = _logical_lines(text)
    rules: list[WFRule] = []
    current: WFRule | None = None
    equations: list = []
    saw_header = False

    def close():
        nonlocal current, equations
        if current is not None:
            current.equations = tuple(equations)
            rules.append(current)
            current, equations = None, []

    for line_no, raw in lines:
        body = raw.strip()
        if not body:
            continue
        if body == "#WF-RULES":
            if saw_header:
                raise SourceSyntaxError("duplicate #WF-RULES header", file, line_no)
            saw_header = True
            continue
        if not saw_header:
            raise SourceSyntaxError("expected the #WF-RULES header first", file, line_no)
        if not raw[0].isspace():
            close()
            parts = body.split()
            if len(parts) < 4 or parts[1] != "->":
                raise SourceSyntaxError(
                    "expected 'LHS -> C1 C2 ...' with at least two constituents",
                    file,
                    line_no,
                )
            lhs, rhs = parts[0], tuple(parts[2:])
            if len(set(rhs)) != len(rhs) or lhs in rhs:
                raise SourceSyntaxError("constituent labels must be distinct", file, line_no)
            current = WFRule(body, lhs, rhs, file=file, line=line_no)
            continue
        if current is None:
            raise SourceSyntaxError("equation outside any rule", file, line_no)
        equations.append(_parse_wf_equation(raw, current, file, line_no))
    close()
    return rules


# -- the equation engine ----------------------------------------------------

_BLOCKED = object()


def _peek(tree: FeatureTree, path: tuple[str, ...]):
    """Node at path, None when absent, _BLOCKED when below a leaf."""
    node = tree
    for label in path:
        if not isinstance(node, FeatureTree):
            return _BLOCKED
        nxt = node.children.get(label)
        if nxt is None:
            return None
        node = nxt
    return node


def _execute(rule: WFRule, trees: dict[str, FeatureTree]) -> dict[str, FeatureTree] | None:
    """Run the equations; None when the candidate fails.

    Equation order never changes success or failure, only which
    intermediate trees exist along the way.
    """
    for eq in rule.equations:
        if isinstance(eq, ValueEquation):
            tree = trees[eq.root]
            node = _peek(tree, eq.path)
            if node is _BLOCKED or isinstance(node, FeatureTree):
                return None
            if node is None:
                trees[eq.root] = tree.set(eq.path, eq.values)
                continue
            merged = node.intersect(eq.values)
            if merged is None:
                return None
            trees[eq.root] = tree.set(eq.path, merged)
            continue
        left = _peek(trees[eq.left_root], eq.left_path)
        right = _peek(trees[eq.right_root], eq.right_path)
        if left is _BLOCKED or right is _BLOCKED:
            return None
        if left is None and right is None:
            continue
        if left is None:
            trees[eq.left_root] = trees[eq.left_root].set(eq.left_path, right)
            continue
        if right is None:
            trees[eq.right_root] = trees[eq.right_root].set(eq.right_path, left)
            continue
        if isinstance(left, FeatureTree) != isinstance(right, FeatureTree):
            return None
        if isinstance(left, FeatureTree):
            merged = unify(left, right)
        else:
            merged = left.intersect(right)
        if merged is None:
            return None
        trees[eq.left_root] = trees[eq.left_root].set(eq.left_path, merged)
        trees[eq.right_root] = trees[eq.right_root].set(eq.right_path, merged)
    return trees


def _lemma_of(tree: FeatureTree, lex_feature: str) -> str | None:
    node = tree.get((lex_feature,))
    if isinstance(node, ValueSet) and len(node) == 1:
        return node.values[0].text
    return None


# -- analysis ----------------------------------------------------------------

def _splits(surface: str, n: int):
    for cuts in combinations(range(1, len(surface)), n - 1):
        bounds = (0,) + cuts + (len(surface),)
        yield tuple(surface[bounds[i] : bounds[i + 1]] for i in range(n))


def analyze(
    surface: str,
    dictionary: ObjectDictionary,
    rules: Iterable[WFRule],
) -> list[Analysis]:
    """Every reading of the surface as a rule-governed concatenation.

    Exact string match only: each part must be a dictionary surface as
    written.  Results are deduplicated by category and canonical form,
    ordered by rule, then split position, then entry order.
    """
    out: list[Analysis] = []
    seen: set[tuple[str, str]] = set()
    for rule in rules:
        n = len(rule.rhs)
        for parts in _splits(surface, n):
            candidate_lists = [dictionary.lookup(p) for p in parts]
            if not all(candidate_lists):
                continue
            for combo in product(*candidate_lists):
                trees = {label: entry.tree for label, entry in zip(rule.rhs, combo)}
                trees[rule.lhs] = EMPTY_TREE
                result = _execute(rule, trees)
                if result is None:
                    continue
                tree = result[rule.lhs]
                key = (rule.lhs, tree.canonical_form())
                if key in seen:
                    continue
                seen.add(key)
                out.append(
                    Analysis(
                        surface,
                        _lemma_of(tree, dictionary.lex_feature),
                        rule.lhs,
                        tree,
                        tuple(zip(parts, combo)),
                    )
                )
    return out


# -- generation ---------------------------------------------------------------

def _lemma_linked(rule: WFRule, lex_feature: str) -> set[str]:
    """Constituents the rule equates with the result's lemma feature."""
    linked: set[str] = set()
    for eq in rule.equations:
        if not isinstance(eq, PathEquation):
            continue
        if eq.left_root == rule.lhs and eq.left_path == (lex_feature,):
            if eq.right_root != rule.lhs:
                linked.add(eq.right_root)
        elif eq.right_root == rule.lhs and eq.right_path == (lex_feature,):
            if eq.left_root != rule.lhs:
                linked.add(eq.left_root)
    return linked


def _concat_category(rule: WFRule, label: str, concat_feature: str) -> str | None:
    for eq in rule.equations:
        if (
            isinstance(eq, ValueEquation)
            and eq.root == label
            and eq.path == (concat_feature,)
            and len(eq.values) == 1
        ):
            return eq.values.values[0].text
    return None


def generate(
    lemma: str,
    constraints: FeatureTree,
    dictionary: ObjectDictionary,
    rules: Iterable[WFRule],
) -> list[str]:
    """Surfaces derivable for the lemma whose result tree unifies with
    the constraints, deduplicated and sorted."""
    surfaces: set[str] = set()
    for rule in rules:
        linked = _lemma_linked(rule, dictionary.lex_feature)
        candidate_lists: list[list[ObjectEntry]] = []
        for label in rule.rhs:
            if label in linked:
                candidates = dictionary.lookup_by_lemma(lemma)
            else:
                category = _concat_category(rule, label, dictionary.concat_feature)
                if category is not None:
                    candidates = dictionary.lookup_by_concat(category)
                else:
                    candidates = list(dictionary.entries)
            candidate_lists.append(candidates)
        if not all(candidate_lists):
            continue
        for combo in product(*candidate_lists):
            trees = {label: entry.tree for label, entry in zip(rule.rhs, combo)}
            trees[rule.lhs] = EMPTY_TREE
            result = _execute(rule, trees)
            if result is None:
                continue
            tree = result[rule.lhs]
            lex = tree.get((dictionary.lex_feature,))
            if not isinstance(lex, ValueSet) or lemma not in {
                a.text for a in lex.values
            }:
                continue
            if unify(tree, constraints) is None:
                continue
            surfaces.add("".join(entry.surface for entry in combo))
    return sorted(surfaces)
