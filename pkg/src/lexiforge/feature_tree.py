"""Tree-shaped feature structures with disjunctive leaf values.

This is the vocabulary every other module speaks: immutable trees whose
interior nodes map labels to children and whose leaves hold non-empty
sets of atomic values.  A leaf with several values is a disjunction;
unifying two leaves intersects their value sets, and an empty
intersection means the whole unification fails.

All operations are functional: they return new trees and never mutate
their operands, so trees can be shared freely across entries, indexes
and threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Union

# Characters that can never appear in a bare symbol or feature label.
RESERVED_CHARS = frozenset('=$()#;"\\')


def is_symbol_text(text: str) -> bool:
    """True if text can stand as a bare (unquoted) symbol token."""
    if not text:
        return False
    return not any(c.isspace() or c in RESERVED_CHARS for c in text)


class PathThroughLeaf(Exception):
    """A path tried to descend through a leaf node.

    Raised by set(); signals an inconsistent source base (some entry
    treats a feature both as atomic and as structured).
    """

    def __init__(self, path: tuple[str, ...], depth: int):
        self.path = tuple(path)
        self.depth = depth
        super().__init__(
            "path '%s' descends through the leaf at '%s'"
            % (" ".join(self.path), " ".join(self.path[:depth]))
        )


class Atom:
    """A single atomic value.

    `quoted` records whether the value was written as a quoted string.
    It drives parsing and printing only: two atoms with equal text are
    the same value no matter how they were spelled.
    """

    __slots__ = ("text", "quoted")

    def __init__(self, text: str, quoted: bool = False):
        if "\n" in text or "\r" in text:
            raise ValueError("atomic values may not contain newlines")
        self.text = text
        self.quoted = quoted

    def __eq__(self, other: object):
        if isinstance(other, Atom):
            return self.text == other.text
        return NotImplemented

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return "Atom(%r)" % self.text

    def rendered(self) -> str:
        """Source text for this value: bare when possible, else quoted."""
        if is_symbol_text(self.text) and not self.quoted:
            return self.text
        return '"%s"' % self.text.replace("\\", "\\\\").replace('"', '\\"')


class ValueSet:
    """Non-empty set of atoms held by a leaf.

    Source order is kept for display, but equality and every semantic
    operation treat the values as a set.  A quoted-string member must be
    the only member.
    """

    __slots__ = ("values", "_texts")

    def __init__(self, values: Iterable[Atom]):
        vals: list[Atom] = []
        texts: set[str] = set()
        for v in values:
            if v.text not in texts:
                texts.add(v.text)
                vals.append(v)
        if not vals:
            raise ValueError("a leaf needs at least one value")
        if len(vals) > 1 and any(v.quoted for v in vals):
            raise ValueError("a string value must be the only value of its leaf")
        self.values = tuple(vals)
        self._texts = frozenset(texts)

    def texts(self) -> frozenset[str]:
        return self._texts

    def intersect(self, other: "ValueSet") -> "ValueSet | None":
        """Set intersection keeping this side's order; None when empty."""
        kept = [v for v in self.values if v.text in other._texts]
        if not kept:
            return None
        return ValueSet(kept)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other: object):
        if isinstance(other, ValueSet):
            return self._texts == other._texts
        return NotImplemented

    def __hash__(self):
        return hash(self._texts)

    def __repr__(self):
        return "ValueSet(%s)" % " ".join(v.rendered() for v in self.values)

    def rendered(self) -> str:
        """Values in canonical (sorted) order, space separated."""
        return " ".join(v.rendered() for v in sorted(self.values, key=lambda a: a.text))


def leaf(*texts: str, quoted: bool = False) -> ValueSet:
    return ValueSet([Atom(t, quoted) for t in texts])


class FeatureTree:
    """Immutable interior node: an ordered mapping from labels to children.

    Children are either FeatureTree nodes or leaves.  Any child that is
    not a FeatureTree is treated as a leaf by the structural operations
    (get/set/delete/merge), which lets the resolver thread rule-call
    placeholders through merging; unify and canonical_form demand real
    ValueSet leaves.
    """

    __slots__ = ("children",)

    def __init__(self, children: Mapping[str, "Node"] | None = None):
        items = dict(children) if children else {}
        for label in items:
            if not is_symbol_text(label):
                raise ValueError("invalid feature label %r" % (label,))
        self.children = items

    # -- structural operations ------------------------------------------

    def get(self, path: Iterable[str]) -> "Node | None":
        """Node at path, or None when absent (or below a leaf)."""
        node: Node = self
        for label in path:
            if not isinstance(node, FeatureTree):
                return None
            nxt = node.children.get(label)
            if nxt is None:
                return None
            node = nxt
        return node

    def set(self, path: Iterable[str], node: "Node") -> "FeatureTree":
        """Replace the node at path, creating missing interior nodes.

        Augments: siblings along the way are untouched.  Raises
        PathThroughLeaf when a proper prefix of path is a leaf.
        """
        p = tuple(path)
        if not p:
            raise ValueError("cannot set the empty path")
        return self._set(p, 0, node)

    def _set(self, path: tuple[str, ...], i: int, node: "Node") -> "FeatureTree":
        children = dict(self.children)
        label = path[i]
        if i == len(path) - 1:
            children[label] = node
            return FeatureTree(children)
        child = self.children.get(label)
        if child is None:
            child = _EMPTY
        elif not isinstance(child, FeatureTree):
            raise PathThroughLeaf(path, i + 1)
        children[label] = child._set(path, i + 1, node)
        return FeatureTree(children)

    def delete(self, path: Iterable[str]) -> "FeatureTree":
        """Remove the node at path; removing an absent path is a no-op.

        A parent emptied by the removal stays in place as an empty
        interior node.
        """
        p = tuple(path)
        if not p:
            return self
        return self._delete(p, 0)

    def _delete(self, path: tuple[str, ...], i: int) -> "FeatureTree":
        label = path[i]
        child = self.children.get(label)
        if child is None:
            return self
        if i == len(path) - 1:
            children = dict(self.children)
            del children[label]
            return FeatureTree(children)
        if not isinstance(child, FeatureTree):
            return self
        replaced = child._delete(path, i + 1)
        if replaced is child:
            return self
        children = dict(self.children)
        children[label] = replaced
        return FeatureTree(children)

    def merge(self, overlay: "FeatureTree") -> "FeatureTree":
        """Non-monotonic override union: the overlay wins on clashes.

        Where both sides define a label, two interiors merge recursively
        and any other combination is replaced wholesale by the overlay
        node.  Associative; the empty tree is its identity.
        """
        children = dict(self.children)
        for label, onode in overlay.children.items():
            mine = children.get(label)
            if isinstance(mine, FeatureTree) and isinstance(onode, FeatureTree):
                children[label] = mine.merge(onode)
            else:
                children[label] = onode
        return FeatureTree(children)

    # -- inspection ------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.children

    def leaves(self) -> Iterator[tuple[tuple[str, ...], ValueSet]]:
        """(path, values) pairs in sorted path order; ValueSet leaves only."""
        yield from self._leaves(())

    def _leaves(self, prefix: tuple[str, ...]):
        for label in sorted(self.children):
            node = self.children[label]
            path = prefix + (label,)
            if isinstance(node, FeatureTree):
                yield from node._leaves(path)
            elif isinstance(node, ValueSet):
                yield path, node
            else:
                raise ValueError(
                    "tree holds an unevaluated placeholder at '%s'" % " ".join(path)
                )

    def canonical_form(self) -> str:
        """Deterministic text form: one 'path = values' line per leaf.

        Paths sort lexicographically, values sort within each leaf, and
        the output ends with a newline unless the tree has no leaves.
        Two trees are semantically equal exactly when their canonical
        forms match, empty interior nodes aside (they contribute no
        lines).
        """
        return "".join(
            "%s = %s\n" % (" ".join(path), values.rendered())
            for path, values in self.leaves()
        )

    def __eq__(self, other: object):
        if not isinstance(other, FeatureTree):
            return NotImplemented
        if self.children.keys() != other.children.keys():
            return False
        return all(self.children[k] == other.children[k] for k in self.children)

    def __repr__(self):
        return "FeatureTree(%r)" % (self.children,)


Node = Union[FeatureTree, ValueSet]

_EMPTY = FeatureTree()
EMPTY_TREE = _EMPTY


def unify(a: FeatureTree, b: FeatureTree) -> FeatureTree | None:
    """Most general tree compatible with both operands, or None.

    Labels present on one side only are copied; shared interior nodes
    unify recursively; shared leaves intersect their value sets.  Any
    empty intersection or leaf/interior clash fails the whole
    unification.  Commutative up to canonical form, idempotent, and
    the empty tree is its unit.
    """
    children: dict[str, Node] = {}
    for label, anode in a.children.items():
        bnode = b.children.get(label)
        if bnode is None:
            children[label] = anode
            continue
        merged = _unify_nodes(anode, bnode)
        if merged is None:
            return None
        children[label] = merged
    for label, bnode in b.children.items():
        if label not in a.children:
            children[label] = bnode
    return FeatureTree(children)


def _unify_nodes(x: Node, y: Node) -> Node | None:
    if isinstance(x, FeatureTree) and isinstance(y, FeatureTree):
        return unify(x, y)
    if isinstance(x, ValueSet) and isinstance(y, ValueSet):
        return x.intersect(y)
    return None
