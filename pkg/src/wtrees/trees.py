"""Rooted, unrooted and twisted trees with oriented trivalent vertices.

A rooted tree is a nested bracket of leaves.  ``Node(left, right)`` carries
the cyclic order (left, right, root-edge) at its vertex, so swapping the two
children reverses the orientation of that vertex.

An unrooted tree is stored as the inner product ``<left, right>`` of two
rooted trees whose roots are glued to a single non-vertex point.  Equality
and hashing of unrooted trees is up to orientation-preserving, label
preserving isomorphism, through a canonical string key.

Leaves may carry a decoration (a group element name).  The decoration sits on
the leaf edge, directed from the leaf towards the rest of the tree.

>>> t = parse_tree("<1,(2,3)>")
>>> print_tree(t), order(t)
('<1,(2,3)>', 1)
>>> t == parse_tree("<(2,3),1>") == parse_tree("<2,(3,1)>")
True
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Union


@dataclass(frozen=True)
class Leaf:
    label: int
    deco: str | None = None

    def __str__(self) -> str:
        return print_tree(self)


@dataclass(frozen=True)
class Node:
    left: "RootedTree"
    right: "RootedTree"

    def __str__(self) -> str:
        return print_tree(self)


RootedTree = Union[Leaf, Node]


class UnrootedTree:
    """The tree <left, right>; compares equal up to oriented isomorphism."""

    __slots__ = ("left", "right", "_key")

    def __init__(self, left: RootedTree, right: RootedTree):
        self.left = left
        self.right = right
        self._key: str | None = None

    @property
    def key(self) -> str:
        if self._key is None:
            self._key = _oriented_key(self.left, self.right)
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, UnrootedTree) and self.key == other.key

    def __hash__(self) -> int:
        return hash(("U", self.key))

    def __repr__(self) -> str:
        return f"UnrootedTree({print_tree(self)})"

    def __str__(self) -> str:
        return print_tree(self)


@dataclass(frozen=True)
class TwistedTree:
    """J^inf: the rooted tree J with its root labelled by the twist symbol."""

    body: RootedTree

    @property
    def key(self) -> str:
        return _rooted_key(self.body) + "^inf"

    def __str__(self) -> str:
        return print_tree(self)


Tree = Union[Leaf, Node, UnrootedTree, TwistedTree]


class TreeSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        super().__init__(f"{msg} at position {pos}" + (f" in {text!r}" if text else ""))
        self.pos = pos


# ---------------------------------------------------------------------------
# construction and printing


def rooted_product(I: RootedTree, J: RootedTree) -> Node:
    return Node(I, J)


def inner_product(I: RootedTree, J: RootedTree) -> UnrootedTree:
    return UnrootedTree(I, J)


def order(t: Tree) -> int:
    """Number of trivalent vertices."""
    if isinstance(t, Leaf):
        return 0
    if isinstance(t, Node):
        return _rooted_order(t)
    if isinstance(t, UnrootedTree):
        return _rooted_order(t.left) + _rooted_order(t.right)
    if isinstance(t, TwistedTree):
        return _rooted_order(t.body)
    raise TypeError(f"not a tree: {t!r}")


@lru_cache(maxsize=None)
def _rooted_order(t: RootedTree) -> int:
    if isinstance(t, Leaf):
        return 0
    return 1 + _rooted_order(t.left) + _rooted_order(t.right)


@lru_cache(maxsize=None)
def _rooted_key(t: RootedTree) -> str:
    if isinstance(t, Leaf):
        return str(t.label) if t.deco is None else f"{t.label}{{{t.deco}}}"
    return f"({_rooted_key(t.left)},{_rooted_key(t.right)})"


def print_tree(t: Tree) -> str:
    if isinstance(t, (Leaf, Node)):
        return _rooted_key(t)
    if isinstance(t, UnrootedTree):
        return f"<{_rooted_key(t.left)},{_rooted_key(t.right)}>"
    if isinstance(t, TwistedTree):
        return _rooted_key(t.body) + "^inf"
    raise TypeError(f"not a tree: {t!r}")


def leaves(t: Tree) -> list[Leaf]:
    """Leaves in left-to-right reading order of the printed form."""
    if isinstance(t, Leaf):
        return [t]
    if isinstance(t, Node):
        return leaves(t.left) + leaves(t.right)
    if isinstance(t, UnrootedTree):
        return leaves(t.left) + leaves(t.right)
    return leaves(t.body)


def labels(t: Tree) -> list[int]:
    return [leaf.label for leaf in leaves(t)]


def is_decorated(t: Tree) -> bool:
    return any(leaf.deco is not None for leaf in leaves(t))


# ---------------------------------------------------------------------------
# parsing

class _Parser:
    def __init__(self, text: str, m: int | None):
        self.text = text
        self.m = m
        self.pos = 0

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            got = self.peek() or "end of input"
            raise TreeSyntaxError(f"expected {ch!r}, got {got!r}", self.pos, self.text)
        self.pos += 1

    def label(self) -> Leaf:
        self.peek()
        mo = re.compile(r"\d+").match(self.text, self.pos)
        if not mo:
            got = self.peek() or "end of input"
            raise TreeSyntaxError(f"expected a label or '(', got {got!r}", self.pos, self.text)
        start = self.pos
        value = int(mo.group())
        self.pos = mo.end()
        if value < 1 or (self.m is not None and value > self.m):
            bound = f"1..{self.m}" if self.m is not None else ">= 1"
            raise TreeSyntaxError(f"label {value} out of range {bound}", start, self.text)
        deco = None
        if self.peek() == "{":
            mo = re.compile(r"\{([A-Za-z0-9_]+)\}").match(self.text, self.pos)
            if not mo:
                raise TreeSyntaxError("malformed decoration", self.pos, self.text)
            deco = mo.group(1)
            self.pos = mo.end()
        return Leaf(value, deco)

    def rooted(self) -> RootedTree:
        if self.peek() == "(":
            self.pos += 1
            left = self.rooted()
            self.expect(",")
            right = self.rooted()
            self.expect(")")
            if self.peek() == "{":
                raise TreeSyntaxError(
                    "decorations are only supported on leaf edges", self.pos, self.text
                )
            return Node(left, right)
        return self.label()

    def tree(self) -> Tree:
        if self.peek() == "<":
            self.pos += 1
            left = self.rooted()
            self.expect(",")
            right = self.rooted()
            self.expect(">")
            return UnrootedTree(left, right)
        body = self.rooted()
        if self.text.startswith("^inf", self.pos):
            self.pos += 4
            return TwistedTree(body)
        return body

    def done(self) -> None:
        if self.peek():
            raise TreeSyntaxError(f"unexpected {self.peek()!r}", self.pos, self.text)


def parse_tree(text: str, m: int | None = None) -> Tree:
    """Parse a rooted ``(1,2)``, unrooted ``<(1,2),3>`` or twisted ``(1,2)^inf`` tree."""
    p = _Parser(text, m)
    t = p.tree()
    p.done()
    return t


# ---------------------------------------------------------------------------
# re-rooting and canonical keys


class _Graph:
    """Adjacency form of <P,Q>.  Internal vertices keep their cyclic order."""

    def __init__(self, P: RootedTree, Q: RootedTree):
        self.nbrs: list[list[int]] = []
        self.leaf: dict[int, Leaf] = {}
        p = self._add(P)
        q = self._add(Q)
        self.nbrs[p].append(q)
        self.nbrs[q].append(p)

    def _add(self, t: RootedTree) -> int:
        v = len(self.nbrs)
        self.nbrs.append([])
        if isinstance(t, Leaf):
            self.leaf[v] = t
            return v
        a = self._add(t.left)
        b = self._add(t.right)
        self.nbrs[a].append(v)
        self.nbrs[b].append(v)
        # cyclic order (left, right, parent); parent is appended later
        self.nbrs[v] = [a, b]
        return v

    def rooted(self, v: int, parent: int) -> RootedTree:
        """The rooted tree hanging from v, seen from its neighbour parent."""
        if v in self.leaf:
            return self.leaf[v]
        a, b, c = self.nbrs[v]
        if parent == a:
            x, y = b, c
        elif parent == b:
            x, y = c, a
        else:
            x, y = a, b
        return Node(self.rooted(x, v), self.rooted(y, v))

    def edges(self) -> Iterator[tuple[int, int]]:
        for v, ns in enumerate(self.nbrs):
            for u in ns:
                if v < u:
                    yield v, u

    def cuts(self) -> Iterator[tuple[RootedTree, RootedTree]]:
        for v, u in self.edges():
            yield self.rooted(v, u), self.rooted(u, v)


@lru_cache(maxsize=200_000)
def _oriented_key(P: RootedTree, Q: RootedTree) -> str:
    best = None
    for A, B in _Graph(P, Q).cuts():
        a, b = _rooted_key(A), _rooted_key(B)
        for k in (f"<{a},{b}>", f"<{b},{a}>"):
            if best is None or k < best:
                best = k
    return best


def cuts(t: UnrootedTree) -> list[tuple[RootedTree, RootedTree]]:
    """All ways of writing t as <A,B>, one per edge, in a fixed order."""
    return list(_Graph(t.left, t.right).cuts())


def canonical_tree(t: UnrootedTree) -> UnrootedTree:
    """The representative <A,B> of t's oriented class whose printed form is minimal."""
    k = t.key
    for A, B in cuts(t):
        for X, Y in ((A, B), (B, A)):
            if f"<{_rooted_key(X)},{_rooted_key(Y)}>" == k:
                return UnrootedTree(X, Y)
    raise AssertionError("canonical key not realised by any cut")


def reroot_at_leaves(t: UnrootedTree) -> list[tuple[Leaf, RootedTree]]:
    """For each leaf v of t, the pair (v, rest of t rooted at v's edge)."""
    g = _Graph(t.left, t.right)
    out = []
    for v, leaf in g.leaf.items():
        (u,) = g.nbrs[v]
        out.append((leaf, g.rooted(u, v)))
    return out


def flip_positions(t: RootedTree, path: tuple = ()) -> list[tuple]:
    """Paths (tuples of 0/1) to every Node of a rooted tree, pre-order."""
    if isinstance(t, Leaf):
        return []
    return [path] + flip_positions(t.left, path + (0,)) + flip_positions(t.right, path + (1,))


def subtree_at(t: RootedTree, path: tuple) -> RootedTree:
    for step in path:
        t = t.left if step == 0 else t.right
    return t


def replace_at(t: RootedTree, path: tuple, new: RootedTree) -> RootedTree:
    if not path:
        return new
    if path[0] == 0:
        return Node(replace_at(t.left, path[1:], new), t.right)
    return Node(t.left, replace_at(t.right, path[1:], new))


def flip_at(t: RootedTree, path: tuple) -> RootedTree:
    """Reverse the orientation of the vertex at path."""
    s = subtree_at(t, path)
    return replace_at(t, path, Node(s.right, s.left))


def _flip_variants(t: RootedTree) -> Iterator[tuple[RootedTree, int]]:
    """Every re-orientation of t with the parity of the number of flips."""
    if isinstance(t, Leaf):
        yield t, 0
        return
    for (l, pl), (r, pr) in product(list(_flip_variants(t.left)), list(_flip_variants(t.right))):
        yield Node(l, r), pl + pr
        yield Node(r, l), pl + pr + 1


def canonical_form(t: UnrootedTree) -> tuple[UnrootedTree, int]:
    """Representative of t up to all vertex re-orientations, and the sign picked up.

    The sign is (-1)^(number of flips) taking t to the representative.  When
    t has an orientation-reversing automorphism both signs are possible and
    +1 is reported, so the sign is advisory only.
    """
    best: dict[str, int] = {}
    for (L, pl), (R, pr) in product(list(_flip_variants(t.left)), list(_flip_variants(t.right))):
        k = _oriented_key(L, R)
        parity = (pl + pr) % 2
        best[k] = min(best.get(k, 1), parity)
    k = min(best)
    rep = parse_tree(k)
    return canonical_tree(rep), (-1) ** best[k]


def twisted_key(J: RootedTree) -> str:
    """Key of J^inf up to the symmetry (-J)^inf = J^inf."""
    return _sym_body(J)[0]


@lru_cache(maxsize=None)
def _sym_body(J: RootedTree) -> tuple[str, RootedTree]:
    best = None
    for V, _ in _flip_variants(J):
        k = _rooted_key(V)
        if best is None or k < best[0]:
            best = (k, V)
    return best


def symmetric_body(J: RootedTree) -> RootedTree:
    """Representative of J up to vertex re-orientations."""
    return _sym_body(J)[1]


# ---------------------------------------------------------------------------
# shape predicates


def is_simple(t: UnrootedTree) -> bool:
    """Every trivalent vertex is adjacent to a univalent vertex."""
    g = _Graph(t.left, t.right)
    return all(
        any(u in g.leaf for u in g.nbrs[v]) for v in range(len(g.nbrs)) if v not in g.leaf
    )


def _perfect_height(t: RootedTree) -> int | None:
    # Y^1 is a single edge and Y^k = (Y^(k-1), Y^(k-1))
    if isinstance(t, Leaf):
        return 1
    a, b = _perfect_height(t.left), _perfect_height(t.right)
    if a is None or a != b:
        return None
    return a + 1


def symmetric_height(t: UnrootedTree) -> float | None:
    """k for t = <Y^k,Y^k>, k + 0.5 for <Y^(k+1),Y^k>, None otherwise."""
    best = None
    for A, B in cuts(t):
        a, b = _perfect_height(A), _perfect_height(B)
        if a is None or b is None or abs(a - b) > 1:
            continue
        h = min(a, b) + (0.5 if a != b else 0.0)
        best = h if best is None else max(best, h)
    return best


def is_symmetric_height(t: UnrootedTree, n: float) -> bool:
    """True when t is a symmetric tree of height at least n."""
    h = symmetric_height(t)
    return h is not None and h >= n


# ---------------------------------------------------------------------------
# enumeration


def rooted_trees(order_: int, labels_: tuple[int, ...]) -> Iterator[RootedTree]:
    """All oriented rooted trees of the given order with leaves from labels_."""
    yield from _rooted_trees(order_, tuple(labels_))


@lru_cache(maxsize=None)
def _rooted_trees(order_: int, labels_: tuple[int, ...]) -> tuple[RootedTree, ...]:
    if order_ == 0:
        return tuple(Leaf(i) for i in labels_)
    out = []
    for k in range(order_):
        for L in _rooted_trees(k, labels_):
            for R in _rooted_trees(order_ - 1 - k, labels_):
                out.append(Node(L, R))
    return tuple(out)


def unrooted_trees(order_: int, labels_: tuple[int, ...]) -> list[UnrootedTree]:
    """Oriented isomorphism classes of unrooted trees, sorted by key."""
    seen: dict[str, UnrootedTree] = {}
    if order_ == 0:
        for i in labels_:
            for j in labels_:
                t = UnrootedTree(Leaf(i), Leaf(j))
                seen.setdefault(t.key, t)
    else:
        for i in labels_:
            for Q in _rooted_trees(order_, tuple(labels_)):
                t = UnrootedTree(Leaf(i), Q)
                seen.setdefault(t.key, t)
    return [canonical_tree(seen[k]) for k in sorted(seen)]
