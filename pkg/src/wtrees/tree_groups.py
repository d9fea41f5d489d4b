"""Presentations of the tree groups.

Kinds:

``framed``   T_n: oriented unitrivalent trees of order n modulo AS and IHX.
``twisted``  T_n^inf: for odd n, T_n modulo boundary-twist trees <i,(J,J)>;
             for even n = 2j, framed order n trees together with twisted
             trees J^inf of order j, with symmetry, twisted IHX and interior
             twist relations added.
``lambda``   the non-repeating group: trees with distinct labels, AS and IHX,
             optionally decorated (orders 0 and 1) with HOL relations.
``t0``       order zero trees i -g-> j with the edge reversal relation.
``t1tilde``  order one trees on a single component with decorations, AS,
             HOL, FR and user supplied INT relations.

Every relation row is kept (including duplicates produced by different
generator trees) together with a short kind label.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .abelian import ElementCoords, Presentation, class_of
from .decorations import FiniteGroup, trivial_group
from .forest import SignedForest, is_non_repeating
from .trees import (
    Leaf,
    Node,
    RootedTree,
    TwistedTree,
    UnrootedTree,
    canonical_tree,
    cuts,
    flip_at,
    flip_positions,
    order,
    print_tree,
    rooted_trees,
    subtree_at,
    replace_at,
    unrooted_trees,
)

KINDS = ("framed", "twisted", "lambda", "t0", "t1tilde")


class CapExceeded(ValueError):
    pass


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    n: int
    m: int
    group: FiniteGroup | None = None
    int_relators: tuple = ()  # each relator: tuple of (generator key, coefficient)
    cap: int = 200_000

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GroupSpecError(f"unknown kind {self.kind!r}; expected one of {', '.join(KINDS)}")
        if self.n < 0 or self.m < 1:
            raise GroupSpecError("need n >= 0 and m >= 1")
        if self.kind == "t0" and self.n != 0:
            raise GroupSpecError("t0 is the order zero group")
        if self.kind == "t1tilde" and self.n != 1:
            raise GroupSpecError("t1tilde is an order one group")
        if self.group is not None and self.kind in ("framed", "twisted"):
            raise GroupSpecError("decorations are only supported for lambda, t0 and t1tilde")
        if self.kind == "lambda" and self.group is not None and self.n > 1:
            raise GroupSpecError("decorated lambda groups are supported for n <= 1 only")
        if self.int_relators and not (
            self.kind == "t1tilde" or (self.kind == "lambda" and self.n == 1)
        ):
            raise GroupSpecError("INT relators are only allowed for lambda with n=1 and t1tilde")

    @property
    def deco_group(self) -> FiniteGroup:
        return self.group if self.group is not None else trivial_group()

    def describe(self) -> str:
        name = {"framed": "T", "twisted": "T^inf", "lambda": "Lambda", "t0": "T", "t1tilde": "T~"}
        return f"{name[self.kind]}_{self.n}(m={self.m})"


# ---------------------------------------------------------------------------
# helpers


def _leaf_cut(t: UnrootedTree) -> tuple[Leaf, RootedTree]:
    """Write t (order >= 1) as <i, Q> with i a leaf."""
    for A, B in cuts(t):
        if isinstance(A, Leaf) and isinstance(B, Node):
            return A, B
        if isinstance(B, Leaf) and isinstance(A, Node):
            return B, A
    raise ValueError(f"{print_tree(t)} has no leaf cut")


def jacobi_terms(w: Node) -> list[RootedTree] | None:
    """Three rooted trees summing to zero by Jacobi, the first being w itself.

    For w = ((A,B),K) these are ((A,B),K), ((B,K),A), ((K,A),B); for
    w = (K,(A,B)) they are (K,(A,B)), (A,(B,K)), (B,(K,A)).
    """
    if isinstance(w.left, Node):
        A, B, K = w.left.left, w.left.right, w.right
        return [w, Node(Node(B, K), A), Node(Node(K, A), B)]
    if isinstance(w.right, Node):
        K, A, B = w.left, w.right.left, w.right.right
        return [w, Node(A, Node(B, K)), Node(B, Node(K, A))]
    return None


def internal_edges(J: RootedTree) -> list[tuple[tuple, int]]:
    """Node-to-node edges of a rooted tree as (parent path, child side)."""
    out = []
    for p in flip_positions(J):
        w = subtree_at(J, p)
        for side, child in ((0, w.left), (1, w.right)):
            if isinstance(child, Node):
                out.append((p, side))
    return out


def jacobi_at(J: RootedTree, edge: tuple[tuple, int]) -> list[RootedTree]:
    """The three Jacobi terms at an internal edge, placed back into J."""
    p, side = edge
    w = subtree_at(J, p)
    if side == 0:
        A, B, K = w.left.left, w.left.right, w.right
        local = [w, Node(Node(B, K), A), Node(Node(K, A), B)]
    else:
        K, A, B = w.left, w.right.left, w.right.right
        local = [w, Node(A, Node(B, K)), Node(B, Node(K, A))]
    return [replace_at(J, p, x) for x in local]


def ihx_terms(t: UnrootedTree, edge_index: int) -> list[UnrootedTree]:
    """The three trees of the IHX relation at the edge_index-th internal edge of t."""
    i, Q = _leaf_cut(t)
    edges = internal_edges(Q)
    if not 0 <= edge_index < len(edges):
        raise IndexError(f"{print_tree(t)} has {len(edges)} internal edges")
    return [UnrootedTree(i, x) for x in jacobi_at(Q, edges[edge_index])]


def decorated_y(a: tuple[int, str | None], b: tuple[int, str | None], c: tuple[int, str | None]) -> UnrootedTree:
    """The order one tree with cyclically ordered decorated leaves a, b, c."""
    return UnrootedTree(Node(Leaf(*a), Leaf(*b)), Leaf(*c))


def y_parts(t: UnrootedTree) -> list[Leaf]:
    """Leaves of an order one tree in cyclic order."""
    A, B = t.left, t.right
    if isinstance(A, Node):
        return [A.left, A.right, B]
    return [B.left, B.right, A]


# ---------------------------------------------------------------------------
# generators


def _catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _check_cap(spec: GroupSpec, estimate: int) -> None:
    if estimate > spec.cap:
        raise CapExceeded(
            f"{spec.describe()} needs about {estimate} generators, above the cap of {spec.cap}"
        )


def enumerate_generators(spec: GroupSpec) -> list:
    return list(_generators(spec))


@lru_cache(maxsize=64)
def _generators(spec: GroupSpec) -> tuple:
    m, n = spec.m, spec.n
    labels = tuple(range(1, m + 1))
    G = spec.deco_group
    if spec.kind in ("framed", "twisted"):
        _check_cap(spec, (m ** (n + 2) * _catalan(n)) // (n + 2) + 1)
        gens = list(unrooted_trees(n, labels))
        if spec.kind == "twisted" and n % 2 == 0:
            j = n // 2
            gens += sorted((TwistedTree(J) for J in rooted_trees(j, labels)), key=lambda t: t.key)
        _check_cap(spec, len(gens))
        return tuple(gens)
    if spec.kind == "lambda" and (spec.group is None or n >= 2):
        if m < n + 2:
            return ()
        _check_cap(spec, comb(m, n + 2) * _catalan(n) * 2 ** n * 24)
        gens = [t for t in unrooted_trees(n, labels) if is_non_repeating(t)]
        return tuple(gens)
    els = [G.normalize(g) for g in G.elements]
    if spec.kind in ("t0",) or (spec.kind == "lambda" and n == 0):
        _check_cap(spec, m * m * len(els))
        seen = {}
        for i in labels:
            for j in labels:
                if spec.kind == "lambda" and i == j:
                    continue
                for g in els:
                    t = UnrootedTree(Leaf(i, g), Leaf(j))
                    seen.setdefault(t.key, t)
        return tuple(canonical_tree(seen[k]) for k in sorted(seen))
    # decorated order one
    if spec.kind == "t1tilde":
        triples = [(1, 1, 1)]
    else:
        triples = [(i, j, k) for i in labels for j in labels for k in labels if len({i, j, k}) == 3]
    _check_cap(spec, len(triples) * len(els) ** 3)
    seen = {}
    for i, j, k in triples:
        for a in els:
            for b in els:
                for c in els:
                    t = decorated_y((i, a), (j, b), (k, c))
                    seen.setdefault(t.key, t)
    return tuple(canonical_tree(seen[k]) for k in sorted(seen))


def generator_key(t) -> str:
    return t.key


# ---------------------------------------------------------------------------
# relations


class _Rows:
    def __init__(self, index: dict[str, int]):
        self.index = index
        self.rows: list[dict[int, int]] = []
        self.kinds: list[str] = []

    def col(self, t) -> int:
        k = t.key
        if k not in self.index:
            raise KeyError(f"{print_tree(t)} is not a generator")
        return self.index[k]

    def add(self, kind: str, terms: Iterable[tuple[int, object]]) -> None:
        row: dict[int, int] = {}
        for c, t in terms:
            j = self.col(t)
            row[j] = row.get(j, 0) + c
        row = {k: v for k, v in row.items() if v}
        if row:
            self.rows.append(row)
            self.kinds.append(kind)


def _framed_relations(R: _Rows, gens: Sequence) -> None:
    for t in gens:
        if not isinstance(t, UnrootedTree) or order(t) == 0:
            continue
        i, Q = _leaf_cut(t)
        for p in flip_positions(Q):
            R.add("AS", [(1, t), (1, UnrootedTree(i, flip_at(Q, p)))])
        for e in internal_edges(Q):
            R.add("IHX", [(1, UnrootedTree(i, x)) for x in jacobi_at(Q, e)])


def _twisted_relations(R: _Rows, gens: Sequence) -> None:
    for t in gens:
        if not isinstance(t, TwistedTree):
            continue
        J = t.body
        for p in flip_positions(J):
            R.add("symmetry", [(1, t), (-1, TwistedTree(flip_at(J, p)))])
        for e in internal_edges(J):
            T1, T2, T3 = jacobi_at(J, e)
            R.add(
                "twisted-IHX",
                [(1, TwistedTree(T1)), (-1, TwistedTree(T2)), (-1, TwistedTree(T3)),
                 (-1, UnrootedTree(T2, T3))],
            )
        R.add("interior-twist", [(2, t), (-1, UnrootedTree(J, J))])


def _boundary_twist_relations(R: _Rows, spec: GroupSpec) -> None:
    j = (spec.n + 1) // 2
    labels = tuple(range(1, spec.m + 1))
    for i in labels:
        for J in rooted_trees(j - 1, labels):
            R.add("boundary-twist", [(1, UnrootedTree(Leaf(i), Node(J, J)))])


def _hol_relations(R: _Rows, gens: Sequence, G: FiniteGroup) -> None:
    for t in gens:
        parts = y_parts(t)
        for g in G.elements:
            if g == G.identity:
                continue
            moved = [
                (leaf.label, G.normalize(G.mul(leaf.deco or G.identity, g))) for leaf in parts
            ]
            R.add("HOL", [(1, t), (-1, decorated_y(*moved))])


def _as_y_relations(R: _Rows, gens: Sequence) -> None:
    for t in gens:
        a, b, c = y_parts(t)
        R.add("AS", [(1, t), (1, decorated_y((b.label, b.deco), (a.label, a.deco), (c.label, c.deco)))])


def _or_relations(R: _Rows, gens: Sequence, G: FiniteGroup) -> None:
    for t in gens:
        A, B = t.left, t.right
        if B.deco is not None:
            A, B = B, A
        g = A.deco or G.identity
        R.add("OR", [(1, t), (-1, UnrootedTree(Leaf(B.label, G.normalize(G.inv(g))), Leaf(A.label)))])


def pair_tree(a: str, b: str, G: FiniteGroup) -> UnrootedTree:
    """The order one single-component tree written (a,b): decorations 1, a, b."""
    return decorated_y((1, None), (1, G.normalize(a)), (1, G.normalize(b)))


def _fr_relations(R: _Rows, G: FiniteGroup) -> None:
    for a in G.elements:
        R.add("FR", [(1, pair_tree(G.identity, a, G)), (1, pair_tree(a, a, G))])


@lru_cache(maxsize=64)
def build_presentation(spec: GroupSpec) -> Presentation:
    gens = _generators(spec)
    index = {t.key: k for k, t in enumerate(gens)}
    R = _Rows(index)
    G = spec.deco_group
    if spec.kind in ("framed", "twisted") or (spec.kind == "lambda" and (spec.group is None or spec.n >= 2)):
        _framed_relations(R, gens)
        if spec.kind == "twisted":
            if spec.n % 2:
                _boundary_twist_relations(R, spec)
            else:
                _twisted_relations(R, gens)
    elif spec.kind == "t0" or (spec.kind == "lambda" and spec.n == 0):
        _or_relations(R, gens, G)
    else:
        _as_y_relations(R, gens)
        _hol_relations(R, gens, G)
        if spec.kind == "t1tilde":
            _fr_relations(R, G)
        for rel in spec.int_relators:
            row: dict[int, int] = {}
            for key, c in rel:
                if key not in index:
                    raise GroupSpecError(f"malformed INT relator: {key!r} is not a generator")
                row[index[key]] = row.get(index[key], 0) + int(c)
            R.rows.append({k: v for k, v in row.items() if v})
            R.kinds.append("INT")
    return Presentation([t.key for t in gens], R.rows, R.kinds)


def group_structure(spec: GroupSpec):
    return build_presentation(spec).structure()


# ---------------------------------------------------------------------------
# forests


class ForestKindError(ValueError):
    pass


def forest_vector(spec: GroupSpec, f: SignedForest) -> dict[int, int]:
    p = build_presentation(spec)
    v: dict[int, int] = {}
    for c, t in f.entries():
        k = t.key
        if k not in p.index:
            raise ForestKindError(
                f"entry {c:+d}*{print_tree(t)} (order {order(t)}) is not a generator of {spec.describe()}"
            )
        j = p.index[k]
        v[j] = v.get(j, 0) + c
    return {k: x for k, x in v.items() if x}


def class_of_forest(spec: GroupSpec, f: SignedForest) -> ElementCoords:
    return class_of(build_presentation(spec), forest_vector(spec, f))


# ---------------------------------------------------------------------------
# INT relators


@dataclass(frozen=True)
class IntRelator:
    main: dict
    identifications: tuple = ()

    def rows(self) -> list[tuple]:
        """All rows as tuples of (generator key, coefficient), main row first."""
        return [tuple(sorted(self.main.items()))] + [tuple(sorted(r.items())) for r in self.identifications]


def int_relator(a: str, lambda0: Sequence[tuple[int, str]], w2: int, rp2: bool = False,
                group: FiniteGroup | None = None) -> IntRelator:
    """sum eps*(a,g) + w2*(a,1) in the order one single-component group."""
    G = group if group is not None else trivial_group()
    if w2 not in (0, 1):
        raise ValueError("w2 must be 0 or 1")
    if rp2 and G.mul(a, a) != G.identity:
        raise ValueError(f"rp2 mode needs a^2 = 1, but {a}*{a} = {G.mul(a, a)}")
    main: dict[str, int] = {}

    def put(acc, t, c):
        acc[t.key] = acc.get(t.key, 0) + c

    for eps, g in lambda0:
        put(main, pair_tree(a, g, G), int(eps))
    if w2:
        put(main, pair_tree(a, G.identity, G), 1)
    extra = []
    if rp2:
        for _, g in lambda0:
            row: dict[str, int] = {}
            put(row, pair_tree(a, g, G), 1)
            put(row, pair_tree(a, G.mul(g, a), G), 1)
            extra.append({k: v for k, v in row.items() if v})
    return IntRelator({k: v for k, v in main.items() if v}, tuple(extra))
