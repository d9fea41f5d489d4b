"""The free Lie algebra over the integers in the Lyndon basis.

Lie elements are stored as integer coordinates on Lyndon words.  To compute
with them we pass through the free associative algebra: the standard
bracketing P_w of a Lyndon word w expands to w plus lexicographically larger
words, so an associative Lie polynomial is put back into Lyndon coordinates by
repeatedly peeling off its smallest word.

>>> lyndon_basis(2, 3)
[(1, 1, 2), (1, 2, 2)]
>>> bracket(X(1), X(2)).coords
{(1, 2): 1}
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .abelian import left_kernel
from .trees import Leaf, Node, RootedTree, UnrootedTree, reroot_at_leaves

Word = tuple[int, ...]
Poly = dict[Word, int]


class NotLieError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lyndon words


@lru_cache(maxsize=None)
def _lyndon_upto(m: int, n: int) -> tuple[Word, ...]:
    """All Lyndon words of length <= n over 1..m in lex order (Duval's algorithm)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(x + 1 for x in w))
        k = len(w)
        while len(w) < n:
            w.append(w[-k])
        while w and w[-1] == m - 1:
            w.pop()
    return tuple(out)


def lyndon_basis(m: int, n: int) -> list[Word]:
    """Lyndon words of length exactly n over the alphabet 1..m, in lex order."""
    if m < 1 or n < 1:
        return []
    return [w for w in _lyndon_upto(m, n) if len(w) == n]


def is_lyndon(w: Word) -> bool:
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def witt_rank(m: int, n: int) -> int:
    """Rank of the degree n part of the free Lie algebra on m generators."""
    from sympy import divisors, mobius

    if n < 1:
        return 0
    return sum(int(mobius(d)) * m ** (n // d) for d in divisors(n)) // n


def standard_factorization(w: Word) -> tuple[Word, Word]:
    """w = uv with v the longest proper suffix of w that is Lyndon."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def lyndon_tree(w: Word) -> RootedTree:
    """The standard bracketing of a Lyndon word as a rooted tree."""
    if len(w) == 1:
        return Leaf(w[0])
    u, v = standard_factorization(w)
    return Node(lyndon_tree(u), lyndon_tree(v))


# ---------------------------------------------------------------------------
# associative polynomials


def _add_into(acc: Poly, p: Mapping[Word, int], c: int = 1) -> None:
    for w, x in p.items():
        nv = acc.get(w, 0) + c * x
        if nv:
            acc[w] = nv
        else:
            acc.pop(w, None)


def poly_mul(p: Mapping[Word, int], q: Mapping[Word, int]) -> Poly:
    out: Poly = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            nv = out.get(w, 0) + a * b
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
    return out


def commutator(p: Mapping[Word, int], q: Mapping[Word, int]) -> Poly:
    out = poly_mul(p, q)
    _add_into(out, poly_mul(q, p), -1)
    return out


@lru_cache(maxsize=None)
def _tree_poly(t: RootedTree) -> tuple:
    if isinstance(t, Leaf):
        return (((t.label,), 1),)
    return tuple(commutator(dict(_tree_poly(t.left)), dict(_tree_poly(t.right))).items())


def tree_poly(t: RootedTree) -> Poly:
    """Associative expansion of the bracket encoded by a rooted tree."""
    return dict(_tree_poly(t))


@lru_cache(maxsize=None)
def _lyndon_poly(w: Word) -> tuple:
    return _tree_poly(lyndon_tree(w))


def lyndon_poly(w: Word) -> Poly:
    return dict(_lyndon_poly(w))


# ---------------------------------------------------------------------------
# Lie elements


@dataclass(frozen=True)
class LieElement:
    degree: int
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        for w, c in self.coords.items():
            if len(w) != self.degree or not c:
                raise ValueError(f"bad Lie coordinate {w}: {c}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        if not self.coords and not other.coords:
            return True
        return self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coords.items()))))

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __add__(self, other: "LieElement") -> "LieElement":
        return lie_combination([(1, self), (1, other)])

    def __sub__(self, other: "LieElement") -> "LieElement":
        return lie_combination([(1, self), (-1, other)])

    def __neg__(self) -> "LieElement":
        return LieElement(self.degree, {w: -c for w, c in self.coords.items()})

    def __rmul__(self, k: int) -> "LieElement":
        return LieElement(self.degree, {w: k * c for w, c in self.coords.items() if k * c})

    def poly(self) -> Poly:
        out: Poly = {}
        for w, c in self.coords.items():
            _add_into(out, lyndon_poly(w), c)
        return out

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        return " ".join(f"{c:+d}*{bracket_string(w)}" for w, c in sorted(self.coords.items()))

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [{"word": word_string(w), "coef": c} for w, c in sorted(self.coords.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LieElement":
        return cls(int(data["degree"]), {parse_word(t["word"]): int(t["coef"]) for t in data["terms"] if t["coef"]})


def X(i: int) -> LieElement:
    return LieElement(1, {(i,): 1})


def lie_combination(terms: Iterable[tuple[int, LieElement]]) -> LieElement:
    out: dict = {}
    deg = None
    for c, e in terms:
        if e.coords:
            if deg is not None and e.degree != deg:
                raise ValueError("cannot add Lie elements of different degrees")
            deg = e.degree
        for w, x in e.coords.items():
            nv = out.get(w, 0) + c * x
            if nv:
                out[w] = nv
            else:
                out.pop(w, None)
    return LieElement(deg or 0, out)


def word_string(w: Word) -> str:
    return "".join(map(str, w)) if all(x < 10 for x in w) else ".".join(map(str, w))


def parse_word(s: str) -> Word:
    return tuple(int(x) for x in (s.split(".") if "." in s else s))


def bracket_string(w: Word) -> str:
    return _bracket_str(lyndon_tree(w))


def _bracket_str(t: RootedTree) -> str:
    if isinstance(t, Leaf):
        return f"X{t.label}"
    return f"[{_bracket_str(t.left)},{_bracket_str(t.right)}]"


def lie_from_poly(p: Mapping[Word, int], degree: int | None = None) -> LieElement:
    """Lyndon coordinates of a homogeneous associative polynomial that is a Lie element."""
    p = {w: c for w, c in p.items() if c}
    if not p:
        return LieElement(degree or 0, {})
    degs = {len(w) for w in p}
    if len(degs) != 1:
        raise NotLieError("polynomial is not homogeneous")
    (deg,) = degs
    out: dict = {}
    while p:
        w = min(p)
        c = p[w]
        if not is_lyndon(w):
            raise NotLieError(f"not a Lie element (leading word {word_string(w)} is not Lyndon)")
        out[w] = c
        _add_into(p, lyndon_poly(w), -c)
    return LieElement(deg, out)


def bracket(u: LieElement, v: LieElement) -> LieElement:
    if not u.coords or not v.coords:
        return LieElement(u.degree + v.degree, {})
    return lie_from_poly(commutator(u.poly(), v.poly()), u.degree + v.degree)


@lru_cache(maxsize=None)
def rooted_to_lie(J: RootedTree) -> LieElement:
    """The iterated bracket of generators X_i encoded by J."""
    if isinstance(J, Leaf):
        return X(J.label)
    return lie_from_poly(tree_poly(J), _tree_degree(J))


def _tree_degree(J: RootedTree) -> int:
    return 1 if isinstance(J, Leaf) else _tree_degree(J.left) + _tree_degree(J.right)


def leaf_bracket(t: UnrootedTree, v: int) -> LieElement:
    """B_v(t): the rest of t, rooted at the v-th leaf (printed order), as a Lie element."""
    pairs = reroot_at_leaves(t)
    if not 0 <= v < len(pairs):
        raise IndexError(f"leaf index {v} out of range")
    return rooted_to_lie(pairs[v][1])


def left_normed_poly(w: Word) -> Poly:
    p: Poly = {w[:1]: 1}
    for x in w[1:]:
        p = commutator(p, {(x,): 1})
    return p


def dynkin(p: Mapping[Word, int]) -> Poly:
    """The Dynkin map: each word goes to its left-normed bracket."""
    out: Poly = {}
    for w, c in p.items():
        _add_into(out, left_normed_poly(w), c)
    return out


def dynkin_project(p: Mapping[Word, int]) -> LieElement:
    """Lie coordinates of a homogeneous primitive polynomial, checked by dynkin(p) = n p."""
    p = {w: c for w, c in p.items() if c}
    if not p:
        return LieElement(0, {})
    degs = {len(w) for w in p}
    if len(degs) != 1:
        raise NotLieError("polynomial is not homogeneous")
    (n,) = degs
    if dynkin(p) != {w: n * c for w, c in p.items()}:
        raise NotLieError("not a Lie element: dynkin(p) != n*p")
    return lie_from_poly(p, n)


# ---------------------------------------------------------------------------
# L_1 (x) L_(n+1)


@dataclass(frozen=True)
class TensorElement:
    degree: int
    coords: dict = field(default_factory=dict)  # (i, word) -> coefficient

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        if not self.coords and not other.coords:
            return True
        return self.degree == other.degree and self.coords == other.coords

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.coords.items()))))

    def __bool__(self) -> bool:
        return bool(self.coords)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return tensor_combination([(1, self), (1, other)])

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return tensor_combination([(1, self), (-1, other)])

    def __neg__(self) -> "TensorElement":
        return TensorElement(self.degree, {k: -c for k, c in self.coords.items()})

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        return " ".join(
            f"{c:+d}*X{i}(x){bracket_string(w)}" for (i, w), c in sorted(self.coords.items())
        )

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "terms": [
                {"leaf": i, "word": word_string(w), "coef": c}
                for (i, w), c in sorted(self.coords.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "TensorElement":
        return cls(
            int(data["degree"]),
            {(int(t["leaf"]), parse_word(t["word"])): int(t["coef"]) for t in data["terms"] if t["coef"]},
        )


def tensor(i: int, e: LieElement, n: int | None = None) -> TensorElement:
    """X_i (x) e, an element of degree n = deg(e) - 1."""
    return TensorElement(e.degree - 1 if n is None else n, {(i, w): c for w, c in e.coords.items()})


def tensor_combination(terms: Iterable[tuple[int, TensorElement]]) -> TensorElement:
    out: dict = {}
    deg = None
    for c, e in terms:
        if e.coords:
            if deg is not None and e.degree != deg:
                raise ValueError("cannot add tensors of different degrees")
            deg = e.degree
        for k, x in e.coords.items():
            nv = out.get(k, 0) + c * x
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
    return TensorElement(deg if deg is not None else 0, out)


def bracket_map(t: TensorElement) -> LieElement:
    """X_i (x) w  ->  [X_i, w]."""
    out: Poly = {}
    for (i, w), c in t.coords.items():
        _add_into(out, commutator({(i,): 1}, lyndon_poly(w)), c)
    return lie_from_poly(out, t.degree + 2)


def tensor_basis(m: int, n: int) -> list[tuple[int, Word]]:
    """Basis (i, w) of L_1 (x) L_(n+1), i major."""
    return [(i, w) for i in range(1, m + 1) for w in lyndon_basis(m, n + 1)]


@lru_cache(maxsize=None)
def bracket_matrix(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    cols = lyndon_basis(m, n + 2)
    pos = {w: k for k, w in enumerate(cols)}
    rows = []
    for i, w in tensor_basis(m, n):
        e = bracket_map(TensorElement(n, {(i, w): 1}))
        row = [0] * len(cols)
        for u, c in e.coords.items():
            row[pos[u]] = c
        rows.append(tuple(row))
    return tuple(rows)


@lru_cache(maxsize=None)
def _kernel_rows(m: int, n: int) -> tuple[tuple[int, ...], ...]:
    rows = [list(r) for r in bracket_matrix(m, n)]
    if not rows:
        return ()
    if not rows[0]:
        # L_(n+2) = 0: the whole tensor product is the kernel
        return tuple(tuple(int(i == j) for j in range(len(rows))) for i in range(len(rows)))
    return tuple(tuple(r) for r in left_kernel(rows))


def bracket_kernel_basis(m: int, n: int) -> list[TensorElement]:
    """A basis of D_n, the kernel of the bracket map L_1 (x) L_(n+1) -> L_(n+2)."""
    basis = tensor_basis(m, n)
    return [
        TensorElement(n, {basis[k]: c for k, c in enumerate(r) if c}) for r in _kernel_rows(m, n)
    ]


def tensor_vector(t: TensorElement, m: int) -> list[int]:
    """Coordinates of t in ``tensor_basis(m, t.degree)``."""
    basis = tensor_basis(m, t.degree)
    pos = {b: k for k, b in enumerate(basis)}
    v = [0] * len(basis)
    for k, c in t.coords.items():
        if k not in pos:
            raise ValueError(f"tensor term {k} outside L_1(x)L_(n+1) for m={m}")
        v[pos[k]] = c
    return v
