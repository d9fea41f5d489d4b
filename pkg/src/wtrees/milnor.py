"""The summation map eta, Milnor invariants from longitudes, and the Arf kernel.

eta sends a tree of order n to the sum over its leaves v of
X_label(v) (x) B_v, where B_v is the bracket obtained by rooting the rest of
the tree at v.  A twisted tree J^inf goes to half of eta(<J,J>).

Longitudes are words in the free group; their Magnus expansions
(x_i -> 1 + X_i) give the first non-vanishing Milnor invariant as an element of
L_1 (x) L_(n+1).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .abelian import (
    HomResult,
    Presentation,
    class_of,
    induced_hom,
    smith_normal_form,
    solve_left,
)
from .forest import SignedForest
from .lie import (
    TensorElement,
    bracket_kernel_basis,
    bracket_map,
    dynkin_project,
    lyndon_basis,
    lyndon_tree,
    rooted_to_lie,
    tensor,
    tensor_combination,
    tensor_vector,
    witt_rank,
    word_string,
)
from .tree_groups import GroupSpec, build_presentation, enumerate_generators
from .trees import (
    Node,
    TwistedTree,
    UnrootedTree,
    is_decorated,
    order,
    print_tree,
    reroot_at_leaves,
)


class EtaError(ValueError):
    pass


class WordSyntaxError(ValueError):
    pass


class MilnorError(ValueError):
    pass


# ---------------------------------------------------------------------------
# eta


@lru_cache(maxsize=100_000)
def _eta_framed(t: UnrootedTree) -> TensorElement:
    terms = []
    for leaf, rest in reroot_at_leaves(t):
        terms.append((1, tensor(leaf.label, rooted_to_lie(rest), order(t))))
    out = tensor_combination(terms)
    return TensorElement(order(t), out.coords)


def eta_tree(t) -> TensorElement:
    if is_decorated(t):
        raise EtaError(f"eta is defined for undecorated trees, got {print_tree(t)}")
    if isinstance(t, UnrootedTree):
        return _eta_framed(t)
    if isinstance(t, TwistedTree):
        J = t.body
        full = _eta_framed(UnrootedTree(J, J))
        if any(c % 2 for c in full.coords.values()):
            raise AssertionError(f"eta(<J,J>) has odd coefficients for J = {print_tree(J)}")
        return TensorElement(2 * order(J), {k: c // 2 for k, c in full.coords.items()})
    raise EtaError(f"not a framed or twisted tree: {t!r}")


def eta(n: int, f: SignedForest) -> TensorElement:
    """eta_n of an order n forest (framed trees of order n, twisted of order n/2)."""
    terms = []
    for c, t in f.entries():
        want = n if isinstance(t, UnrootedTree) else n / 2
        if order(t) != want:
            raise EtaError(f"entry {c:+d}*{print_tree(t)} has order {order(t)}, expected {want}")
        terms.append((c, eta_tree(t)))
    out = tensor_combination(terms)
    return TensorElement(n, out.coords)


def eta_matrix(spec: GroupSpec) -> list[list[int]]:
    """Row k: eta of the k-th generator in the basis ``tensor_basis(m, n)``."""
    return [tensor_vector(_as_degree(eta_tree(t), spec.n), spec.m) for t in enumerate_generators(spec)]


def _as_degree(e: TensorElement, n: int) -> TensorElement:
    return TensorElement(n, e.coords)


@lru_cache(maxsize=None)
def _kernel_solver(m: int, n: int):
    basis = bracket_kernel_basis(m, n)
    K = [tensor_vector(b, m) for b in basis]
    if not K:
        return basis, None, None
    U, D, V = smith_normal_form(K)
    assert all(D[i][i] == 1 for i in range(len(K))), "D_n basis must be saturated"
    return basis, U, V


def d_coordinates(e: TensorElement, m: int) -> list[int]:
    """Coordinates of e in the basis of D_n; raises if e is not in D_n."""
    n = e.degree
    basis, U, V = _kernel_solver(m, n)
    v = tensor_vector(e, m)
    if U is None:
        if any(v):
            raise EtaError("element is not in D_n")
        return []
    k = len(basis)
    vv = [sum(v[r] * V[r][j] for r in range(len(v)) if v[r]) for j in range(len(v))]
    if any(vv[k:]):
        raise EtaError("element is not in D_n")
    y = vv[:k]
    return [sum(y[i] * U[i][c] for i in range(k)) for c in range(k)]


def d_presentation(m: int, n: int) -> Presentation:
    basis = bracket_kernel_basis(m, n)
    return Presentation([f"d{k}" for k in range(len(basis))])


def eta_hom(spec: GroupSpec) -> HomResult:
    """eta_n on the tree group as a checked homomorphism into D_n."""
    if spec.kind not in ("framed", "twisted"):
        raise EtaError("eta is defined on the framed and twisted tree groups")
    src = build_presentation(spec)
    images = [
        d_coordinates(_as_degree(eta_tree(t), spec.n), spec.m) for t in enumerate_generators(spec)
    ]
    return induced_hom(src, d_presentation(spec.m, spec.n), images)


# ---------------------------------------------------------------------------
# free words and Magnus expansion

FreeWord = tuple[int, ...]  # +i for x_i, -i for its inverse


def reduce_word(w: Iterable[int]) -> FreeWord:
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("letters are nonzero integers")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse_word(w: FreeWord) -> FreeWord:
    return tuple(-x for x in reversed(w))


_LETTER = re.compile(r"\s*([xX])(\d+)")


def parse_free_word(text: str, m: int | None = None) -> FreeWord:
    """Words like ``"x1 x2 X1 X2"`` (capital = inverse), with ``[u,v]`` commutators."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def word(stop: str) -> list[int]:
        nonlocal pos
        out: list[int] = []
        while True:
            skip()
            if pos >= len(text) or text[pos] in stop:
                return out
            if text[pos] == "[":
                pos += 1
                u = word(",")
                skip()
                if pos >= len(text) or text[pos] != ",":
                    raise WordSyntaxError(f"expected ',' at position {pos} in {text!r}")
                pos += 1
                v = word("]")
                skip()
                if pos >= len(text) or text[pos] != "]":
                    raise WordSyntaxError(f"expected ']' at position {pos} in {text!r}")
                pos += 1
                u, v = reduce_word(u), reduce_word(v)
                out += list(u + v + inverse_word(u) + inverse_word(v))
                continue
            if text[pos] == "1":
                pos += 1
                continue
            mo = _LETTER.match(text, pos)
            if not mo:
                raise WordSyntaxError(f"unexpected {text[pos]!r} at position {pos} in {text!r}")
            i = int(mo.group(2))
            if i < 1 or (m is not None and i > m):
                raise WordSyntaxError(f"generator x{i} out of range at position {mo.start(2)}")
            out.append(i if mo.group(1) == "x" else -i)
            pos = mo.end()

    w = word("")
    return reduce_word(w)


def format_free_word(w: FreeWord) -> str:
    if not w:
        return "1"
    return " ".join(f"x{x}" if x > 0 else f"X{-x}" for x in w)


@dataclass(frozen=True)
class MagnusSeries:
    N: int
    coeffs: dict = field(default_factory=dict)  # word -> int, len(word) <= N

    def degree_part(self, d: int) -> dict:
        return {w: c for w, c in self.coeffs.items() if len(w) == d}

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        N = min(self.N, other.N)
        out: dict = {}
        for u, a in self.coeffs.items():
            for v, b in other.coeffs.items():
                if len(u) + len(v) > N:
                    continue
                w = u + v
                nv = out.get(w, 0) + a * b
                if nv:
                    out[w] = nv
                else:
                    out.pop(w, None)
        return MagnusSeries(N, out)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "terms": [
                {"word": word_string(w) if w else "", "coef": c}
                for w, c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
            ],
        }

    def __str__(self) -> str:
        parts = []
        for w, c in sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0])):
            mono = "".join(f"X{x}" for x in w) or "1"
            parts.append(f"{c:+d}*{mono}")
        return " ".join(parts) if parts else "0"


def _letter_series(x: int, N: int) -> MagnusSeries:
    i = abs(x)
    if x > 0:
        return MagnusSeries(N, {(): 1, (i,): 1} if N >= 1 else {(): 1})
    return MagnusSeries(N, {(i,) * k: (-1) ** k for k in range(N + 1)})


def magnus_expand(w: FreeWord | str, N: int) -> MagnusSeries:
    """Magnus expansion of a free group word truncated above degree N."""
    if N < 1:
        raise ValueError("truncation degree must be at least 1")
    if isinstance(w, str):
        w = parse_free_word(w)
    out = MagnusSeries(N, {(): 1})
    for x in reduce_word(w):
        out = out * _letter_series(x, N)
    return out


def mu_n(longitudes: Sequence[FreeWord | str], n: int) -> TensorElement:
    """First non-vanishing Milnor invariant sum_i X_i (x) l_i, checked to lie in D_n."""
    m = len(longitudes)
    words = [parse_free_word(l, m) if isinstance(l, str) else reduce_word(l) for l in longitudes]
    terms = []
    for i, w in enumerate(words, start=1):
        for x in w:
            if abs(x) > m:
                raise MilnorError(f"longitude {i} uses x{abs(x)} but there are {m} components")
        series = magnus_expand(w, n + 1)
        for d in range(1, n + 1):
            if series.degree_part(d):
                raise MilnorError(f"longitude {i} not in F_{n + 1}: degree {d} part is nonzero")
        part = series.degree_part(n + 1)
        if not part:
            continue
        try:
            lie = dynkin_project(part)
        except ValueError as e:
            raise MilnorError(f"longitude {i}: not primitive ({e})") from None
        terms.append((1, tensor(i, lie, n)))
    mu = tensor_combination(terms)
    mu = TensorElement(n, mu.coords)
    if bracket_map(mu):
        raise MilnorError("mu_n does not lie in D_n (bracket map is nonzero)")
    return mu


# ---------------------------------------------------------------------------
# Arf kernel


@dataclass
class ArfKernelReport:
    j: int
    m: int
    kernel_rank: int
    kernel_torsion: list[int]
    words: list
    matrix: list[list[int]]
    in_kernel: bool
    isomorphism: bool

    def to_json(self) -> dict:
        return {
            "j": self.j,
            "m": self.m,
            "n": 4 * self.j - 2,
            "kernel": {"rank": self.kernel_rank, "torsion": self.kernel_torsion},
            "basis": [word_string(w) for w in self.words],
            "map_matrix": self.matrix,
            "images_in_kernel": self.in_kernel,
            "isomorphism": self.isomorphism,
        }


def _rank_mod2(rows: list[list[int]]) -> int:
    rows = [[x % 2 for x in r] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [(a + b) % 2 for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def arf_kernel(j: int, m: int, cap: int = 200_000) -> ArfKernelReport:
    """Ker eta_(4j-2) on T^inf_(4j-2) and the map Z_2 (x) L_j -> Ker, 1 (x) J -> (J,J)^inf."""
    if j < 1:
        raise ValueError("j must be at least 1")
    n = 4 * j - 2
    spec = GroupSpec("twisted", n, m, cap=cap)
    p = build_presentation(spec)
    hom = eta_hom(spec)
    ker = hom.kernel
    S = hom.src
    a = S.orders
    kcoords = [class_of(p, g).flat() for g in ker.generators]
    stacked = kcoords + [[ai if t == i else 0 for t in range(len(a))] for i, ai in enumerate(a) if ai]
    words = lyndon_basis(m, j)
    matrix, inside = [], True
    for w in words:
        J = lyndon_tree(w)
        t = TwistedTree(Node(J, J))
        if eta_tree(t):
            inside = False
            matrix.append([0] * len(kcoords))
            continue
        x = class_of(p, {p.index[t.key]: 1}).flat()
        sol = solve_left(stacked, x) if stacked else ([] if not any(x) else None)
        if sol is None:
            inside = False
            matrix.append([0] * len(kcoords))
            continue
        matrix.append([c % d if d else c for c, d in zip(sol[: len(kcoords)], ker.torsion + [0] * ker.rank)])
    w = witt_rank(m, j)
    iso = (
        inside
        and ker.rank == 0
        and ker.torsion == [2] * w
        and len(words) == w
        and (w == 0 or _rank_mod2(matrix) == w)
    )
    return ArfKernelReport(j, m, ker.rank, list(ker.torsion), words, matrix, inside, iso)
