"""Forest rewriting moves and their algebraic bookkeeping.

Each move takes a :class:`SignedForest` and returns a :class:`MoveResult`
holding the new forest and a short log.  The forest change is the one a
geometric modification of a Whitney tower produces; the class in the
relevant tree group is unchanged, which the test-suite checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .abelian import certify_membership, combination
from .forest import SignedForest, is_order_n_twisted
from .tree_groups import (
    GroupSpec,
    _leaf_cut,
    build_presentation,
    forest_vector,
    internal_edges,
)
from .trees import (
    Leaf,
    Node,
    RootedTree,
    TwistedTree,
    UnrootedTree,
    flip_at,
    flip_positions,
    order,
    print_tree,
    replace_at,
    subtree_at,
    symmetric_body,
    twisted_key,
)


class MoveError(ValueError):
    pass


@dataclass
class MoveResult:
    forest: SignedForest
    log: list[str] = field(default_factory=list)
    split: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"forest": self.forest.to_json(), "log": list(self.log)}
        if self.split:
            out["split"] = [f"{c:+d}*{print_tree(t)}" for c, t in self.split]
        return out


def _framed(m, *terms) -> SignedForest:
    return SignedForest.build(m, [(c, t) for c, t in terms if isinstance(t, UnrootedTree)],
                              [(c, t) for c, t in terms if isinstance(t, TwistedTree)])


def _sign(s: int) -> int:
    if s not in (1, -1):
        raise MoveError("sign must be +1 or -1")
    return s


# ---------------------------------------------------------------------------
# twisting moves


def boundary_twist(f: SignedForest, i: int, J: RootedTree, sign: int = 1) -> MoveResult:
    """A boundary twist on W_(i,J): adds sign*<i,(J,J)> and changes omega(W_(i,J)) by sign."""
    s = _sign(sign)
    delta = _framed(f.m, (s, UnrootedTree(Leaf(i), Node(J, J))), (s, TwistedTree(Node(Leaf(i), J))))
    return MoveResult(f + delta, [f"boundary twist on W_{print_tree(Node(Leaf(i), J))}: {delta}"])


def interior_twist(f: SignedForest, J: RootedTree, sign: int = 1) -> MoveResult:
    """An interior twist on W_J: adds sign*<J,J> and -2*sign*J^inf."""
    s = _sign(sign)
    delta = _framed(f.m, (s, UnrootedTree(J, J)), (-2 * s, TwistedTree(J)))
    return MoveResult(f + delta, [f"interior twist on W_{print_tree(J)}: {delta}"])


def _twisted_coef(f: SignedForest, J: RootedTree) -> int:
    c = f.coefficient(TwistedTree(J))
    if not c:
        raise MoveError(f"{print_tree(TwistedTree(J))} is not an entry of the forest")
    return c


def split_twisted(f: SignedForest, J: RootedTree) -> MoveResult:
    """Split omega*J^inf into |omega| copies of sign(omega)*J^inf."""
    c = _twisted_coef(f, J)
    s = 1 if c > 0 else -1
    t = TwistedTree(symmetric_body(J))
    copies = [(s, t)] * abs(c)
    log = [f"split {c:+d}*{print_tree(t)} into {abs(c)} copies"] if abs(c) > 1 else ["no-op"]
    return MoveResult(f, log, copies)


# ---------------------------------------------------------------------------
# IHX moves


def ihx_shapes(J: RootedTree, edge: tuple[tuple, int]) -> tuple[RootedTree, RootedTree, RootedTree]:
    """(I, H, X) at an internal edge of J, with I = H - X by the Jacobi identity."""
    p, side = edge
    w = subtree_at(J, p)
    if side == 0:  # w = ((A,B),K)
        A, B, K = w.left.left, w.left.right, w.right
        H, X = Node(A, Node(B, K)), Node(B, Node(A, K))
    else:  # w = (K,(A,B))
        K, A, B = w.left, w.right.left, w.right.right
        H, X = Node(Node(K, A), B), Node(Node(K, B), A)
    return J, replace_at(J, p, H), replace_at(J, p, X)


def _user_leaf_cut(t: UnrootedTree) -> tuple[Leaf, RootedTree]:
    # keep the caller's presentation when it already hangs off a leaf
    if isinstance(t.right, Leaf) and isinstance(t.left, Node):
        return t.right, t.left
    if isinstance(t.left, Leaf) and isinstance(t.right, Node):
        return t.left, t.right
    return _leaf_cut(t)


def tree_edges(t: UnrootedTree) -> list[tuple[tuple, int]]:
    return internal_edges(_user_leaf_cut(t)[1])


def ihx_move(f: SignedForest, t: UnrootedTree, edge: int = 0, coef: int | None = None) -> MoveResult:
    """Replace eps*I by eps*H - eps*X at the edge-th internal edge of the entry t."""
    c = f.coefficient(t)
    if not c:
        raise MoveError(f"{print_tree(t)} is not an entry of the forest")
    eps = c if coef is None else coef
    if order(t) < 2:
        raise MoveError(f"{print_tree(t)} has no internal edge")
    i, Q = _user_leaf_cut(t)
    edges = internal_edges(Q)
    if not 0 <= edge < len(edges):
        raise MoveError(f"{print_tree(t)} has {len(edges)} internal edges, got index {edge}")
    I, H, X = ihx_shapes(Q, edges[edge])
    delta = _framed(f.m, (-eps, UnrootedTree(i, I)), (eps, UnrootedTree(i, H)), (-eps, UnrootedTree(i, X)))
    return MoveResult(
        f + delta,
        [f"IHX at edge {edge}: {eps:+d}*{print_tree(UnrootedTree(i, I))} -> "
         f"{eps:+d}*{print_tree(UnrootedTree(i, H))} {-eps:+d}*{print_tree(UnrootedTree(i, X))}"],
    )


def twisted_ihx_move(f: SignedForest, J: RootedTree, edge: int = 0) -> MoveResult:
    """Replace eps*I^inf by eps*H^inf + eps*X^inf - eps*<H,X>; needs |eps| = 1."""
    c = _twisted_coef(f, J)
    if abs(c) != 1:
        raise MoveError(f"coefficient {c:+d} of {print_tree(TwistedTree(J))} is not split; use split_twisted")
    body = J
    edges = internal_edges(body)
    if not 0 <= edge < len(edges):
        raise MoveError(f"{print_tree(body)} has {len(edges)} internal edges, got index {edge}")
    I, H, X = ihx_shapes(body, edges[edge])
    delta = _framed(
        f.m,
        (-c, TwistedTree(I)),
        (c, TwistedTree(H)),
        (c, TwistedTree(X)),
        (-c, UnrootedTree(H, X)),
    )
    return MoveResult(f + delta, [f"twisted IHX at edge {edge}: {delta}"])


# ---------------------------------------------------------------------------
# bookkeeping moves


def cancel_pair(f: SignedForest, t: UnrootedTree) -> MoveResult:
    """Remove t together with an isomorphic tree of opposite orientation and equal coefficient sign."""
    c = f.coefficient(t)
    if not c:
        raise MoveError(f"{print_tree(t)} is not an entry of the forest")
    if order(t) == 0:
        raise MoveError(f"{print_tree(t)} has no trivalent vertex to reorient")
    i, Q = _leaf_cut(t)
    for p in flip_positions(Q):
        s = UnrootedTree(i, flip_at(Q, p))
        if s == t:
            continue
        d = f.coefficient(s)
        if d and (d > 0) == (c > 0):
            e = 1 if c > 0 else -1
            g = f - _framed(f.m, (e, t), (e, s))
            return MoveResult(g, [f"cancelled {e:+d}*{print_tree(t)} against {e:+d}*{print_tree(s)}"])
    raise MoveError(f"no oppositely oriented partner of {print_tree(t)} in the forest")


def normalize_to_order(f: SignedForest, n: int) -> MoveResult:
    """Delete framed trees of order > n and twisted trees of order > n/2."""
    if not is_order_n_twisted(f, n):
        raise MoveError(f"forest is not of order {n}")
    g = SignedForest(
        f.m,
        tuple((t, c) for t, c in f.framed if order(t) <= n),
        tuple((t, c) for t, c in f.twisted if 2 * order(t) <= n),
    )
    dropped = len(f.entries()) - len(g.entries())
    return MoveResult(g, [f"dropped {dropped} higher order entries"])


def move_along_tree_identity(f: SignedForest, t: UnrootedTree) -> MoveResult:
    """The identity <(I,J),K> = <I,(J,K)>: rewrites nothing, reports both forms."""
    if not f.coefficient(t):
        raise MoveError(f"{print_tree(t)} is not an entry of the forest")
    A, B = t.left, t.right
    if isinstance(A, Node):
        moved = UnrootedTree(A.left, Node(A.right, B))
    elif isinstance(B, Node):
        moved = UnrootedTree(Node(A, B.left), B.right)
    else:
        moved = t
    if moved != t:
        raise AssertionError("moving the root along an edge changed the tree")
    return MoveResult(f, [f"{print_tree(t)} = {print_tree(moved)} (key {t.key})"])


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    rows: list  # (relator index, kind, coefficient)
    vector: dict

    def to_json(self, p) -> dict:
        kinds: dict[str, int] = {}
        for _, k, _ in self.rows:
            kinds[k] = kinds.get(k, 0) + 1
        return {
            "vanishes": True,
            "kinds": kinds,
            "relators": [
                {
                    "index": i,
                    "kind": k,
                    "coef": c,
                    "row": {p.generators[g]: x for g, x in sorted(p.relations[i].items())},
                }
                for i, k, c in self.rows
            ],
        }


def certify_vanishing(spec: GroupSpec, f: SignedForest) -> Union[Certificate, str]:
    """A relator combination equal to f in generator coordinates, or "nonzero class"."""
    p = build_presentation(spec)
    v = forest_vector(spec, f)
    cert = certify_membership(p, v)
    if cert is None:
        return "nonzero class"
    if combination(p, cert) != v:
        raise AssertionError("certificate does not reproduce the forest")
    return Certificate([(i, p.kinds[i], c) for i, c in cert.items()], v)


# ---------------------------------------------------------------------------
# realisation recipes


@dataclass(frozen=True)
class StartHopf:
    def __str__(self):
        return "StartHopf"


@dataclass(frozen=True)
class StartTwistedUnknotDouble:
    omega: int

    def __str__(self):
        return f"StartTwistedUnknotDouble({self.omega})"


@dataclass(frozen=True)
class BingDouble:
    component: int

    def __str__(self):
        return f"BingDouble({self.component})"


@dataclass(frozen=True)
class Band:
    c1: int
    c2: int
    label: int

    def __str__(self):
        return f"Band({self.c1},{self.c2},{self.label})"


@dataclass(frozen=True)
class Relabel:
    component: int
    label: int

    def __str__(self):
        return f"Relabel({self.component},{self.label})"


Instruction = Union[StartHopf, StartTwistedUnknotDouble, BingDouble, Band, Relabel]


def replay(steps: list) -> tuple:
    """Track the tree through a recipe; returns ('framed', tree) or ('twisted', omega, tree)."""
    if not steps:
        raise MoveError("empty recipe")
    head = steps[0]
    label = {1: 1, 2: 2}
    if isinstance(head, StartHopf):
        shape = [Leaf(1), Leaf(2)]
        omega = None
    elif isinstance(head, StartTwistedUnknotDouble):
        shape = [Node(Leaf(1), Leaf(2))]
        omega = head.omega
    else:
        raise MoveError("a recipe starts with StartHopf or StartTwistedUnknotDouble")
    nxt = 3

    def sub(t, fn):
        if isinstance(t, Leaf):
            return fn(t)
        return Node(sub(t.left, fn), sub(t.right, fn))

    for st in steps[1:]:
        if isinstance(st, BingDouble):
            c = st.component
            if c not in label:
                raise MoveError(f"no component {c}")
            a, b = nxt, nxt + 1
            nxt += 2
            label[a] = label[b] = label.pop(c)
            shape = [sub(s, lambda l: Node(Leaf(a), Leaf(b)) if l.label == c else l) for s in shape]
        elif isinstance(st, Band):
            if st.c1 not in label or st.c2 not in label or st.c1 == st.c2:
                raise MoveError(f"bad band {st}")
            del label[st.c2]
            label[st.c1] = st.label
            shape = [sub(s, lambda l: Leaf(st.c1) if l.label == st.c2 else l) for s in shape]
        elif isinstance(st, Relabel):
            if st.component not in label:
                raise MoveError(f"no component {st.component}")
            label[st.component] = st.label
        else:
            raise MoveError(f"{st} can only start a recipe")
    final = [sub(s, lambda l: Leaf(label[l.label])) for s in shape]
    if omega is None:
        return ("framed", UnrootedTree(final[0], final[1]))
    return ("twisted", omega, TwistedTree(final[0]))


def realize_recipe(t) -> list:
    """Instructions building a link whose tower has the single tree t (or (omega, J^inf))."""
    if isinstance(t, tuple):
        omega, tw = t
        if not isinstance(tw, TwistedTree):
            raise MoveError("expected (omega, twisted tree)")
        J = symmetric_body(tw.body)
        if isinstance(J, Leaf):
            raise MoveError("twisted trees of order 0 are framings, not Bing doubles")
        steps: list = [StartTwistedUnknotDouble(omega)]
        targets = {1: J.left, 2: J.right}
    elif isinstance(t, UnrootedTree):
        steps = [StartHopf()]
        targets = {1: t.left, 2: t.right}
    else:
        raise MoveError("expected an unrooted tree or (omega, twisted tree)")
    nxt = 3
    leaf_of: dict[int, int] = {}
    queue = sorted(targets)
    while queue:
        c = queue.pop(0)
        s = targets.pop(c)
        if isinstance(s, Leaf):
            leaf_of[c] = s.label
            continue
        steps.append(BingDouble(c))
        targets[nxt], targets[nxt + 1] = s.left, s.right
        queue += [nxt, nxt + 1]
        nxt += 2
    current = _inherited_labels(steps)
    by_label: dict[int, list[int]] = {}
    for c in sorted(leaf_of):
        by_label.setdefault(leaf_of[c], []).append(c)
    for lab in sorted(by_label):
        comps = by_label[lab]
        first = comps[0]
        for other in comps[1:]:
            steps.append(Band(first, other, lab))
        if len(comps) == 1 and current[first] != lab:
            steps.append(Relabel(first, lab))
    return steps


def _inherited_labels(steps) -> dict[int, int]:
    label = {1: 1, 2: 2}
    nxt = 3
    for st in steps[1:]:
        if isinstance(st, BingDouble):
            label[nxt] = label[nxt + 1] = label.pop(st.component)
            nxt += 2
    return label


def recipe_matches(t, steps) -> bool:
    out = replay(steps)
    if isinstance(t, tuple):
        omega, tw = t
        return out[0] == "twisted" and out[1] == omega and twisted_key(out[2].body) == twisted_key(tw.body)
    return out[0] == "framed" and out[1] == t
