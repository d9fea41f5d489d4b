import itertools

import pytest
from hypothesis import given
from strategies import rooted, unrooted

from wtrees.lie import (
    LieElement,
    NotLieError,
    TensorElement,
    X,
    bracket,
    bracket_kernel_basis,
    bracket_map,
    dynkin,
    dynkin_project,
    leaf_bracket,
    lie_combination,
    lie_from_poly,
    lyndon_basis,
    lyndon_poly,
    lyndon_tree,
    rooted_to_lie,
    tensor,
    tensor_basis,
    tensor_combination,
    tree_poly,
    witt_rank,
)
from wtrees.trees import labels, order, parse_tree


def brute_lyndon(m, n):
    """Oracle: words strictly smaller than each of their proper rotations."""
    out = []
    for w in itertools.product(range(1, m + 1), repeat=n):
        rots = [w[i:] + w[:i] for i in range(1, n)]
        if all(w < r for r in rots):
            out.append(w)
    return out


def moebius(n):
    res, p, k = 1, 2, n
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            res = -res
        p += 1
    return -res if k > 1 else res


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_witt_rank_matches_enumeration(m):
    for n in range(1, 7):
        words = brute_lyndon(m, n)
        assert lyndon_basis(m, n) == sorted(words)
        assert witt_rank(m, n) == len(words)
        assert witt_rank(m, n) == sum(moebius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def test_dynkin_identity_on_lyndon_basis():
    for m in (1, 2, 3):
        for n in range(1, 6):
            for w in lyndon_basis(m, n):
                p = lyndon_poly(w)
                assert dynkin(p) == {u: n * c for u, c in p.items()}
                assert lie_from_poly(p) == LieElement(n, {w: 1})


def test_non_lie_polynomials_rejected():
    with pytest.raises(NotLieError):
        dynkin_project({(1, 2): 1})
    with pytest.raises(NotLieError):
        lie_from_poly({(2, 1): 1})


def test_self_bracket_vanishes():
    assert not bracket(X(1), X(1))
    assert not rooted_to_lie(parse_tree("(1,1)"))


def test_lyndon_tree_shapes():
    assert lyndon_tree((1, 1, 2)) == parse_tree("(1,(1,2))")
    assert lyndon_tree((1, 2, 2)) == parse_tree("((1,2),2)")


@given(rooted(m=3), rooted(m=3))
def test_antisymmetry(a, b):
    u, v = rooted_to_lie(a), rooted_to_lie(b)
    assert bracket(u, v) == -bracket(v, u)


@given(rooted(max_leaves=3, m=3), rooted(max_leaves=3, m=3), rooted(max_leaves=3, m=3))
def test_jacobi(a, b, c):
    u, v, w = (rooted_to_lie(t) for t in (a, b, c))
    terms = [bracket(bracket(u, v), w), bracket(bracket(v, w), u), bracket(bracket(w, u), v)]
    degs = {t.degree for t in terms if t}
    if len(degs) <= 1:
        assert not lie_combination([(1, t) for t in terms])


@given(rooted(m=3))
def test_tree_poly_is_lie(t):
    p = tree_poly(t)
    assert lie_from_poly(p, order(t) + 1) == rooted_to_lie(t)


def test_leaf_brackets_of_y_tree():
    t = parse_tree("<1,(2,3)>")
    assert leaf_bracket(t, 0) == bracket(X(2), X(3))
    assert leaf_bracket(t, 1) == bracket(X(3), X(1))
    assert leaf_bracket(t, 2) == bracket(X(1), X(2))


@given(unrooted(m=3))
def test_leaf_brackets_sum_to_kernel(t):
    # sum_v X_label(v) (x) B_v(t) lies in the kernel of the bracket map
    n = order(t)
    terms = [(1, tensor(i, leaf_bracket(t, v), n)) for v, i in enumerate(labels(t))]
    e = tensor_combination(terms)
    assert not bracket_map(TensorElement(n, e.coords))


@pytest.mark.parametrize("m,n", [(2, 0), (2, 1), (3, 1), (2, 2), (3, 2), (3, 3)])
def test_kernel_rank(m, n):
    # the bracket map L_1 (x) L_(n+1) -> L_(n+2) is onto
    expect = m * witt_rank(m, n + 1) - witt_rank(m, n + 2)
    basis = bracket_kernel_basis(m, n)
    assert len(basis) == expect
    for b in basis:
        assert not bracket_map(b)
    assert len(tensor_basis(m, n)) == m * witt_rank(m, n + 1)


def test_json_roundtrip():
    e = bracket(X(1), bracket(X(1), X(2)))
    assert LieElement.from_json(e.to_json()) == e
    t = tensor(2, e)
    assert TensorElement.from_json(t.to_json()) == t
