import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wtrees.forest import SignedForest, parse_forest
from wtrees.moves import (
    Band,
    BingDouble,
    Certificate,
    MoveError,
    Relabel,
    StartHopf,
    StartTwistedUnknotDouble,
    boundary_twist,
    cancel_pair,
    certify_vanishing,
    ihx_move,
    interior_twist,
    move_along_tree_identity,
    normalize_to_order,
    realize_recipe,
    recipe_matches,
    replay,
    split_twisted,
    tree_edges,
    twisted_ihx_move,
)
from wtrees.abelian import combination
from wtrees.tree_groups import GroupSpec, build_presentation, class_of_forest, enumerate_generators, forest_vector
from wtrees.trees import Leaf, Node, TwistedTree, UnrootedTree, flip_at, parse_tree, rooted_trees, unrooted_trees

JACOBI = "+1*<((1,2),3),4> -1*<(1,(2,3)),4> +1*<((3,1),2),4>"


def F(text, m):
    return parse_forest(text, m)


def test_boundary_twist_example():
    r = boundary_twist(SignedForest.empty(2), 1, Leaf(2), 1)
    assert r.forest == F("+1*<1,(2,2)> +1*(1,2)^inf", 2)
    back = boundary_twist(r.forest, 1, Leaf(2), -1)
    assert back.forest == SignedForest.empty(2)


def test_boundary_twist_class_in_T3():
    spec = GroupSpec("twisted", 3, 2)
    f = F("+1*<((1,2),1),(1,2)>", 2)
    g = normalize_to_order(boundary_twist(f, 1, parse_tree("(1,2)"), 1).forest, 3).forest
    assert class_of_forest(spec, f) == class_of_forest(spec, g)


def test_interior_twist_example():
    r = interior_twist(SignedForest.empty(2), parse_tree("(1,2)"), 1)
    assert r.forest == F("+1*<(1,2),(1,2)> -2*(1,2)^inf", 2)
    assert interior_twist(r.forest, parse_tree("(1,2)"), -1).forest == SignedForest.empty(2)
    spec = GroupSpec("twisted", 2, 2)
    assert class_of_forest(spec, r.forest).is_zero


def test_split():
    one = parse_tree("(1,1)")
    r = split_twisted(F("+3*(1,1)^inf", 1), one)
    assert r.forest == F("+3*(1,1)^inf", 1) and r.split == [(1, TwistedTree(one))] * 3
    r = split_twisted(F("-2*(1,2)^inf", 2), parse_tree("(1,2)"))
    assert [c for c, _ in r.split] == [-1, -1]
    assert split_twisted(F("+1*(1,2)^inf", 2), parse_tree("(2,1)")).log == ["no-op"]
    with pytest.raises(MoveError):
        split_twisted(F("+1*(1,2)^inf", 2), parse_tree("(1,(1,2))"))


def test_ihx_example():
    t = parse_tree("<((1,2),3),4>")
    r = ihx_move(F("+1*<((1,2),3),4>", 4), t)
    assert r.forest == F("+1*<(1,(2,3)),4> -1*<(2,(1,3)),4>", 4)
    spec = GroupSpec("framed", 2, 4)
    assert class_of_forest(spec, r.forest) == class_of_forest(spec, F("+1*<((1,2),3),4>", 4))
    with pytest.raises(MoveError):
        ihx_move(F("+1*<((1,2),3),4>", 4), t, edge=3)
    with pytest.raises(MoveError):
        ihx_move(F("+1*<(1,2),3>", 4), parse_tree("<(1,2),3>"))


def test_ihx_then_reverse_orientation():
    t = parse_tree("<((1,2),3),4>")
    f = F("+1*<((1,2),3),4>", 4)
    g = ihx_move(f, t).forest
    # the same move on the oppositely oriented copy undoes the class change
    t2 = UnrootedTree(flip_at(t.left, ()), t.right)
    h = ihx_move(g + SignedForest.build(4, [(1, t2)]), t2).forest
    spec = GroupSpec("framed", 2, 4)
    assert class_of_forest(spec, h) == class_of_forest(spec, g + SignedForest.build(4, [(1, t2)]))


def test_twisted_ihx_example():
    J = parse_tree("((1,2),(1,2))")
    r = twisted_ihx_move(F("+1*((1,2),(1,2))^inf", 2), J)
    H, X = parse_tree("(1,(2,(1,2)))"), parse_tree("(2,(1,(1,2)))")
    expect = SignedForest.build(2, [(-1, UnrootedTree(H, X))], [(1, TwistedTree(H)), (1, TwistedTree(X))])
    assert r.forest == expect
    with pytest.raises(MoveError):
        twisted_ihx_move(F("+2*((1,2),(1,2))^inf", 2), J)


def test_arf_trees_from_twisted_chain():
    f = F("+1*((1,2),(1,2))^inf", 2)
    f = twisted_ihx_move(f, parse_tree("((1,2),(1,2))")).forest
    f = boundary_twist(f, 1, parse_tree("(2,(1,2))"), -1).forest
    f = boundary_twist(f, 2, parse_tree("(1,(1,2))"), -1).forest
    f = normalize_to_order(f, 5).forest
    assert f == F("-1*<1,((2,(1,2)),(2,(1,2)))> -1*<2,((1,(1,2)),(1,(1,2)))>", 2)


def test_cancel_and_normalize():
    f = F("+1*<(1,2),3> +1*<(2,1),3>", 3)
    assert cancel_pair(f, parse_tree("<(1,2),3>")).forest == SignedForest.empty(3)
    with pytest.raises(MoveError):
        cancel_pair(F("+1*<(1,2),3>", 3), parse_tree("<(1,2),3>"))
    g = F("+1*<(1,2),3> +1*<((1,2),1),2>", 3)
    assert normalize_to_order(g, 1).forest == F("+1*<(1,2),3>", 3)
    with pytest.raises(MoveError):
        normalize_to_order(g, 2)


def test_move_along_tree_identity():
    f = F("+1*<(1,2),3>", 3)
    r = move_along_tree_identity(f, parse_tree("<(1,2),3>"))
    assert r.forest == f and "<1,(2,3)>" in r.log[0]


def test_certificates():
    c = certify_vanishing(GroupSpec("framed", 2, 4), F(JACOBI, 4))
    assert isinstance(c, Certificate)
    assert [k for _, k, _ in c.rows].count("IHX") == 1
    c = certify_vanishing(GroupSpec("twisted", 1, 2), F("+1*<1,(2,2)>", 2))
    assert [k for _, k, _ in c.rows] == ["boundary-twist"]
    assert certify_vanishing(GroupSpec("twisted", 1, 3), F("+1*<(1,2),3>", 3)) == "nonzero class"


def random_group_forest(rng, spec, k=4):
    gens = enumerate_generators(spec)
    fr, tw = [], []
    for _ in range(k):
        g = rng.choice(gens)
        (tw if isinstance(g, TwistedTree) else fr).append((rng.randint(-2, 2), g))
    return SignedForest.build(spec.m, fr, tw)


@given(st.integers(0, 10 ** 6), st.sampled_from([(2, 3), (3, 2), (3, 3)]))
def test_ihx_invariance_property(seed, nm):
    rng = random.Random(seed)
    n, m = nm
    for kind in ("framed", "twisted"):
        spec = GroupSpec(kind, n, m)
        f = random_group_forest(rng, spec)
        t = rng.choice(unrooted_trees(n, tuple(range(1, m + 1))))
        f = f + SignedForest.build(m, [(1, t)])
        if not f.coefficient(t):
            continue
        e = rng.randrange(len(tree_edges(t)))
        g = ihx_move(f, t, e).forest
        assert class_of_forest(spec, f) == class_of_forest(spec, g)


@given(st.integers(0, 10 ** 6))
def test_certificate_roundtrip_property(seed):
    rng = random.Random(seed)
    spec = GroupSpec("twisted", rng.choice([1, 2, 3]), rng.choice([2, 3]))
    p = build_presentation(spec)
    # random combination of relators, read back as a forest
    rows = rng.sample(range(len(p.relations)), min(3, len(p.relations)))
    v = combination(p, {r: rng.randint(-2, 2) or 1 for r in rows})
    gens = enumerate_generators(spec)
    f = SignedForest.build(
        spec.m,
        [(c, gens[k]) for k, c in v.items() if isinstance(gens[k], UnrootedTree)],
        [(c, gens[k]) for k, c in v.items() if isinstance(gens[k], TwistedTree)],
    )
    cert = certify_vanishing(spec, f)
    assert isinstance(cert, Certificate)
    assert combination(p, {i: c for i, _, c in cert.rows}) == forest_vector(spec, f)


def test_recipe_examples():
    steps = realize_recipe(parse_tree("<(1,2),(3,1)>"))
    assert steps[0] == StartHopf() and steps[1:3] == [BingDouble(1), BingDouble(2)]
    assert any(isinstance(s, Band) and s.label == 1 for s in steps)
    assert realize_recipe((1, parse_tree("(2,1)^inf"))) == [StartTwistedUnknotDouble(1)]
    assert realize_recipe(parse_tree("<1,2>")) == [StartHopf()]
    with pytest.raises(MoveError):
        realize_recipe((1, parse_tree("1^inf")))


def test_replay_rejects_bad_recipes():
    with pytest.raises(MoveError):
        replay([BingDouble(1)])
    with pytest.raises(MoveError):
        replay([StartHopf(), Band(1, 1, 1)])
    with pytest.raises(MoveError):
        replay([StartHopf(), Relabel(7, 1)])
    assert replay([StartHopf(), Relabel(2, 1)]) == ("framed", parse_tree("<1,1>"))


def test_recipe_replay_exhaustive():
    labs = (1, 2, 3)
    for n in range(4):
        for t in unrooted_trees(n, labs):
            assert recipe_matches(t, realize_recipe(t)), t
    for j in (1, 2):
        for J in rooted_trees(j, labs):
            for omega in (1, -1, 2):
                tw = TwistedTree(J)
                assert recipe_matches((omega, tw), realize_recipe((omega, tw))), J


def test_recipe_twisted_keeps_body_up_to_symmetry():
    J = Node(Leaf(2), Node(Leaf(1), Leaf(3)))
    steps = realize_recipe((3, TwistedTree(J)))
    kind, omega, out = replay(steps)
    assert kind == "twisted" and omega == 3
    assert SignedForest.build(3, [], [(1, out)]) == SignedForest.build(3, [], [(1, TwistedTree(J))])
