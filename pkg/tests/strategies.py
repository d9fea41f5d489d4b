"""Hypothesis strategies and small random generators shared by the tests."""
import random

from hypothesis import strategies as st

from wtrees.trees import Leaf, Node, TwistedTree, UnrootedTree


def rooted(max_leaves=5, m=4):
    leaf = st.integers(1, m).map(Leaf)
    return st.recursive(leaf, lambda ch: st.tuples(ch, ch).map(lambda p: Node(*p)), max_leaves=max_leaves)


def unrooted(max_leaves=5, m=4):
    return st.tuples(rooted(max_leaves, m), rooted(max_leaves, m)).map(lambda p: UnrootedTree(*p))


def twisted(max_leaves=5, m=4):
    return rooted(max_leaves, m).map(TwistedTree)


def random_rooted(rng: random.Random, order: int, m: int):
    if order == 0:
        return Leaf(rng.randint(1, m))
    k = rng.randint(0, order - 1)
    return Node(random_rooted(rng, k, m), random_rooted(rng, order - 1 - k, m))


def random_unrooted(rng: random.Random, order: int, m: int) -> UnrootedTree:
    k = rng.randint(0, order)
    return UnrootedTree(random_rooted(rng, k, m), random_rooted(rng, order - k, m))
