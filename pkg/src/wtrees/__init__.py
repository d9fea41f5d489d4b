"""Exact symbolic calculator for Whitney tower tree groups.

Trees and forests, presentations of the framed, twisted and decorated tree
groups, the summation map eta into the free Lie algebra, Milnor invariants
from longitude words, and forest-level moves with checked invariance.
"""
from .abelian import GroupStructure, Presentation, smith_normal_form
from .forest import SignedForest, parse_forest, print_forest
from .lie import LieElement, TensorElement, lyndon_basis, witt_rank
from .milnor import arf_kernel, eta, eta_hom, magnus_expand, mu_n
from .moves import certify_vanishing, realize_recipe, replay
from .tree_groups import GroupSpec, build_presentation, class_of_forest, group_structure
from .trees import Leaf, Node, TwistedTree, UnrootedTree, parse_tree, print_tree

__version__ = "0.1.0"

__all__ = [
    "GroupSpec",
    "GroupStructure",
    "Leaf",
    "LieElement",
    "Node",
    "Presentation",
    "SignedForest",
    "TensorElement",
    "TwistedTree",
    "UnrootedTree",
    "arf_kernel",
    "build_presentation",
    "certify_vanishing",
    "class_of_forest",
    "eta",
    "eta_hom",
    "group_structure",
    "lyndon_basis",
    "magnus_expand",
    "mu_n",
    "parse_forest",
    "parse_tree",
    "print_forest",
    "print_tree",
    "realize_recipe",
    "replay",
    "smith_normal_form",
    "witt_rank",
]
