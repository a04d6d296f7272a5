"""Regular tree languages: trees, automata and the substitution theory on them."""

from .trees import RankedAlphabet, Tree, depth, enumerate_trees, parse_tree, tree_str
from .nfta import Nfta, set_state_budget, state_budget
from .morphisms import TreeMorphism

__all__ = ["RankedAlphabet", "Tree", "depth", "enumerate_trees", "parse_tree", "tree_str",
           "Nfta", "set_state_budget", "state_budget", "TreeMorphism"]
