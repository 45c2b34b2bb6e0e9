"""Semiring-generic word and tree automata.

Kleisli morphisms are semiring matrices, saturation is the Kleene star, and
languages are matrix pipelines ``entry ; saturated run ; exit``.  Boolean
automata additionally get a finite theory of state-set functions that
recognises their languages.
"""
from .algebra import (BOOLEAN, NATURAL, REAL, TROPICAL, UNIT_INTERVAL, SemiringSpec, ascending_sup,
                      by_name, chain_quantale, check_algebra_laws, check_quantale_laws)
from .kleisli import (KMatrix, base_map, check_adjunction, compose, cotuple, identity, leq, star,
                      transpose)
from .report import LawReport, LawResult
from .tree import Leaf, Node, TreeAutomaton, accepts, brute_force_accepts, eval_tree
from .word import (RegularWordMap, WordAutomaton, brute_force_weight, compose_regular,
                   cotuple_regular, eps_star, run_dual, saturation_slice, unit_regular, weight)

__all__ = [
    "BOOLEAN", "NATURAL", "REAL", "TROPICAL", "UNIT_INTERVAL", "SemiringSpec", "ascending_sup",
    "by_name", "chain_quantale", "check_algebra_laws", "check_quantale_laws",
    "KMatrix", "base_map", "check_adjunction", "compose", "cotuple", "identity", "leq", "star",
    "transpose",
    "LawReport", "LawResult",
    "Leaf", "Node", "TreeAutomaton", "accepts", "brute_force_accepts", "eval_tree",
    "RegularWordMap", "WordAutomaton", "brute_force_weight", "compose_regular", "cotuple_regular",
    "eps_star", "run_dual", "saturation_slice", "unit_regular", "weight",
]

__version__ = "0.1.0"
