"""Fixed and periodic points of endomorphisms of graph groups (right-angled Artin groups)."""

from .alphabet import Alphabet, Classification, IndependenceRelation, classify, parse_alphabet
from .trace import GraphGroup, GroupElement
from .morphism import Morphism, certify_automorphism, make_morphism, witness_auto, witness_endo
from .fixpoint import chain_experiment, classify_group, fix_in_ball, per_in_ball

__all__ = [
    "Alphabet",
    "Classification",
    "GraphGroup",
    "GroupElement",
    "IndependenceRelation",
    "Morphism",
    "certify_automorphism",
    "chain_experiment",
    "classify",
    "classify_group",
    "fix_in_ball",
    "make_morphism",
    "parse_alphabet",
    "per_in_ball",
    "witness_auto",
    "witness_endo",
]
