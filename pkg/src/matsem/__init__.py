"""Exact membership testing in finitely generated semigroups of nonsingular
2x2 integer matrices.

Unimodular generators contribute regular sets of canonical words; each
remaining generator can occur only boundedly often in a product, so
membership reduces to finitely many chain equations over those regular sets,
decided exactly with automata.
"""

from .mat2 import (
    IDENTITY,
    Mat2,
    NotConjugable,
    NotUnimodular,
    SingularInput,
    SnfDecomposition,
    conjugate_by_diag,
    diag,
    inverse_unimodular,
    smith_normal_form,
)
from .nfa import Nfa, make_nfa
from .oracle import bfs_products, single_generator_member
from .solver import (
    ChainEquation,
    Decision,
    ProblemInstance,
    SingularGenerator,
    SolverTimeout,
    build_F_base,
    build_F_chain,
    decide,
    decide_chain,
    decide_membership,
)
from .words import (
    NotInGL,
    PHI,
    invert_word,
    is_canonical,
    matrix_to_canonical_word,
    normalize,
    phi_eval,
)
from .glz import (
    canonicalize_automaton,
    conjugate_automaton,
    coset_automaton,
    coset_index,
    invert_automaton,
    left_coset_reps,
    member,
    right_coset_reps,
    semigroup_subset,
)

__version__ = "0.1.0"

__all__ = [
    "IDENTITY",
    "Mat2",
    "NotConjugable",
    "NotUnimodular",
    "SingularInput",
    "SnfDecomposition",
    "conjugate_by_diag",
    "diag",
    "inverse_unimodular",
    "smith_normal_form",
    "Nfa",
    "make_nfa",
    "bfs_products",
    "single_generator_member",
    "ChainEquation",
    "Decision",
    "ProblemInstance",
    "SingularGenerator",
    "SolverTimeout",
    "build_F_base",
    "build_F_chain",
    "decide",
    "decide_chain",
    "decide_membership",
    "NotInGL",
    "PHI",
    "invert_word",
    "is_canonical",
    "matrix_to_canonical_word",
    "normalize",
    "phi_eval",
    "canonicalize_automaton",
    "conjugate_automaton",
    "coset_automaton",
    "coset_index",
    "invert_automaton",
    "left_coset_reps",
    "member",
    "right_coset_reps",
    "semigroup_subset",
    "__version__",
]
