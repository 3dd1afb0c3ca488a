"""Probabilities on logical sentences over finite grounded vocabularies.

The pipeline: parse a knowledge base, ground its quantifiers over the
declared finite domains, materialize the space of complete truth
assignments, decide feasibility of the stated beliefs, extend them to a
full probability by minimum relative entropy against a prior, and query
it. A separate analytic module handles priors over unbounded 0/1
sequences for confirmation-of-universal-hypothesis curves.
"""

from .belief import Belief
from .errors import (
    CapExceededError,
    InfeasibleError,
    KbSyntaxError,
    NumericalFailureError,
    PlogError,
    UndefinedConditionalError,
)
from .extend import (
    Constraint,
    ConstraintSet,
    EntailmentOracle,
    check_eligible,
    check_subadditive,
    extend_feasible,
    extend_or_explain,
    is_hierarchical,
)
from .induct import SequencePrior, cuh_equivalence_check, parse_mixture_spec
from .logic import Sentence, Vocabulary, ground, to_text
from .maxent import Projection, dual_value, project
from .parser import parse_formula_text, parse_program
from .worlds import ModelSet, Partition, WorldSpace, check_tree_coefficients, partition

__all__ = [
    "Belief",
    "CapExceededError",
    "Constraint",
    "ConstraintSet",
    "EntailmentOracle",
    "InfeasibleError",
    "KbSyntaxError",
    "ModelSet",
    "NumericalFailureError",
    "Partition",
    "PlogError",
    "Projection",
    "SequencePrior",
    "Sentence",
    "UndefinedConditionalError",
    "Vocabulary",
    "WorldSpace",
    "check_eligible",
    "check_subadditive",
    "check_tree_coefficients",
    "cuh_equivalence_check",
    "dual_value",
    "extend_feasible",
    "extend_or_explain",
    "ground",
    "is_hierarchical",
    "parse_formula_text",
    "parse_mixture_spec",
    "parse_program",
    "partition",
    "project",
    "to_text",
]

__version__ = "0.1.0"
