"""Finite posets, incidence algebras, connect-sum surgery and the Bruhat-like lattice on subsets."""

from .errors import (
    CapExceeded,
    CycleDetected,
    FaceLimitExceeded,
    LayerInvalid,
    MConditionFailed,
    MobiusOverflow,
    NotAnEmbedding,
    NotAPartialOrder,
    NotComparable,
    NotElementary,
    PosetError,
    SizeMismatch,
)
from .incidence import MobiusTable, mobius_by_inversion, mobius_by_recursion, mobius_invert, zeta_matrix
from .poset import FinitePoset, cover_pairs, dual, find_isomorphism, from_cover_relations, grading, interval

__version__ = "0.1.0"
