"""Complete symmetry breaking predicates for structured permutation groups."""

from .errors import (
    CapExceeded,
    Intractable,
    NotSubgroup,
    OracleIncomplete,
    PropagationStuck,
    SpecError,
    SymbreakError,
)
from .perm import GeneratedGroup, Partition, Permutation, act_assignment, compose, inverse

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "GeneratedGroup",
    "Intractable",
    "NotSubgroup",
    "OracleIncomplete",
    "Partition",
    "Permutation",
    "PropagationStuck",
    "SpecError",
    "SymbreakError",
    "act_assignment",
    "compose",
    "inverse",
]
