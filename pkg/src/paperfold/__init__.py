"""Deterministic paper-folding / hole-punching benchmark toolkit."""

__version__ = "0.1.0"

from .engine import (
    FoldedState,
    HolePattern,
    HoleSpec,
    apply_fold,
    apply_rotation,
    derive_unfold_steps,
    punch,
    simulate,
    unfold_all,
)
from .geometry import TriRef, index_tri, tri_index
from .rules import (
    FoldSpec,
    RotationSpec,
    classify_group,
    enumerate_group,
    parse_actions,
    validate,
)

__all__ = [
    "__version__",
    "FoldedState",
    "HolePattern",
    "HoleSpec",
    "FoldSpec",
    "RotationSpec",
    "TriRef",
    "apply_fold",
    "apply_rotation",
    "classify_group",
    "derive_unfold_steps",
    "enumerate_group",
    "index_tri",
    "parse_actions",
    "punch",
    "simulate",
    "tri_index",
    "unfold_all",
    "validate",
]
