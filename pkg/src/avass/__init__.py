"""Affine vector addition systems: classification, emulation gadgets, reductions and bounded search."""
from .classify import Dichotomy, Trichotomy, dichotomy, monoid_enumerate, trichotomy
from .errors import (AvassError, CapExceeded, ConstructionBug, DimensionError, InputError,
                     PreconditionError, UnsupportedSeed)
from .model import AffineVass, Config, Mat, Perm, Semantics, Transition, VassBuilder, run, step
from .search import SearchResult, bounded_reach

__all__ = [
    "AffineVass", "AvassError", "CapExceeded", "Config", "ConstructionBug", "Dichotomy", "DimensionError",
    "InputError", "Mat", "Perm", "PreconditionError", "SearchResult", "Semantics", "Transition", "Trichotomy",
    "UnsupportedSeed", "VassBuilder", "bounded_reach", "dichotomy", "monoid_enumerate", "run", "step",
    "trichotomy",
]
