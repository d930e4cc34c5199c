"""Structural predicates on integer matrices and the complexity verdicts they imply."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CapExceeded, DimensionError, InputError
from .model import Mat, mat_mul


def _entries_in(a: Mat, allowed: set[int]) -> bool:
    return all(x in allowed for r in a.rows for x in r)


def _at_most_one_per_column(a: Mat) -> bool:
    return all(sum(1 for x in col if x) <= 1 for col in zip(*a.rows))


def _at_most_one_per_row(a: Mat) -> bool:
    return all(sum(1 for x in r if x) <= 1 for r in a.rows)


def _diagonal(a: Mat) -> bool:
    return all(x == 0 for i, j, x in a.entries() if i != j)


PSEUDO = {-1, 0, 1}
BINARY = {0, 1}


def is_reset(a: Mat) -> bool:
    return _entries_in(a, BINARY) and _diagonal(a)


def is_pseudo_reset(a: Mat) -> bool:
    return _entries_in(a, PSEUDO) and _diagonal(a)


def is_transfer(a: Mat) -> bool:
    return _entries_in(a, BINARY) and _at_most_one_per_column(a)


def is_pseudo_transfer(a: Mat) -> bool:
    return _entries_in(a, PSEUDO) and _at_most_one_per_column(a)


def is_copy(a: Mat) -> bool:
    return _entries_in(a, BINARY) and _at_most_one_per_row(a)


def is_pseudo_copy(a: Mat) -> bool:
    return _entries_in(a, PSEUDO) and _at_most_one_per_row(a)


def is_permutation(a: Mat) -> bool:
    return is_transfer(a) and is_copy(a) and all(any(r) for r in a.rows)


class Trichotomy(enum.Enum):
    NP_RESET = "NP_RESET"
    PSPACE_PSEUDO_TRANSFER = "PSPACE_PSEUDO_TRANSFER"
    PSPACE_PSEUDO_COPY = "PSPACE_PSEUDO_COPY"
    UNDECIDABLE = "UNDECIDABLE"


class Dichotomy(enum.Enum):
    DECIDABLE_PERMUTATION = "DECIDABLE_PERMUTATION"
    UNDECIDABLE = "UNDECIDABLE"


@dataclass(frozen=True)
class ClassVerdict:
    bucket: Trichotomy
    # For UNDECIDABLE: {"kind": "large_entry", ...} or {"kind": "row_and_column", ...}
    witness: dict | None = field(default=None, compare=False)


@dataclass(frozen=True)
class DichotomyVerdict:
    bucket: Dichotomy
    witness: dict | None = field(default=None, compare=False)


def _nonempty(gens: Sequence[Mat]) -> None:
    if not gens:
        raise InputError("need at least one generator")


def _large_entry(gens: Sequence[Mat]) -> dict | None:
    for g, a in enumerate(gens):
        for i, j, x in a.entries():
            if abs(x) >= 2:
                return {"kind": "large_entry", "generator": g, "entry": [i, j], "value": x}
    return None


def _crowded_row(a: Mat) -> tuple[int, list[int]] | None:
    for i, r in enumerate(a.rows):
        cols = [j for j, x in enumerate(r) if x]
        if len(cols) >= 2:
            return i, cols[:2]
    return None


def trichotomy(gens: Sequence[Mat]) -> ClassVerdict:
    """Verdict for the class generated by ``gens``, read off the generators alone.

    Each of the three tractable shapes is closed under product, extension and
    renaming, so the generated class has a shape iff every generator does.
    """
    _nonempty(gens)
    if all(is_reset(a) for a in gens):
        return ClassVerdict(Trichotomy.NP_RESET)
    if all(is_pseudo_transfer(a) for a in gens):
        return ClassVerdict(Trichotomy.PSPACE_PSEUDO_TRANSFER)
    if all(is_pseudo_copy(a) for a in gens):
        return ClassVerdict(Trichotomy.PSPACE_PSEUDO_COPY)
    witness = _large_entry(gens)
    if witness is None:
        # every entry is in {-1, 0, 1}: some generator has a crowded row, another a crowded column
        g_row = next(g for g, a in enumerate(gens) if not is_pseudo_copy(a))
        g_col = next(g for g, a in enumerate(gens) if not is_pseudo_transfer(a))
        row, cols = _crowded_row(gens[g_row])
        col, rows = _crowded_row(gens[g_col].transpose())
        witness = {
            "kind": "row_and_column",
            "row_generator": g_row, "row": row, "cols": cols,
            "column_generator": g_col, "column": col, "rows": rows,
        }
    return ClassVerdict(Trichotomy.UNDECIDABLE, witness)


def dichotomy(gens: Sequence[Mat]) -> DichotomyVerdict:
    _nonempty(gens)
    for g, a in enumerate(gens):
        if not is_permutation(a):
            return DichotomyVerdict(Dichotomy.UNDECIDABLE, {"kind": "non_permutation", "generator": g})
    return DichotomyVerdict(Dichotomy.DECIDABLE_PERMUTATION)


def monoid_enumerate(gens: Sequence[Mat], cap: int = 10**6) -> set[Mat]:
    """All products of generators (including the empty product I).

    Raises CapExceeded as soon as more than ``cap`` distinct matrices appear.
    """
    _nonempty(gens)
    d = gens[0].dim
    if any(a.dim != d for a in gens):
        raise DimensionError("generators of mixed dimensions")
    ident = Mat.identity(d)
    seen = {ident}
    todo = [ident]
    while todo:
        m = todo.pop()
        for a in gens:
            p = mat_mul(m, a)
            if p not in seen:
                seen.add(p)
                if len(seen) > cap:
                    raise CapExceeded(f"monoid has more than {cap} elements")
                todo.append(p)
    return seen
