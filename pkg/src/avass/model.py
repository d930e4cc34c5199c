"""Affine VASS data model: integer matrices, permutations, configurations and steps.

All arithmetic uses Python integers, so values never overflow. Matrices are
immutable tuples of rows, which keeps them hashable for monoid enumeration.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DimensionError, InputError

IVec = tuple[int, ...]


class Semantics(enum.Enum):
    Z = "z"
    N = "n"


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"expected an integer, got {x!r}")
    return x


def as_vec(values: Iterable[int]) -> IVec:
    return tuple(_check_int(x) for x in values)


@dataclass(frozen=True)
class Mat:
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(as_vec(r) for r in self.rows)
        n = len(rows)
        if n == 0:
            raise DimensionError("a matrix needs at least one row")
        for r in rows:
            if len(r) != n:
                raise DimensionError(f"matrix is not square: row of length {len(r)} in a {n}-row matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> Mat:
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diag(cls, entries: Sequence[int]) -> Mat:
        n = len(entries)
        return cls(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> Mat:
        return cls(tuple((0,) * n for _ in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if isinstance(other, Mat):
            return mat_mul(self, other)
        return self.apply(other)

    def apply(self, v: Sequence[int]) -> IVec:
        if len(v) != self.dim:
            raise DimensionError(f"cannot apply a {self.dim}x{self.dim} matrix to a vector of length {len(v)}")
        return tuple(sum(a * x for a, x in zip(row, v) if a) for row in self.rows)

    def transpose(self) -> Mat:
        return Mat(tuple(zip(*self.rows)))

    def column(self, j: int) -> IVec:
        return tuple(r[j] for r in self.rows)

    def entries(self):
        """Yield (row, col, value) for every nonzero entry in row-major order."""
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x:
                    yield i, j, x

    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def __str__(self) -> str:
        width = max(len(str(x)) for r in self.rows for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.rows)


@dataclass(frozen=True)
class Perm:
    """A bijection on {0, ..., dim-1}; ``images[i]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if sorted(images) != list(range(len(images))) or not images:
            raise DimensionError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @property
    def dim(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    @classmethod
    def identity(cls, n: int) -> Perm:
        return cls(tuple(range(n)))

    @classmethod
    def cycle(cls, n: int, *points: int) -> Perm:
        """The cycle sending points[0] to points[1], ..., and the last back to the first."""
        if len(set(points)) != len(points):
            raise DimensionError(f"cycle with repeated points {points}")
        images = list(range(n))
        for a, b in zip(points, points[1:] + points[:1]):
            images[a] = b
        return cls(tuple(images))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> Perm:
        if i == j:
            return cls.identity(n)
        return cls.cycle(n, i, j)

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> Perm:
        """Complete a partial injective map to a permutation.

        Unmapped points are sent, in increasing order, to the unused images in
        increasing order.
        """
        used = set(mapping.values())
        if len(used) != len(mapping):
            raise DimensionError(f"mapping is not injective: {mapping}")
        free = iter(sorted(set(range(n)) - used))
        return cls(tuple(mapping[i] if i in mapping else next(free) for i in range(n)))

    def compose(self, other: Perm) -> Perm:
        """self ∘ other: apply ``other`` first."""
        if self.dim != other.dim:
            raise DimensionError("composing permutations of different sizes")
        return Perm(tuple(self.images[other.images[i]] for i in range(self.dim)))

    def inverse(self) -> Perm:
        inv = [0] * self.dim
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def extend(self, n: int) -> Perm:
        """The same permutation acting on a larger index set, fixing the new points."""
        return Perm(self.images + tuple(range(self.dim, n)))

    def matrix(self) -> Mat:
        """P with P·e_i = e_{σ(i)}."""
        rows = [[0] * self.dim for _ in range(self.dim)]
        for i, j in enumerate(self.images):
            rows[j][i] = 1
        return Mat(tuple(map(tuple, rows)))

    def permute(self, v: Sequence[int]) -> IVec:
        """P_σ·v, i.e. the entry at i moves to σ(i)."""
        out = [0] * self.dim
        for i, x in enumerate(v):
            out[self.images[i]] = x
        return tuple(out)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a.dim != b.dim:
        raise DimensionError(f"multiplying {a.dim}x{a.dim} by {b.dim}x{b.dim}")
    cols = list(zip(*b.rows))
    return Mat(tuple(
        tuple(sum(x * y for x, y in zip(row, col) if x and y) for col in cols)
        for row in a.rows
    ))


def mat_ext(a: Mat, n: int) -> Mat:
    """Block diagonal (a, I_n): the matrix acting on n extra untouched counters."""
    if n < 0:
        raise DimensionError("extension size must be nonnegative")
    d = a.dim
    top = tuple(r + (0,) * n for r in a.rows)
    bottom = tuple((0,) * (d + i) + (1,) + (0,) * (n - i - 1) for i in range(n))
    return Mat(top + bottom)


def mat_conj(a: Mat, s: Perm) -> Mat:
    """Rename counters: the result r satisfies r[s(i)][s(j)] = a[i][j]."""
    if a.dim != s.dim:
        raise DimensionError(f"conjugating a {a.dim}x{a.dim} matrix by a permutation of size {s.dim}")
    n = a.dim
    rows = [[0] * n for _ in range(n)]
    img = s.images
    for i, r in enumerate(a.rows):
        ri = rows[img[i]]
        for j, x in enumerate(r):
            ri[img[j]] = x
    return Mat(tuple(map(tuple, rows)))


def mat_norm(a: Mat) -> int:
    return max(abs(x) for r in a.rows for x in r)


def block_diag(a: Mat, b: Mat) -> Mat:
    da, db = a.dim, b.dim
    top = tuple(r + (0,) * db for r in a.rows)
    bottom = tuple((0,) * da + r for r in b.rows)
    return Mat(top + bottom)


@dataclass(frozen=True)
class Transition:
    src: int
    mat: Mat
    vec: IVec
    tgt: int
    name: str = ""
    # free-form decoding hint (tile index, gadget role, ...); not part of identity
    tag: object = field(default=None, compare=False)


@dataclass(frozen=True)
class Config:
    state: int
    vals: IVec

    def __post_init__(self):
        object.__setattr__(self, "vals", as_vec(self.vals))


@dataclass(frozen=True)
class AffineVass:
    d: int
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        if self.d < 1:
            raise DimensionError("a VASS needs at least one counter")
        if len(set(self.states)) != len(self.states):
            raise InputError("duplicate state names")
        for k, t in enumerate(self.transitions):
            if not (0 <= t.src < len(self.states) and 0 <= t.tgt < len(self.states)):
                raise InputError(f"transition {k} refers to an undeclared state")
            if t.mat.dim != self.d or len(t.vec) != self.d:
                raise DimensionError(f"transition {k} has dimension {t.mat.dim}/{len(t.vec)}, expected {self.d}")

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _name_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for k, t in enumerate(self.transitions):
            if t.name and t.name not in index:
                index[t.name] = k
        return index

    def state_id(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise InputError(f"unknown state {name!r}") from None

    def transition_id(self, ref: int | str) -> int:
        if isinstance(ref, int) and not isinstance(ref, bool):
            if 0 <= ref < len(self.transitions):
                return ref
        elif isinstance(ref, str) and ref in self._name_index:
            return self._name_index[ref]
        raise InputError(f"unknown transition {ref!r}")

    def config(self, state: str, vals: Sequence[int]) -> Config:
        c = Config(self.state_id(state), tuple(vals))
        self.check_config(c)
        return c

    def check_config(self, c: Config) -> None:
        if not 0 <= c.state < len(self.states):
            raise InputError(f"configuration state {c.state} out of range")
        if len(c.vals) != self.d:
            raise InputError(f"configuration has {len(c.vals)} values, expected {self.d}")

    def format_config(self, c: Config) -> str:
        return f"{self.states[c.state]}({','.join(map(str, c.vals))})"

    def parse_config(self, text: str) -> Config:
        m = _CONFIG_RE.match(text)
        if not m:
            raise InputError(f"cannot parse configuration {text!r}; expected state(v0,v1,...)")
        name, body = m.group(1), m.group(2).strip()
        try:
            vals = tuple(int(x) for x in body.split(",")) if body else ()
        except ValueError:
            raise InputError(f"non-integer value in configuration {text!r}") from None
        return self.config(name, vals)

    @cached_property
    def outgoing(self) -> tuple[tuple[int, ...], ...]:
        """Transition ids leaving each state, in declaration order."""
        out: list[list[int]] = [[] for _ in self.states]
        for k, t in enumerate(self.transitions):
            out[t.src].append(k)
        return tuple(map(tuple, out))


_CONFIG_RE = re.compile(r"^\s*(\S.*?)\s*\(([^()]*)\)\s*$")


class VassBuilder:
    """Incrementally assemble an AffineVass from named states."""

    def __init__(self, d: int):
        self.d = d
        self.states: list[str] = []
        self.index: dict[str, int] = {}
        self.transitions: list[Transition] = []

    def state(self, name: str) -> int:
        if name not in self.index:
            self.index[name] = len(self.states)
            self.states.append(name)
        return self.index[name]

    def add(self, src: str, tgt: str, mat: Mat | None = None, vec: Sequence[int] | None = None,
            name: str = "", tag: object = None) -> int:
        mat = Mat.identity(self.d) if mat is None else mat
        vec = (0,) * self.d if vec is None else as_vec(vec)
        self.transitions.append(Transition(self.state(src), mat, vec, self.state(tgt), name, tag))
        return len(self.transitions) - 1

    def build(self) -> AffineVass:
        return AffineVass(self.d, tuple(self.states), tuple(self.transitions))


def unit(d: int, i: int, scale: int = 1) -> IVec:
    return tuple(scale if j == i else 0 for j in range(d))


def step(v: AffineVass, c: Config, t: Transition | int, sem: Semantics) -> Config | None:
    """Fire one transition; None when it is not enabled."""
    if not isinstance(t, Transition):
        t = v.transitions[v.transition_id(t)]
    if len(c.vals) != v.d:
        raise DimensionError(f"configuration of dimension {len(c.vals)} in a {v.d}-counter VASS")
    if c.state != t.src:
        return None
    if sem is Semantics.N and any(x < 0 for x in c.vals):
        return None
    out = tuple(x + b for x, b in zip(t.mat.apply(c.vals), t.vec))
    if sem is Semantics.N and any(x < 0 for x in out):
        return None
    return Config(t.tgt, out)


def run(v: AffineVass, c: Config, word: Iterable[int | str], sem: Semantics) -> Config | None:
    """Fire a word of transitions left to right; None as soon as one is disabled."""
    ids = [v.transition_id(w) for w in word]
    for k in ids:
        c = step(v, c, v.transitions[k], sem)
        if c is None:
            return None
    return c
