"""Reductions from classical problems into affine VASS reachability.

Each compiler returns a CompiledInstance: a VASS with a source and a target
configuration whose reachability answers the original question.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .classify import is_permutation
from .emulate import GammaCtx, ImplWitness, Mode, flip_family
from .errors import CapExceeded, InputError, PreconditionError
from .machines import Lba, MinskyMachine, PcpInstance, check_bits
from .model import (AffineVass, Config, Mat, Perm, Semantics, Transition, VassBuilder,
                    block_diag, unit)


@dataclass(frozen=True, eq=False)
class CompiledInstance:
    vass: AffineVass
    source: Config
    target: Config
    semantics: Semantics
    counter_roles: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        self.vass.check_config(self.source)
        self.vass.check_config(self.target)


def _add(u: Sequence[int], w: Sequence[int]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(u, w))


# ------------------------------------------------------------------------ LBA

def _flip_diag(d: int, i: int) -> Mat:
    return Mat.diag([-1 if k == i else 1 for k in range(d)])


def _disturbed(w: ImplWitness, keys) -> list[int]:
    """Counters outside X that some family matrix can write to."""
    rows = set()
    for key in keys:
        for i, r in enumerate(w.family[key].rows):
            if i not in w.X and any(x != (i == j) for j, x in enumerate(r)):
                rows.add(i)
    return sorted(rows)


def compile_lba(m: Lba, w: str, flip_seed: Mat | None = None) -> CompiledInstance:
    """Simulate the LBA on input w with 2|w| counters (Z semantics).

    Cell j is tracked by a pair (x_j, y_j): x_j counts visits and the sign of
    y_j is the cell's content (positive for 0). Every read guesses the symbol;
    a wrong guess breaks |x_j| = |y_j|, which the final gadget requires.

    With ``flip_seed`` the sign changes use matrices built from the seed
    instead of diag(-1), on extra auxiliary counters placed after the main ones.
    """
    check_bits(w)
    if not w:
        raise InputError("the LBA needs at least one tape cell")
    k = len(w)
    main = 2 * k
    xs = [2 * j for j in range(k)]
    ys = [2 * j + 1 for j in range(k)]
    witness = None
    if flip_seed is None:
        dim = main
        flips = {y: _flip_diag(dim, y) for y in ys}
    else:
        witness = flip_family(flip_seed, main).relabel_front()
        dim = witness.m
        flips = {y: witness.family[(y,)] for y in ys}

    b = VassBuilder(dim)

    def q(p, i):
        return f"q[{p},{i}]"

    for p in m.states:
        for i in range(k):
            b.state(q(p, i))
    for p in m.states:
        for i in range(k):
            for a in (0, 1):
                p2, wrote, move = m.delta[(p, a)]
                i2 = i + move.offset
                if not 0 <= i2 < k:
                    continue
                mid1, mid2 = f"{q(p, i)}:{a}.1", f"{q(p, i)}:{a}.2"
                b.add(q(p, i), mid1, vec=unit(dim, xs[i]), name=f"visit[{p},{i}:{a}]", tag="sim")
                b.add(mid1, mid2, vec=unit(dim, ys[i], (-1) ** a), name=f"read[{p},{i}:{a}]", tag="sim")
                mat = None if wrote == a else flips[ys[i]]
                b.add(mid2, q(p2, i2), mat=mat, name=f"write[{p},{i}:{a}]", tag="sim")
    for i in range(k):
        b.add(q(m.accept, i), "acc0", name=f"accept[{i}]")
    for j in range(k):
        here, nxt = f"acc{j}", f"acc{j + 1}"
        b.add(here, nxt, name=f"keep[{j}]")
        b.add(here, nxt, mat=flips[ys[j]], name=f"negate[{j}]")
        dec = tuple(-1 if c in (xs[j], ys[j]) else 0 for c in range(dim))
        b.add(nxt, nxt, vec=dec, name=f"drain[{j}]")
    b.add(f"acc{k}", "r", name="done")
    roles = {c: (f"x{c // 2}" if c % 2 == 0 else f"y{c // 2}") for c in range(main)}
    if witness is not None:
        roles.update({c: "aux" for c in range(main, dim)})
        if witness.mode is Mode.ANY_IMPL:
            for c in _disturbed(witness, [(y,) for y in ys]):
                b.add("r", "r", vec=unit(dim, c), name=f"aux+[{c}]")
                b.add("r", "r", vec=unit(dim, c, -1), name=f"aux-[{c}]")
    v = b.build()
    start = [0] * dim
    for j, ch in enumerate(w):
        start[xs[j]] = 1
        start[ys[j]] = 1 if ch == "0" else -1
    source = Config(v.state_id(q(m.init, 0)), tuple(start))
    target = Config(v.state_id("r"), (0,) * dim)
    return CompiledInstance(v, source, target, Semantics.Z, roles)


# ------------------------------------------------------------------------ PCP

def compile_pcp(p: PcpInstance, ctx: GammaCtx, sem: Semantics = Semantics.Z) -> CompiledInstance:
    """Encode top and bottom strings as γ-values on two blocks of counters.

    Counters 0..d-1 carry f_top(e) and d..2d-1 carry f_bottom(e). A match makes
    the two blocks equal, after which paired decrements (and, beyond the first
    coordinate, paired adjustments) bring both blocks to e.
    """
    c = ctx.c_matrix
    d = ctx.dim
    if sem is Semantics.N and any(x < 0 for r in c.rows for x in r):
        raise PreconditionError("the N variant needs a doubling matrix without negative entries")
    dim = 2 * d
    top = block_diag(c, Mat.identity(d))
    bot = block_diag(Mat.identity(d), c)
    b = VassBuilder(dim)
    b.state("p")

    def letters(src, tgt, word, mat, first, label, tile):
        if not word:
            b.add(src, tgt, name=f"{label}.empty", tag=("tile", tile) if tile is not None else None)
            return
        states = [src] + [f"{label}.{n}" for n in range(1, len(word))] + [tgt]
        for n, ch in enumerate(word):
            vec = unit(dim, first) if ch == "1" else None
            tag = ("tile", tile) if (n == 0 and tile is not None) else None
            b.add(states[n], states[n + 1], mat=mat, vec=vec, name=f"{label}.{n}", tag=tag)

    for i, (u, w) in enumerate(p.tiles):
        letters("p", f"q{i}", u, top, 0, f"tile{i}.top", i)
        letters(f"q{i}", "p", w, bot, d, f"tile{i}.bottom", None)
    both = tuple(-1 if k in (0, d) else 0 for k in range(dim))
    b.add("p", "r", vec=both, name="drain0")
    b.add("r", "r", vec=both, name="drain")
    for j in range(1, d):
        pair = tuple(1 if k in (j, d + j) else 0 for k in range(dim))
        b.add("r", "r", vec=tuple(-x for x in pair), name=f"level-[{j}]")
        if sem is Semantics.Z:
            b.add("r", "r", vec=pair, name=f"level+[{j}]")
    v = b.build()
    e2 = unit(dim, 0)
    e2 = _add(e2, unit(dim, d))
    roles = {k: ("top" if k < d else "bottom") for k in range(dim)}
    return CompiledInstance(v, Config(v.state_id("p"), e2), Config(v.state_id("r"), e2), sem, roles)


def decode_tiles(v: AffineVass, word: Sequence[int]) -> tuple[int, ...]:
    """Tile sequence of a PCP witness run."""
    out = []
    for k in word:
        tag = v.transitions[k].tag
        if isinstance(tag, tuple) and tag[0] == "tile":
            out.append(tag[1])
    return tuple(out)


# --------------------------------------------------------------------- Minsky

def compile_minsky(mm: MinskyMachine, neg_seed: Mat) -> CompiledInstance:
    """Simulate a two-counter machine over N using a matrix with a negative entry.

    Counter x lives at coordinate j of the first block and y at coordinate j of
    the second, where A[i][j] < 0. Applying A to a block holding only λ·e_j
    yields λ times column j, which is nonnegative only when λ = 0: a zero test.
    """
    at = next(((i, j) for i, j, x in neg_seed.entries() if x < 0), None)
    if at is None:
        raise PreconditionError("the seed has no negative entry")
    _, j = at
    d = neg_seed.dim
    dim = 2 * d
    ident = Mat.identity(d)
    slot = {"x": j, "y": d + j}
    zero = {"x": block_diag(neg_seed, ident), "y": block_diag(ident, neg_seed)}
    b = VassBuilder(dim)
    for s in mm.states:
        b.state(s)
    for n, (src, op, tgt) in enumerate(mm.transitions):
        if op.kind == "add":
            b.add(src, tgt, vec=unit(dim, slot[op.counter], op.value), name=f"t{n}")
        else:
            b.add(src, tgt, mat=zero[op.counter], name=f"t{n}")
    v = b.build()
    roles = {k: "aux" for k in range(dim)}
    roles[slot["x"]], roles[slot["y"]] = "x", "y"
    inst = CompiledInstance(v, Config(v.state_id(mm.init), (0,) * dim),
                            Config(v.state_id(mm.final), (0,) * dim), Semantics.N, roles)
    return inst


def minsky_config(inst: CompiledInstance, state: str, x: int, y: int) -> Config:
    vals = [0] * inst.vass.d
    for k, role in inst.counter_roles.items():
        if role == "x":
            vals[k] = x
        elif role == "y":
            vals[k] = y
    return inst.vass.config(state, vals)


# ---------------------------------------------------------------- permutations

DEFAULT_MAX_PERM_DIM = 6


def _split(v: AffineVass) -> list[tuple[int, Transition, str]]:
    """Separate the matrix and vector parts of each transition: (origin, transition, part)."""
    parts = []
    for k, t in enumerate(v.transitions):
        if not is_permutation(t.mat):
            raise InputError(f"transition {k} has a matrix that is not a permutation", f"/transitions/{k}/matrix")
        if t.mat.is_identity() or not any(t.vec):
            parts.append((k, t, "whole"))
        else:
            parts.append((k, Transition(t.src, t.mat, (0,) * v.d, -1 - k), "perm"))
            parts.append((k, Transition(-1 - k, Mat.identity(v.d), t.vec, t.tgt), "vec"))
    return parts


def _perm_of(m: Mat) -> Perm:
    # P e_i = e_{σ(i)}: column i has its 1 in row σ(i)
    return Perm(tuple(next(r for r in range(m.dim) if m[r, i]) for i in range(m.dim)))


def perm_expand(v: AffineVass, max_dim: int = DEFAULT_MAX_PERM_DIM, max_states: int | None = None) -> AffineVass:
    """An equivalent VASS with identity matrices only, tracking the renaming in the control state.

    In state q_σ the counters are stored permuted: the stored vector is P_σ·v
    for an original vector v. A permutation step π then only updates σ to σ∘π⁻¹.
    """
    if v.d > max_dim:
        raise CapExceeded(f"dimension {v.d} exceeds the permutation cap {max_dim}")
    if max_states is None and os.environ.get("AVASS_MAX_STATES"):
        max_states = int(os.environ["AVASS_MAX_STATES"])
    parts = _split(v)
    perms = [Perm(p) for p in itertools.permutations(range(v.d))]
    n_mid = sum(1 for _, _, part in parts if part == "perm")
    total = (len(v.states) + n_mid) * len(perms)
    if max_states is not None and total > max_states:
        raise CapExceeded(f"expansion would have {total} states, cap is {max_states}")
    rank = {s: r for r, s in enumerate(perms)}

    def name(state: int, sigma: Perm) -> str:
        base = v.states[state] if state >= 0 else f"{v.states[v.transitions[-1 - state].src]}~t{-1 - state}"
        return f"{base}<{rank[sigma]}>"

    b = VassBuilder(v.d)
    for s in range(len(v.states)):
        for sigma in perms:
            b.state(name(s, sigma))
    for origin, t, part in parts:
        if t.mat.is_identity():
            for sigma in perms:
                b.add(name(t.src, sigma), name(t.tgt, sigma), vec=sigma.permute(t.vec), tag=(origin, part))
        else:
            inv = _perm_of(t.mat).inverse()
            for sigma in perms:
                b.add(name(t.src, sigma), name(t.tgt, sigma.compose(inv)), tag=(origin, part))
    return b.build()


def perm_queries(v: AffineVass, expanded: AffineVass, source: Config, target: Config) -> list[tuple[Config, Config]]:
    """The d! queries on the expansion that together answer source →* target."""
    perms = [Perm(p) for p in itertools.permutations(range(v.d))]
    src = Config(expanded.state_id(f"{v.states[source.state]}<0>"), source.vals)
    return [(src, Config(expanded.state_id(f"{v.states[target.state]}<{r}>"), sigma.permute(target.vals)))
            for r, sigma in enumerate(perms)]


def perm_reach(v: AffineVass, source: Config, target: Config,
               oracle: Callable[[AffineVass, Config, Config], bool]) -> bool:
    expanded = perm_expand(v)
    return any(oracle(expanded, s, t) for s, t in perm_queries(v, expanded, source, target))


def project_run(expanded: AffineVass, word: Sequence[int]) -> list[int]:
    """Original transition ids of a run of the expansion (split halves merged)."""
    out = []
    for k in word:
        origin, part = expanded.transitions[k].tag
        if part != "vec":
            out.append(origin)
    return out


# --------------------------------------------------------------- coverability

def cover_to_reach(v: AffineVass) -> AffineVass:
    """Run every transition on (u, -u) in parallel: (A, b) becomes (diag(A, A), (b, -b))."""
    ts = [Transition(t.src, block_diag(t.mat, t.mat), t.vec + tuple(-x for x in t.vec), t.tgt, t.name, t.tag)
          for t in v.transitions]
    return AffineVass(2 * v.d, v.states, tuple(ts))


def mirror(c: Config) -> Config:
    return Config(c.state, c.vals + tuple(-x for x in c.vals))
