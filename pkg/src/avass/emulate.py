"""Emulating operations with matrices built from a seed by extension, renaming and product.

Every matrix returned here carries a ``Term``: the expression tree that built it
from the seed(s). ``derivation_log`` flattens a term into a list of steps and
``replay`` re-evaluates that list, so any witness can be rebuilt independently.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .classify import is_copy, is_pseudo_copy, is_pseudo_transfer, is_transfer
from .errors import ConstructionBug, InputError, PreconditionError, UnsupportedSeed
from .model import Mat, Perm, mat_conj, mat_ext, mat_mul


# ---------------------------------------------------------------- derivations

@dataclass(frozen=True, eq=False)
class Term:
    op: str          # "seed", "ext", "conj" or "mul"
    args: tuple
    value: Mat


def seed(a: Mat, index: int = 0) -> Term:
    return Term("seed", (index,), a)


def t_ext(t: Term, n: int) -> Term:
    return Term("ext", (t, n), mat_ext(t.value, n))


def t_conj(t: Term, s: Perm) -> Term:
    return Term("conj", (t, s), mat_conj(t.value, s))


def t_mul(t: Term, u: Term) -> Term:
    return Term("mul", (t, u), mat_mul(t.value, u.value))


def derivation_log(term: Term) -> list[dict]:
    """Flatten a term into steps; each step refers to earlier steps by position."""
    log: list[dict] = []
    pos: dict[int, int] = {}

    def visit(t: Term) -> int:
        if id(t) in pos:
            return pos[id(t)]
        if t.op == "seed":
            entry = {"op": "seed", "index": t.args[0]}
        elif t.op == "ext":
            entry = {"op": "ext", "of": visit(t.args[0]), "n": t.args[1]}
        elif t.op == "conj":
            entry = {"op": "conj", "of": visit(t.args[0]), "perm": list(t.args[1].images)}
        else:
            left = visit(t.args[0])
            entry = {"op": "mul", "left": left, "right": visit(t.args[1])}
        log.append(entry)
        pos[id(t)] = len(log) - 1
        return pos[id(t)]

    visit(term)
    return log


def replay(log: Sequence[dict], seeds: Sequence[Mat]) -> Mat:
    """Evaluate a derivation log; the result is the value of its last step."""
    vals: list[Mat] = []
    for k, e in enumerate(log):
        op = e.get("op")
        try:
            if op == "seed":
                vals.append(seeds[e["index"]])
            elif op == "ext":
                vals.append(mat_ext(vals[e["of"]], e["n"]))
            elif op == "conj":
                vals.append(mat_conj(vals[e["of"]], Perm(tuple(e["perm"]))))
            elif op == "mul":
                vals.append(mat_mul(vals[e["left"]], vals[e["right"]]))
            else:
                raise InputError(f"unknown derivation step {op!r}", f"/{k}")
        except (KeyError, IndexError, TypeError):
            raise InputError("malformed derivation step", f"/{k}") from None
    if not vals:
        raise InputError("empty derivation log")
    return vals[-1]


# ------------------------------------------------------------- implementations

class Mode(enum.Enum):
    ZERO_IMPL = "ZERO_IMPL"   # auxiliary counters start at zero and stay zero
    ANY_IMPL = "ANY_IMPL"     # auxiliary counters may hold anything


class OpKind(enum.Enum):
    FLIP = "FLIP"
    SWAP = "SWAP"
    RESET = "RESET"


@dataclass(frozen=True, eq=False)
class ImplWitness:
    kind: OpKind
    mode: Mode
    m: int
    X: tuple[int, ...]
    terms: dict[tuple[int, ...], Term]
    seed: Mat

    def __post_init__(self):
        if len(set(self.X)) != len(self.X) or any(not 0 <= x < self.m for x in self.X):
            raise ConstructionBug(f"bad counter set {self.X} for dimension {self.m}")
        if any(t.value.dim != self.m for t in self.terms.values()):
            raise ConstructionBug("family matrix of the wrong dimension")

    @property
    def family(self) -> dict[tuple[int, ...], Mat]:
        return {k: t.value for k, t in self.terms.items()}

    def relabel_front(self) -> ImplWitness:
        """Rename counters so that X becomes 0..n-1, keeping the rest in order."""
        tau = Perm.from_mapping(self.m, {x: i for i, x in enumerate(self.X)})
        terms = {tuple(tau(i) for i in key): t_conj(t, tau) for key, t in self.terms.items()}
        return ImplWitness(self.kind, self.mode, self.m, tuple(range(len(self.X))), terms, self.seed)


def _first_entry(a: Mat, pred) -> tuple[int, int] | None:
    for i, r in enumerate(a.rows):
        for j, x in enumerate(r):
            if pred(i, j, x):
                return i, j
    return None


def flip_family(a: Mat, n: int) -> ImplWitness:
    """Matrices negating any one counter of X = {d, ..., d+n-1} and fixing the others."""
    if n < 1:
        raise PreconditionError("need at least one counter to flip")
    at = _first_entry(a, lambda i, j, x: x == -1)
    if at is None:
        raise PreconditionError("the seed has no entry equal to -1")
    if is_pseudo_transfer(a):
        mode = Mode.ZERO_IMPL
    elif is_pseudo_copy(a):
        mode = Mode.ANY_IMPL
    else:
        raise UnsupportedSeed("flip construction needs a pseudo-transfer or pseudo-copy seed")
    row, col = at
    d = a.dim
    m = d + n + 2
    X = tuple(range(d, d + n))
    y, z = d + n, d + n + 1
    big = t_ext(seed(a), n + 2)
    terms = {}
    if row == col:
        for x in X:
            terms[(x,)] = t_conj(big, Perm.transposition(m, row, x))
    else:
        def move(s, t):
            # sends the -1 at (row, col) to (t, s): column s now feeds -1 into row t
            return t_conj(big, Perm.transposition(m, row, t).compose(Perm.transposition(m, col, s)))
        for x in X:
            terms[(x,)] = t_mul(move(z, x), t_mul(move(y, z), move(x, y)))
    return ImplWitness(OpKind.FLIP, mode, m, X, terms, a)


def swap_family(a: Mat, n: int) -> ImplWitness:
    """Matrices exchanging any ordered pair of counters of X and fixing the others."""
    if n < 2:
        raise PreconditionError("swapping needs at least two counters")
    if any(x not in (0, 1) for r in a.rows for x in r):
        raise UnsupportedSeed("swap construction needs a seed with entries in {0, 1}")
    at = _first_entry(a, lambda i, j, x: x == 1 and i != j)
    if at is None:
        raise PreconditionError("the seed has no off-diagonal 1")
    if is_transfer(a):
        mode = Mode.ZERO_IMPL
    elif is_copy(a):
        mode = Mode.ANY_IMPL
    else:
        raise UnsupportedSeed("swap construction needs a transfer or copy seed")
    row, col = at
    d = a.dim
    m = d + n + 1
    X = tuple(range(d, d + n))
    z = d + n
    big = t_ext(seed(a), n + 1)

    def move(s, t):
        # moves the value of counter s into counter t
        return t_conj(big, Perm.transposition(m, col, s).compose(Perm.transposition(m, row, t)))

    terms = {}
    for x in X:
        for w in X:
            if x != w:
                terms[(x, w)] = t_mul(move(z, x), t_mul(move(x, w), move(w, z)))
    return ImplWitness(OpKind.SWAP, mode, m, X, terms, a)


def reset_family(a: Mat, n: int) -> ImplWitness:
    """Matrices zeroing any one counter of X and fixing the others."""
    if n < 1:
        raise PreconditionError("need at least one counter to reset")
    if not (is_transfer(a) or is_copy(a)):
        raise UnsupportedSeed("reset construction needs a transfer or copy seed")
    d = a.dim
    zero_col = next((j for j in range(d) if not any(a.column(j))), None)
    zero_row = next((i for i in range(d) if not any(a.rows[i])), None)
    if zero_col is not None:
        mode, idx = Mode.ZERO_IMPL, zero_col
    elif zero_row is not None:
        mode, idx = Mode.ANY_IMPL, zero_row
    else:
        raise PreconditionError("the seed has neither a zero row nor a zero column")
    m = d + n
    X = tuple(range(d, d + n))
    big = t_ext(seed(a), n)
    terms = {(x,): t_conj(big, Perm.transposition(m, x, idx)) for x in X}
    return ImplWitness(OpKind.RESET, mode, m, X, terms, a)


@dataclass
class VerifyReport:
    kind: OpKind
    trials: int
    members: int
    checks: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


_MAX_REPORTED = 10


def verify_impl(w: ImplWitness, kind: OpKind | None = None, trials: int = 1000, seed: int = 0) -> VerifyReport:
    """Check items (b) the operation, (c) the rest of X is kept, (d) the result stays admissible.

    Vectors are drawn from [-100, 100] on X, and also on the auxiliary counters
    in ANY_IMPL mode. Products run in int64 when the magnitudes provably fit.
    """
    kind = w.kind if kind is None else kind
    if trials < 1:
        raise InputError("trials must be positive")
    rng = np.random.default_rng(seed)
    X = list(w.X)
    inside = np.zeros(w.m, dtype=bool)
    inside[X] = True
    samples = rng.integers(-100, 101, size=(w.m, trials), dtype=np.int64)
    if w.mode is Mode.ZERO_IMPL:
        samples[~inside] = 0
    report = VerifyReport(kind, trials, len(w.terms))
    for key, t in w.terms.items():
        mat = t.value
        bound = w.m * max(1, max(abs(x) for r in mat.rows for x in r)) * 100
        dtype = np.int64 if bound < 2**62 else object
        res = np.array(mat.rows, dtype=dtype) @ samples.astype(dtype)
        if kind is OpKind.FLIP:
            wanted = {key[0]: -samples[key[0]]}
        elif kind is OpKind.SWAP:
            wanted = {key[0]: samples[key[1]], key[1]: samples[key[0]]}
        else:
            wanted = {key[0]: np.zeros(trials, dtype=np.int64)}
        checks = [("b", i, expect) for i, expect in wanted.items()]
        checks += [("c", u, samples[u]) for u in X if u not in key]
        if w.mode is Mode.ZERO_IMPL:
            checks += [("d", j, np.zeros(trials, dtype=np.int64)) for j in range(w.m) if not inside[j]]
        for item, idx, expect in checks:
            report.checks += trials
            bad = np.nonzero(res[idx] != expect)[0]
            if len(bad) and len(report.failures) < _MAX_REPORTED:
                col = int(bad[0])
                report.failures.append({
                    "member": list(key), "item": item, "counter": idx,
                    "vector": [int(x) for x in samples[:, col]],
                    "result": [int(x) for x in res[:, col]],
                })
    return report


# ------------------------------------------------------- sign and norm witnesses

def _align_perm(d: int, i: int, j: int) -> tuple[Perm, int]:
    """Renaming for ext(A, d)·conj(ext(A, d), s) to pick up A[i][j]² in row i.

    Returns the renaming and the column where A[i][j]² lands (i+d, or i when
    j = i). Any other column k of row i keeps its value A[i][k].
    """
    images = list(range(2 * d))
    for ell in range(d):
        if ell not in (i, j):
            images[ell], images[ell + d] = ell + d, ell
    if j != i:
        images[j], images[i], images[i + d] = i, i + d, j
    # the product reads the renamed copy as C[x][y] = B[s(x)][s(y)], hence the inverse
    return Perm(tuple(images)).inverse(), (i + d if j != i else i)


def _align_row(t: Term, i: int, j: int) -> tuple[Term, int]:
    s, col = _align_perm(t.value.dim, i, j)
    big = t_ext(t, t.value.dim)
    return t_mul(big, t_conj(big, s)), col


class Orientation(enum.Enum):
    ROW = "ROW"
    COLUMN = "COLUMN"


def _same_sign_pair(line: Sequence[int]) -> tuple[int, int] | None:
    nz = [j for j, x in enumerate(line) if x]
    for p in range(len(nz)):
        for q in range(p + 1, len(nz)):
            if (line[nz[p]] > 0) == (line[nz[q]] > 0):
                return nz[p], nz[q]
    return None


def same_sign_term(t: Term, orientation: Orientation) -> tuple[Term, int, tuple[int, int]]:
    """A class matrix with a row (or column) holding two nonzero entries of equal sign.

    Returns the term, the row (or column) index and the two positions.
    """
    a = t.value
    lines = a.rows if orientation is Orientation.ROW else a.transpose().rows
    for i, line in enumerate(lines):
        pair = _same_sign_pair(line)
        if pair:
            return t, i, pair
    crowded = next((i for i, line in enumerate(lines) if sum(1 for x in line if x) >= 2), None)
    if crowded is None:
        raise PreconditionError(f"no {orientation.value.lower()} with two nonzero entries")
    line = lines[crowded]
    neg = next(j for j, x in enumerate(line) if x < 0)
    pos = next(j for j, x in enumerate(line) if x > 0)
    if orientation is Orientation.ROW:
        out, col = _align_row(t, crowded, neg)
    else:
        # the row construction on the transpose, transposed back
        s, col = _align_perm(a.dim, crowded, neg)
        big = t_ext(t, a.dim)
        out = t_mul(t_conj(big, s), big)
    return out, crowded, (pos, col)


def same_sign(a: Mat, orientation: Orientation = Orientation.ROW) -> Mat:
    return same_sign_term(seed(a), orientation)[0].value


def norm2_term(row_t: Term, col_t: Term) -> tuple[Term, tuple[int, int], int]:
    """Combine a same-sign row and a same-sign column into an entry of absolute value ≥ 2.

    Returns the product term, the entry position and its value.
    """
    a, b = row_t.value, col_t.value
    found = next(((i, p) for i, r in enumerate(a.rows) if (p := _same_sign_pair(r))), None)
    if found is None:
        raise PreconditionError("first matrix has no row with two same-sign entries")
    i, (j, k) = found
    found = next(((c, p) for c, col in enumerate(b.transpose().rows) if (p := _same_sign_pair(col))), None)
    if found is None:
        raise PreconditionError("second matrix has no column with two same-sign entries")
    col_b, (jb, kb) = found
    d = max(a.dim, b.dim)
    a_t = t_ext(row_t, d - a.dim)
    tau = Perm.from_mapping(d, {jb: j, kb: k})
    b_t = t_conj(t_ext(col_t, d - b.dim), tau)
    ic = tau(col_b)
    images = list(range(2 * d))
    for ell in range(d):
        if ell not in (j, k):
            images[ell], images[ell + d] = ell + d, ell
    s = Perm(tuple(images))
    prod = t_mul(t_ext(a_t, d), t_conj(t_ext(b_t, d), s))
    target = ic if ic in (j, k) else ic + d
    value = a[i, j] * b[jb, col_b] + a[i, k] * b[kb, col_b]
    if prod.value[i, target] != value:
        raise ConstructionBug("norm-2 product landed a different value than predicted")
    return prod, (i, target), value


def norm2_witness(row_a: Mat, col_b: Mat) -> Mat:
    return norm2_term(seed(row_a, 0), seed(col_b, 1))[0].value


# ------------------------------------------------------------------- doubling

@dataclass(frozen=True)
class MacroStep:
    """One factor of the doubling product and the coordinates it reads and writes."""

    matrix: Mat
    read: int
    write: int
    noise: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class GammaCtx:
    c_matrix: Mat
    dim: int
    term: Term | None = None
    pivot: int = 0
    steps: tuple[MacroStep, ...] = ()
    depth: int = 12

    def __post_init__(self):
        if self.c_matrix.dim != self.dim:
            raise ConstructionBug("doubling matrix dimension mismatch")
        lam = lambda_seq(self, self.depth + 1)
        if any(lam[n + 1] < 2 * lam[n] for n in range(self.depth + 1)):
            raise ConstructionBug(f"matrix does not double: λ = {lam}")


DOUBLING_DEPTH = 12


def _pivot(a: Mat) -> tuple[int, int, int] | None:
    best = None
    for i, j, x in a.entries():
        if abs(x) >= 2 and (best is None or abs(x) > abs(best[2])):
            best = (i, j, x)
    return best


def _choose_m(c: int, d: int) -> int:
    m = 2
    while (3 * c) ** m < 8 * c * d * 4 ** m:
        m += 2
    return m


def doubling_matrix(a: Mat, depth: int = DOUBLING_DEPTH) -> GammaCtx:
    """A class matrix C whose λ_n = (C^n e_0)[0] at least doubles at every step.

    The largest-magnitude entry c is made positive (by squaring if needed) and
    used as a gain: each factor of the product reads one coordinate, multiplies
    it by c into the next read coordinate, and dumps the rest of the seed's
    action on fresh noise counters. With enough factors the gain dominates.
    """
    t = seed(a)
    if _pivot(a) is None:
        raise PreconditionError("the seed has no entry of absolute value at least 2")
    if a.dim == 1:
        if a[0, 0] < 0:
            t = t_mul(t, t)
        return GammaCtx(t.value, 1, t, t.value[0, 0], (), depth)
    for _ in range(4):
        i, j, c = _pivot(t.value)
        if c > 0:
            break
        t, _ = _align_row(t, i, j)
    else:
        raise ConstructionBug("could not make the pivot positive")
    d = t.value.dim
    diagonal = i == j
    m = _choose_m(c, d if diagonal else d + 1)
    for _ in range(4):
        ctx = _build_doubling(t, i, j, c, m, depth)
        if ctx is not None:
            return ctx
        m += 2
    raise ConstructionBug("doubling product failed its internal bounds")


def _build_doubling(t: Term, row: int, col: int, c: int, m: int, depth: int) -> GammaCtx | None:
    d = t.value.dim
    diagonal = row == col
    others = [k for k in range(d) if k not in (row, col)]
    spares = 0 if diagonal else m - 1
    dim = 1 + spares + m * len(others)
    reads = [0] * (m + 1) if diagonal else [0] + list(range(1, m)) + [0]
    noise_base = 1 + spares
    big = t_ext(t, dim - d)
    factors, steps = [], []
    for s in range(m):
        mapping = {col: reads[s], row: reads[s + 1]}
        for n_idx, k in enumerate(others):
            mapping[k] = noise_base + s * len(others) + n_idx
        factor = t_conj(big, Perm.from_mapping(dim, mapping))
        noise = tuple(mapping[k] for k in range(d) if k != row)
        factors.append(factor)
        steps.append(MacroStep(factor.value, reads[s], reads[s + 1], noise))
    prod = factors[0]
    for f in factors[1:]:
        prod = t_mul(f, prod)
    if not _macro_bounds_hold(steps, c, dim, depth):
        return None
    return GammaCtx(prod.value, dim, prod, c, tuple(steps), depth)


def macro_trace(steps: Sequence[MacroStep], dim: int, applications: int):
    """Yield (step, vector before, vector after) through repeated applications, from e_0."""
    v = tuple(int(k == 0) for k in range(dim))
    for _ in range(applications):
        for st in steps:
            w = st.matrix.apply(v)
            yield st, v, w
            v = w


def _macro_bounds_hold(steps: Sequence[MacroStep], c: int, dim: int, depth: int) -> bool:
    for st, v, w in macro_trace(steps, dim, depth + 1):
        x = v[st.read]
        if x <= 0 or not 3 * c * x <= 4 * w[st.write] <= 5 * c * x:
            return False
        if any(abs(w[q]) > 2 * c * x for q in st.noise):
            return False
    return True


def lambda_seq(ctx: GammaCtx, upto: int) -> list[int]:
    """[λ_0, ..., λ_upto] with λ_n = (C^n e_0)[0]."""
    v = tuple(int(k == 0) for k in range(ctx.dim))
    out = [v[0]]
    for _ in range(upto):
        v = ctx.c_matrix.apply(v)
        out.append(v[0])
    return out


def gamma(ctx: GammaCtx, x: str) -> int:
    """First coordinate of f_x(e_0), where f_b(v) = C·v + b·e_0 is applied bit by bit."""
    if any(ch not in "01" for ch in x):
        raise InputError(f"{x!r} is not a bitstring")
    v = tuple(int(k == 0) for k in range(ctx.dim))
    for ch in x:
        v = ctx.c_matrix.apply(v)
        if ch == "1":
            v = (v[0] + 1,) + v[1:]
    lam = lambda_seq(ctx, len(x))
    closed = lam[len(x)] + sum(lam[len(x) - i] for i, ch in enumerate(x, 1) if ch == "1")
    if v[0] != closed:
        raise ConstructionBug(f"iterated value {v[0]} differs from the closed form {closed} on {x!r}")
    return v[0]
