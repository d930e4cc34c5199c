"""The acceptance suite: nine end-to-end checks, each with a time limit.

Each check returns (passed, detail). ``run_all`` times them, prints one line
per criterion and returns the outcomes; ``avass selftest`` and
tests/test_acceptance.py both go through it.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable

from .classify import (Dichotomy, Trichotomy, dichotomy, is_copy, is_permutation, is_pseudo_copy,
                       is_pseudo_reset, is_pseudo_transfer, is_reset, is_transfer, monoid_enumerate, trichotomy)
from .emulate import (OpKind, doubling_matrix, flip_family, lambda_seq, reset_family, swap_family, verify_impl)
from .errors import CapExceeded
from .fixtures import (doubler_vass, doubler_word, lba_zoo, matrix_zoo, minsky_zoo, pcp_zoo,
                       permutation_vass_zoo)
from .model import AffineVass, Config, Mat, Semantics, VassBuilder, mat_norm, run, step
from .polygadget import (Defer, Polynomial, alters_inputs, build_phi, build_poly, decode_value, encode_word,
                         evenness, phi_query, poly_oracle, poly_witness, reduce_language, reduce_query)
from .reduce import (compile_lba, compile_minsky, compile_pcp, cover_to_reach, decode_tiles, mirror,
                     perm_reach)
from .search import bounded_reach, lba_accepts, minsky_run, pcp_match_search, reachable_configs

Z, N = Semantics.Z, Semantics.N


@dataclass
class Outcome:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    detail: str


# ------------------------------------------------------------------ criterion 1

def doubling_example() -> tuple[bool, str]:
    v = doubler_vass()
    first = run(v, v.config("p", (3, 1)), ["s", "t", "u", "t", "u", "t"], Z) == v.config("r", (4, 0))
    sweep = all(run(v, v.config("p", (x, 1)), doubler_word(k), Z) == v.config("r", (2**k, 0))
                for x in range(-2, 3) for k in range(1, 7))
    return first and sweep, "p(3,1) -> r(4,0); p(x,1) -> r(2^k,0) for x in -2..2, k in 1..6"


# ------------------------------------------------------------------ criterion 2

def _witness_ok(gens: list[Mat], w: dict) -> bool:
    if w["kind"] == "large_entry":
        i, j = w["entry"]
        return abs(gens[w["generator"]][i, j]) >= 2 and gens[w["generator"]][i, j] == w["value"]
    row = gens[w["row_generator"]].rows[w["row"]]
    col = gens[w["column_generator"]].column(w["column"])
    return (len(w["cols"]) == 2 and all(row[j] for j in w["cols"])
            and len(w["rows"]) == 2 and all(col[i] for i in w["rows"]))


def classification_zoo() -> tuple[bool, str]:
    preds = {"reset": is_reset, "pseudo_reset": is_pseudo_reset, "transfer": is_transfer,
             "pseudo_transfer": is_pseudo_transfer, "copy": is_copy, "pseudo_copy": is_pseudo_copy,
             "permutation": is_permutation}
    zoo = matrix_zoo()
    wrong = [name for name, a, flags in zoo if any(preds[k](a) != flags[k] for k in preds)]
    m = lambda *rows: Mat(rows)  # noqa: E731
    transfer_o, copy_u = m((1, 1), (0, 0)), m((1, 0), (1, 0))
    cases = [
        ([m((1,))], Trichotomy.NP_RESET),
        ([m((1, 0), (0, 1))], Trichotomy.NP_RESET),
        ([transfer_o], Trichotomy.PSPACE_PSEUDO_TRANSFER),
        ([copy_u], Trichotomy.PSPACE_PSEUDO_COPY),
        ([m((2,))], Trichotomy.UNDECIDABLE),
        ([m((1, 1), (1, 0))], Trichotomy.UNDECIDABLE),
        ([transfer_o, copy_u], Trichotomy.UNDECIDABLE),
        ([m((-1, 1), (0, 0)), m((1, 0), (-1, 0))], Trichotomy.UNDECIDABLE),
    ]
    for gens, want in cases:
        got = trichotomy(gens)
        if got.bucket is not want or (want is Trichotomy.UNDECIDABLE and not _witness_ok(gens, got.witness)):
            wrong.append(f"trichotomy{[g.tolist() for g in gens]}")
    perms = [[m((0, 1), (1, 0))], [m((0, 0, 1), (1, 0, 0), (0, 1, 0)), m((1, 0, 0), (0, 0, 1), (0, 1, 0))]]
    for gens in perms:
        if dichotomy(gens).bucket is not Dichotomy.DECIDABLE_PERMUTATION:
            wrong.append(f"dichotomy{[g.tolist() for g in gens]}")
    for gens in ([transfer_o], [m((0, 1), (1, 0)), copy_u]):
        if dichotomy(gens).bucket is not Dichotomy.UNDECIDABLE:
            wrong.append(f"dichotomy{[g.tolist() for g in gens]}")
    return not wrong, f"{len(zoo)} zoo matrices, {len(cases) + 4} verdicts" + (f"; wrong: {wrong}" if wrong else "")


# ------------------------------------------------------------------ criterion 3

FLIP_SEEDS = [Mat(((-1,),)), Mat(((0, -1), (1, 0))), Mat(((-1, 1), (0, 0))),
              Mat(((-1, 0), (-1, 0))), Mat(((-1, 0), (1, 0))), Mat(((0, -1), (0, -1)))]
SWAP_SEEDS = [Mat(((0, 1), (1, 0))), Mat(((1, 1), (0, 0))), Mat(((1, 0), (1, 0))), Mat(((0, 1), (0, 0))),
              Mat(((0, 0, 1), (1, 0, 0), (0, 1, 0)))]
RESET_SEEDS = [Mat(((0,),)), Mat(((1, 1), (0, 0))), Mat(((1, 0), (1, 0))), Mat(((1, 0), (0, 0))),
               Mat(((0, 1), (0, 0))), Mat(((0, 0, 1), (1, 0, 0), (0, 0, 0)))]


def emulation_suites(trials: int = 1000, seed: int = 0) -> tuple[bool, str]:
    failures, runs = [], 0
    for kind, builder, seeds, sizes in ((OpKind.FLIP, flip_family, FLIP_SEEDS, range(1, 9)),
                                       (OpKind.SWAP, swap_family, SWAP_SEEDS, range(2, 9)),
                                       (OpKind.RESET, reset_family, RESET_SEEDS, range(1, 9))):
        for a in seeds:
            for n in sizes:
                rep = verify_impl(builder(a, n), kind, trials, seed)
                runs += 1
                if not rep.passed:
                    failures.append((kind.value, a.tolist(), n, rep.failures[0]))
    return not failures, f"{runs} families, {trials} vectors per member" + (f"; first failure {failures[0]}"
                                                                             if failures else "")


# ------------------------------------------------------------------ criterion 4

DOUBLING_SEEDS = [Mat(((2,),)), Mat(((-2,),)), Mat(((0, 2), (1, 0))), Mat(((0, -3), (1, 0))),
                  Mat(((1, 0, 1), (0, 2, 0), (1, 0, 0)))]


def doubling(depth: int = 12) -> tuple[bool, str]:
    bad = []
    for a in DOUBLING_SEEDS:
        ctx = doubling_matrix(a, depth)
        lam = lambda_seq(ctx, depth + 1)
        if any(lam[n + 1] < 2 * lam[n] for n in range(depth + 1)):
            bad.append((a.tolist(), "lambda"))
        if a.dim < 2:
            continue
        # re-run the macro-steps from e_0 and check the gain and noise bounds at each one
        c = ctx.pivot
        prod = Mat.identity(ctx.dim)
        for st in ctx.steps:
            prod = st.matrix @ prod
        if prod != ctx.c_matrix:
            bad.append((a.tolist(), "product"))
        vec = tuple(int(k == 0) for k in range(ctx.dim))
        for _ in range(depth + 1):
            for st in ctx.steps:
                new = st.matrix.apply(vec)
                x = vec[st.read]
                if not (3 * c * x <= 4 * new[st.write] <= 5 * c * x
                        and all(abs(new[q]) <= 2 * c * x for q in st.noise)):
                    bad.append((a.tolist(), "macro-step"))
                vec = new
    return not bad, f"{len(DOUBLING_SEEDS)} seeds, n <= {depth}" + (f"; failing {bad[:3]}" if bad else "")


# ------------------------------------------------------------------ criterion 5

def gamma_encoding(max_len: int = 8) -> tuple[bool, str]:
    words = [""] + ["".join(p) for n in range(1, max_len + 1) for p in itertools.product("01", repeat=n)]
    problems = []
    for a in DOUBLING_SEEDS:
        ctx = doubling_matrix(a)
        lam = lambda_seq(ctx, max_len)
        values = {}
        for x in words:
            vec = tuple(int(k == 0) for k in range(ctx.dim))
            for ch in x:
                vec = ctx.c_matrix.apply(vec)
                vec = (vec[0] + int(ch),) + vec[1:]
            closed = lam[len(x)] + sum(lam[len(x) - i] for i, ch in enumerate(x, 1) if ch == "1")
            if vec[0] != closed:
                problems.append((a.tolist(), x, "closed form"))
            values[x] = vec[0]
        if len(set(values.values())) != len(values):
            problems.append((a.tolist(), "not injective"))
        for n in range(1, max_len + 1):
            same = [values[x] for x in words if len(x) == n]   # words are in lexicographic order
            if any(p >= q for p, q in zip(same, same[1:])):
                problems.append((a.tolist(), n, "not monotone"))
    return not problems, f"{len(words)} words, {len(DOUBLING_SEEDS)} seeds" + (
        f"; {problems[:3]}" if problems else "")


# ------------------------------------------------------------------ criterion 6

LBA_FLIP_SEEDS = {"native": None, "pseudo-transfer": Mat(((0, -1), (1, 0))),
                  "pseudo-copy": Mat(((-1, 0), (-1, 0)))}
PCP_DOUBLING_SEED = Mat(((2,),))
MINSKY_SEEDS = [Mat(((-1,),)), Mat(((0, -1), (1, 0))), Mat(((1, 0), (-1, 0)))]


def reductions(bound: int = 64, steps: int = 100_000, max_word: int = 3) -> tuple[bool, str]:
    disagree, counts = [], {}
    lbas = lba_zoo()
    for name, m in lbas.items():
        for n in range(1, max_word + 1):
            for w in map("".join, itertools.product("01", repeat=n)):
                truth = lba_accepts(m, w)
                for mode, sd in LBA_FLIP_SEEDS.items():
                    inst = compile_lba(m, w, sd)
                    got = bounded_reach(inst.vass, inst.source, inst.target, inst.semantics, bound, steps).reached
                    counts["lba"] = counts.get("lba", 0) + 1
                    if got != truth:
                        disagree.append(("lba", name, w, mode))
    ctx = doubling_matrix(PCP_DOUBLING_SEED)
    for name, p in pcp_zoo().items():
        match = pcp_match_search(p, 6)
        for sem in (Z, N):
            inst = compile_pcp(p, ctx, sem)
            r = bounded_reach(inst.vass, inst.source, inst.target, sem, bound, steps)
            counts["pcp"] = counts.get("pcp", 0) + 1
            if r.reached != (match is not None):
                disagree.append(("pcp", name, sem.value))
            elif r.reached and pcp_match_search(p, len(decode_tiles(inst.vass, r.witness))) is None:
                disagree.append(("pcp-decode", name, sem.value))
    for name, mm in minsky_zoo().items():
        truth = minsky_run(mm, (mm.init, 0, 0), (mm.final, 0, 0), steps)
        for sd in MINSKY_SEEDS:
            inst = compile_minsky(mm, sd)
            counts["minsky"] = counts.get("minsky", 0) + 1
            if bounded_reach(inst.vass, inst.source, inst.target, N, bound, steps).reached != truth:
                disagree.append(("minsky", name, sd.tolist()))

    def oracle(v, s, t):
        return bounded_reach(v, s, t, N, bound, steps).reached

    for name, v in permutation_vass_zoo().items():
        grid = [Config(p, vals) for p in range(len(v.states)) for vals in itertools.product(range(3), repeat=v.d)]
        for s in grid:
            for t in grid:
                counts["perm"] = counts.get("perm", 0) + 1
                if perm_reach(v, s, t, oracle) != oracle(v, s, t):
                    disagree.append(("perm", name, v.format_config(s), v.format_config(t)))
    summary = ", ".join(f"{k} {n}" for k, n in counts.items())
    return not disagree, summary + (f"; disagreements {disagree[:3]}" if disagree else "")


# ------------------------------------------------------------------ criterion 7

POLYS = {"y1": Polynomial(1, ((1, (1,)),)),
         "y1-y2": Polynomial(2, ((1, (1, 0)), (-1, (0, 1)))),
         "y1*y2-4": Polynomial(2, ((1, (1, 1)), (-4, (0, 0))))}


def random_walk(v: AffineVass, c: Config, sem: Semantics, rng: random.Random, length: int) -> Config:
    for _ in range(length):
        moves = [k for k in v.outgoing[c.state] if step(v, c, k, sem) is not None]
        if not moves:
            break
        c = step(v, c, rng.choice(moves), sem)
    return c


def _peak(v, src, word, sem) -> int:
    top, c = max(map(abs, src.vals), default=0), src
    for k in word:
        c = step(v, c, k, sem)
        top = max(top, max(map(abs, c.vals)))
    return top


def poly_queries(pv, sem, rng, count, magnitude=6):
    """Random queries on an evaluator: half with random targets, half reached by a random walk."""
    v = pv.vass
    lo = -magnitude if sem is Z else 0
    for n in range(count):
        a = rng.randrange(len(pv.chain))
        src = Config(v.state_id(pv.chain[a]), tuple(rng.randint(lo, magnitude) for _ in range(v.d)))
        if n % 2:
            tgt = random_walk(v, src, sem, rng, rng.randint(0, 15))
            if max(map(abs, tgt.vals)) > magnitude:
                tgt = Config(tgt.state, tuple(max(lo, min(magnitude, x)) for x in tgt.vals))
        else:
            b = rng.randrange(a, len(pv.chain)) if rng.random() < 0.9 else rng.randrange(len(pv.chain))
            tail = tuple(rng.randint(lo, magnitude) for _ in range(v.d - pv.k))
            tgt = Config(v.state_id(pv.chain[b]), src.vals[:pv.k] + tail)
        yield src, tgt


def oracle_vs_search(pv, src, tgt, sem, floor: int = 6) -> bool:
    """Does poly_oracle agree with bounded search, with the bound sized to fit the oracle's own run?"""
    ans = poly_oracle(pv, src, tgt)
    bound = max(floor, max(map(abs, src.vals + tgt.vals)))
    if ans:
        bound = max(bound, _peak(pv.vass, src, poly_witness(pv, src, tgt), sem))
    return bounded_reach(pv.vass, src, tgt, sem, bound).reached == ans


def lower_part(pv) -> AffineVass:
    """The φ-VASS without the upper gadget (states a and b_i)."""
    v = pv.vass
    keep = [s for s in v.states if s in ("p", "q") or s.startswith("low.")]
    b = VassBuilder(v.d)
    for s in keep:
        b.state(s)
    for t in v.transitions:
        if v.states[t.src] in keep and v.states[t.tgt] in keep:
            b.add(v.states[t.src], v.states[t.tgt], t.mat, t.vec, t.name)
    return b.build()


def phi_shapes(pv, rng, per_pair: int = 1):
    """A query for every ordered pair of states (values in {-1,0,1}, or {0,1} under N)."""
    v = pv.vass
    lo = -1 if pv.sem is Z else 0
    for s1 in v.states:
        for s2 in v.states:
            for n in range(per_pair):
                src = v.config(s1, tuple(rng.randint(lo, 1) for _ in range(v.d)))
                tgt = v.config(s2, tuple(rng.randint(lo, 1) for _ in range(v.d)))
                yield src, tgt
                walked = random_walk(v, src, pv.sem, rng, rng.randint(1, 8))
                if max(map(abs, walked.vals)) <= 1:
                    yield src, walked


def phi_vs_search(pv, src, tgt) -> bool | None:
    """Agreement of phi_query with bounded search on a non-deferred query (None if deferred)."""
    ans = phi_query(pv, src, tgt)
    if isinstance(ans, Defer):
        return None
    got = bounded_reach(pv.vass, src, tgt, pv.sem, 1, 60).reached
    if ans and not got:
        # the run may need values beyond 1; it never visits the upper gadget from the lower part
        got = bounded_reach(pv.vass, src, tgt, pv.sem, 4, 60).reached
    return got == ans


def polynomial_gadgets(queries: int = 10_000, seed: int = 0) -> tuple[bool, str]:
    """``queries`` random evaluator queries for every (polynomial, semantics) pair."""
    rng = random.Random(seed)
    problems, asked = [], 0
    pairs = [(p, sem) for p in POLYS.values() for sem in (Z, N)]
    for poly, sem in pairs:
        pv = build_poly(poly, sem)
        if alters_inputs(pv):
            problems.append(("alters inputs", poly))
        for src, tgt in poly_queries(pv, sem, rng, queries):
            asked += 1
            if not oracle_vs_search(pv, src, tgt, sem):
                problems.append(("poly", pv.vass.format_config(src), pv.vass.format_config(tgt)))
    shapes = 0
    for sem in (N, Z):
        phi = build_phi(evenness(), sem)
        for src, tgt in phi_shapes(phi, rng):
            ok = phi_vs_search(phi, src, tgt)
            shapes += ok is not None
            if ok is False:
                problems.append(("phi", phi.vass.format_config(src), phi.vass.format_config(tgt)))
        lower = lower_part(phi)
        for w in [""] + ["".join(p) for k in range(1, 7) for p in itertools.product("01", repeat=k)]:
            x = encode_word(w, sem)
            src, tgt = reduce_language(w, phi)
            if decode_value(x, sem) != w or phi_query(phi, src, tgt) != Defer(x):
                problems.append(("encode", w))
            even = reduce_query(phi, src, tgt, lambda u: encode_word(u, sem) % 2 == 0)
            if even != (x % 2 == 0):
                problems.append(("round trip", w, sem.value))
            if abs(x) <= 8:
                r = bounded_reach(lower, lower.config("p", src.vals), lower.config("q", tgt.vals), sem, 2 * abs(x) + 2)
                if r.reached != even:
                    problems.append(("deferred vs search", w, sem.value))
    detail = f"{asked} evaluator queries ({queries} per pair), {shapes} φ queries, words up to length 6"
    return not problems, detail + (f"; {problems[:3]}" if problems else "")


# ------------------------------------------------------------------ criterion 8

def pseudo_transfer_all(k: int) -> list[Mat]:
    cols = [tuple(s if r == i else 0 for r in range(k)) for i in range(k) for s in (1, -1)] + [(0,) * k]
    return [Mat(tuple(zip(*choice))) for choice in itertools.product(cols, repeat=k)]


def monoid_bound(cap: int = 10_000) -> tuple[bool, str]:
    rng = random.Random(0)
    ok, sizes = True, []
    for k in (2, 3):
        everything = pseudo_transfer_all(k)
        gen_sets = [everything] + [rng.sample(everything, 3) for _ in range(5)]
        for gens in gen_sets:
            closure = monoid_enumerate(gens, cap)
            sizes.append(len(closure))
            ok &= len(closure) <= (2 * k + 1) ** k and all(mat_norm(a) <= 1 for a in closure)
        ok &= sizes[-6] == (2 * k + 1) ** k
    try:
        monoid_enumerate([Mat(((2,),))], cap)
        ok = False
    except CapExceeded:
        pass
    return ok, f"closure sizes {sizes}; {{[[2]]}} exceeds cap {cap}"


# ------------------------------------------------------------------ criterion 9

def random_vass(rng: random.Random, d: int, states: int, transitions: int, shape: Callable[[Mat], bool]) -> AffineVass:
    b = VassBuilder(d)
    names = [f"s{i}" for i in range(states)]
    for s in names:
        b.state(s)
    while len(b.transitions) < transitions:
        a = Mat(tuple(tuple(rng.choice((-1, 0, 0, 1)) for _ in range(d)) for _ in range(d)))
        if not shape(a):
            continue
        vec = tuple(rng.choice((-1, 0, 1)) for _ in range(d))
        b.add(rng.choice(names), rng.choice(names), a, vec)
    return b.build()


def cover_transform(bound: int = 3, steps: int = 6, seed: int = 0) -> tuple[bool, str]:
    rng = random.Random(seed)
    shapes = [is_pseudo_transfer, is_pseudo_copy, lambda a: True]
    problems, queries = [], 0
    for n, shape in enumerate(shapes):
        v = random_vass(rng, 2, 2, 4, shape)
        w = cover_to_reach(v)
        before = trichotomy([t.mat for t in v.transitions]).bucket
        after = trichotomy([t.mat for t in w.transitions]).bucket
        if before != after:
            problems.append(("class", n))
        grid = [Config(p, vals) for p in range(len(v.states))
                for vals in itertools.product(range(-1, 2), repeat=v.d)]
        for s in grid:
            plain = set(reachable_configs(v, s, Z, bound, steps))
            doubled = set(reachable_configs(w, mirror(s), Z, bound, steps))
            for t in grid:
                queries += 1
                if (t in plain) != (mirror(t) in doubled):
                    problems.append(("reach", n, v.format_config(s), v.format_config(t)))
            if {mirror(c) for c in plain} != doubled:
                problems.append(("reach sets", n, v.format_config(s)))
    return not problems, f"3 VASS, {queries} queries" + (f"; {problems[:3]}" if problems else "")


CRITERIA: list[tuple[int, str, float, Callable[[], tuple[bool, str]]]] = [
    (1, "doubling example replay", 1, doubling_example),
    (2, "classification zoo", 1, classification_zoo),
    (3, "flip/swap/reset families", 30, emulation_suites),
    (4, "doubling matrices", 30, doubling),
    (5, "gamma encoding", 5, gamma_encoding),
    (6, "reduction equivalences", 300, reductions),
    (7, "polynomial gadgets", 180, polynomial_gadgets),
    (8, "monoid bound", 10, monoid_bound),
    (9, "coverability transform", 30, cover_transform),
]


def run_one(number: int, echo: bool = True) -> Outcome:
    _, title, limit, check = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        passed, detail = check()
    except Exception as e:  # a crash is a failed criterion, reported like any other
        passed, detail = False, f"raised {type(e).__name__}: {e}"
    seconds = time.perf_counter() - start
    if seconds >= limit:
        passed, detail = False, f"{detail}; too slow"
    out = Outcome(number, title, passed, seconds, limit, detail)
    if echo:
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}  "
              f"({seconds:.2f}s, limit {limit:g}s)  {detail}", flush=True)
    return out


def run_all(only: set[int] | None = None, echo: bool = True) -> list[Outcome]:
    return [run_one(n, echo) for n, *_ in CRITERIA if only is None or n in only]
