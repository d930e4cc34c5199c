"""Weak polynomial evaluation with affine VASS, and the φ-VASS built on top of it.

The evaluator has a linear chain of control states from ``p`` to ``q``. Each
monomial c·y_1^{d_1}···y_k^{d_k} gets a stretch of that chain: a_0 is set to |c|,
then for every factor y_v a station copies y_v into a scratch counter and runs
loops that move one unit of the copy into the accumulator at a time, each unit
adding the previous accumulator. Draining the copy to zero multiplies. A final
stretch adds up the monomial outputs into one counter, positives first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import InputError
from .model import AffineVass, Config, Mat, Semantics, Transition, VassBuilder, unit


@dataclass(frozen=True)
class Polynomial:
    k: int
    monomials: tuple[tuple[int, tuple[int, ...]], ...]

    def __post_init__(self):
        monos = tuple((int(c), tuple(int(e) for e in exps)) for c, exps in self.monomials)
        if self.k < 1:
            raise InputError("a polynomial needs at least one variable")
        for n, (c, exps) in enumerate(monos):
            if c == 0:
                raise InputError("zero coefficient", f"/monomials/{n}/coef")
            if len(exps) != self.k or any(e < 0 for e in exps):
                raise InputError(f"exponents must be {self.k} nonnegative integers", f"/monomials/{n}/exps")
        object.__setattr__(self, "monomials", monos)

    def __call__(self, xs: Sequence[int]) -> int:
        total = 0
        for c, exps in self.monomials:
            term = c
            for x, e in zip(xs, exps):
                term *= x ** e
            total += term
        return total


@dataclass(frozen=True)
class Station:
    state: str
    var: int
    copy: int      # scratch counter receiving y_var
    acc: int       # accumulator updated by the loops
    prev: int      # accumulator read by the loops
    dec: int       # transition id: copy - 1, acc += prev
    inc: int       # transition id: copy + 1, acc -= prev


@dataclass(frozen=True)
class MonomialLayout:
    coef: int
    exps: tuple[int, ...]
    a0: int
    stations: tuple[Station, ...]
    out: int


@dataclass(frozen=True, eq=False)
class PolyVass:
    vass: AffineVass
    p_state: str
    q_state: str
    poly: Polynomial
    sem: Semantics
    monomials: tuple[MonomialLayout, ...]
    total: int                   # counter holding Σ positive − Σ negative
    chain: tuple[str, ...]       # control states from p to q in order
    forward: tuple[int, ...]     # transition id leaving chain[i] towards chain[i+1]

    @property
    def k(self) -> int:
        return self.poly.k


def build_poly(poly: Polynomial, sem: Semantics = Semantics.Z, order: str = "canonical") -> PolyVass:
    """Evaluator with p(x, 0) →* q(x, 0) iff poly(x) = 0.

    ``order="reversed"`` sums the negative monomials first; under N that order
    can block, which is why the canonical one puts positives first.
    """
    if order not in ("canonical", "reversed"):
        raise InputError(f"unknown monomial order {order!r}")
    k = poly.k
    monos = sorted(poly.monomials, key=lambda m: m[0] < 0)
    if order == "reversed":
        monos = sorted(poly.monomials, key=lambda m: m[0] > 0)
    # counter layout
    counter = k
    plans = []
    for c, exps in monos:
        a0 = counter
        counter += 1
        slots = []
        for var, e in enumerate(exps):
            for _ in range(e):
                slots.append((var, counter, counter + 1))
                counter += 2
        plans.append((c, exps, a0, slots, counter))
        counter += 1
    total = counter
    dim = counter + 1

    def rows_with(changes: dict[int, dict[int, int]]) -> Mat:
        rows = []
        for i in range(dim):
            if i in changes:
                rows.append(tuple(changes[i].get(j, 0) for j in range(dim)))
            else:
                rows.append(tuple(int(i == j) for j in range(dim)))
        return Mat(tuple(rows))

    b = VassBuilder(dim)
    chain, forward = ["p"], []
    b.state("p")

    def advance(tgt: str, mat: Mat | None = None, vec=None, name: str = "") -> None:
        forward.append(b.add(chain[-1], tgt, mat=mat, vec=vec, name=name))
        chain.append(tgt)

    layouts = []
    for n, (c, exps, a0, slots, out) in enumerate(plans):
        advance(f"m{n}.set", rows_with({a0: {}}), unit(dim, a0, abs(c)), f"m{n}.set")
        stations = []
        prev = a0
        for s, (var, copy, acc) in enumerate(slots):
            st = f"m{n}.st{s}"
            advance(st, rows_with({copy: {var: 1}}), None, f"m{n}.copy{s}")
            dec = b.add(st, st, rows_with({acc: {acc: 1, prev: 1}}), unit(dim, copy, -1), f"m{n}.dec{s}")
            inc = b.add(st, st, rows_with({acc: {acc: 1, prev: -1}}), unit(dim, copy, 1), f"m{n}.inc{s}")
            stations.append(Station(st, var, copy, acc, prev, dec, inc))
            prev = acc
        resets = {a0: {}, out: {prev: 1}}
        resets.update({acc: {} for _, _, acc in slots})
        advance(f"m{n}.done", rows_with(resets), None, f"m{n}.done")
        layouts.append(MonomialLayout(c, exps, a0, tuple(stations), out))
    for n, lay in enumerate(layouts):
        sign = 1 if lay.coef > 0 else -1
        tgt = "q" if n == len(layouts) - 1 else f"sum{n}"
        advance(tgt, rows_with({total: {total: 1, lay.out: sign}, lay.out: {}}), None, f"sum{n}")
    if not layouts:
        advance("q", None, None, "zero")
    v = b.build()
    return PolyVass(v, "p", "q", poly, sem, tuple(layouts), total, tuple(chain), tuple(forward))


def alters_inputs(pv: PolyVass) -> list[int]:
    """Ids of transitions that write to one of the input counters (expected: none)."""
    bad = []
    for n, t in enumerate(pv.vass.transitions):
        for i in range(pv.k):
            if t.vec[i] or any(x != (i == j) for j, x in enumerate(t.mat.rows[i])):
                bad.append(n)
                break
    return bad


def _walk(pv: PolyVass, src: Config, tgt: Config, sem: Semantics, record: list[int] | None) -> bool:
    v = pv.vass
    for c in (src, tgt):
        v.check_config(c)
    if src == tgt:
        return True
    if any(a != b for a, b in zip(src.vals[:pv.k], tgt.vals[:pv.k])):
        return False
    if sem is Semantics.N and any(x < 0 for x in src.vals + tgt.vals):
        return False
    pos = {v.state_id(s): n for n, s in enumerate(pv.chain)}
    start, stop = pos[src.state], pos[tgt.state]
    if stop < start:
        return False
    stations = {v.state_id(st.state): st for lay in pv.monomials for st in lay.stations}
    vals = list(src.vals)
    for n in range(start, stop + 1):
        here = v.state_id(pv.chain[n])
        st = stations.get(here)
        if st is not None:
            times = vals[st.copy] - tgt.vals[st.copy]
            vals[st.acc] += times * vals[st.prev]
            vals[st.copy] = tgt.vals[st.copy]
            if sem is Semantics.N and vals[st.acc] < 0:
                return False
            if record is not None:
                record.extend([st.dec if times > 0 else st.inc] * abs(times))
        if n == stop:
            break
        t: Transition = v.transitions[pv.forward[n]]
        vals = [x + b for x, b in zip(t.mat.apply(vals), t.vec)]
        if sem is Semantics.N and any(x < 0 for x in vals):
            return False
        if record is not None:
            record.append(pv.forward[n])
    return tuple(vals) == tgt.vals


def poly_oracle(pv: PolyVass, src: Config, tgt: Config, sem: Semantics | None = None) -> bool:
    """Decide src →* tgt in the evaluator without stepping loops one unit at a time.

    The control graph is a path, and a station's two loops only ever change its
    copy counter by ±1 and its accumulator by ±prev. So the net loop count is
    fixed by the copy's value on leaving the station, which nothing later
    touches; the rest is a forward replay. Under N the loops run monotonically
    in one direction, so checking both ends of each station suffices.
    """
    return _walk(pv, src, tgt, pv.sem if sem is None else sem, None)


def poly_witness(pv: PolyVass, src: Config, tgt: Config, sem: Semantics | None = None) -> list[int] | None:
    """A run from src to tgt (the one the oracle reasons about), or None."""
    word: list[int] = []
    return word if _walk(pv, src, tgt, pv.sem if sem is None else sem, word) else None


# --------------------------------------------------------------------- φ-VASS

@dataclass(frozen=True)
class Defer:
    """The query p(x, u) →* q(0) needs the membership oracle on x."""

    x: int


@dataclass(frozen=True, eq=False)
class PhiVass:
    vass: AffineVass
    poly: PolyVass
    sem: Semantics
    lower: dict[str, str]   # evaluator state name -> name in this VASS

    @property
    def k(self) -> int:
        return self.poly.k

    @property
    def m(self) -> int:
        return self.vass.d


def build_phi(poly: Polynomial, sem: Semantics = Semantics.Z) -> PhiVass:
    """p(x, u) →* q(0) iff poly(x, y) = 0 for some y, and every other query is easy.

    Lower part: p sets y_2..y_k freely, clears the scratch counters, runs the
    evaluator, then clears the inputs. Upper part (through a, b_i) reaches
    exactly the nonzero vectors at q.
    """
    pv = build_poly(poly, sem)
    k, m = poly.k, pv.vass.d
    b = VassBuilder(m)
    b.state("p")
    lower = {s: f"low.{s}" for s in pv.vass.states}
    for i in range(1, k):
        b.add("p", "p", vec=unit(m, i), name=f"y{i}+")
        b.add("p", "p", vec=unit(m, i, -1), name=f"y{i}-")
    clear_rest = Mat.diag([1] * k + [0] * (m - k))
    clear_inputs = Mat.diag([0] * k + [1] * (m - k))
    b.add("p", lower[pv.p_state], mat=clear_rest, name="enter")
    for t in pv.vass.transitions:
        b.add(lower[pv.vass.states[t.src]], lower[pv.vass.states[t.tgt]], t.mat, t.vec, f"low.{t.name}")
    b.add(lower[pv.q_state], "q", mat=clear_inputs, name="leave")
    b.add("p", "a", name="up")
    for i in range(m):
        b.add("a", "a", vec=unit(m, i), name=f"c{i}+")
        b.add("a", "a", vec=unit(m, i, -1), name=f"c{i}-")
    for i in range(m):
        set_one = Mat.diag([0 if j == i else 1 for j in range(m)])
        b.add("a", f"b{i}", mat=set_one, vec=unit(m, i), name=f"set{i}")
        b.add(f"b{i}", f"b{i}", vec=unit(m, i), name=f"grow{i}")
        b.add(f"b{i}", "q", name=f"out{i}")
        if sem is Semantics.Z:
            b.add(f"b{i}", "q", mat=Mat.diag([-1 if j == i else 1 for j in range(m)]), name=f"negate{i}")
    return PhiVass(b.build(), pv, sem, lower)


def _role(pv: PhiVass, state: str) -> tuple[str, int]:
    if state in ("p", "a", "q"):
        return state, -1
    if state.startswith("low."):
        return "low", -1
    return "b", int(state[1:])


def phi_query(pv: PhiVass, src: Config, tgt: Config) -> bool | Defer:
    """Answer src →* tgt directly, except for p(x, u) →* q(0), which is deferred."""
    v = pv.vass
    v.check_config(src)
    v.check_config(tgt)
    k, m = pv.k, pv.m
    u, w = src.vals, tgt.vals
    r, ri = _role(pv, v.states[src.state])
    r2, ri2 = _role(pv, v.states[tgt.state])
    if pv.sem is Semantics.N and any(x < 0 for x in u + w):
        return False
    if r == "p" and r2 == "q" and not any(w):
        return Defer(u[0])
    if src == tgt:
        return True

    def same_except(skip) -> bool:
        return all(u[i] == w[i] for i in range(m) if i not in skip)

    inner = pv.poly
    to_inner = {name: inner.vass.state_id(s) for s, name in pv.lower.items()}
    if r == "p":
        if r2 == "p":
            return same_except(set(range(1, k)))
        if r2 == "low":
            entry = Config(inner.vass.state_id(inner.p_state), w[:k] + (0,) * (m - k))
            return u[0] == w[0] and poly_oracle(inner, entry, Config(to_inner[v.states[tgt.state]], w))
        if r2 == "a":
            return True
        if r2 == "b":
            return w[ri2] >= 1
        return True  # r2 == "q" with a nonzero target
    if r == "low":
        here = Config(to_inner[v.states[src.state]], u)
        if r2 == "low":
            return poly_oracle(inner, here, Config(to_inner[v.states[tgt.state]], w))
        if r2 == "q":
            exit_ = Config(inner.vass.state_id(inner.q_state), u[:k] + w[k:])
            return not any(w[:k]) and poly_oracle(inner, here, exit_)
        return False
    if r == "a":
        if r2 == "a":
            return True
        if r2 == "b":
            return w[ri2] >= 1
        if r2 == "q":
            return any(w)
        return False
    if r == "b":
        if r2 == "b" and ri2 == ri:
            return same_except({ri}) and w[ri] >= u[ri]
        if r2 == "q":
            if pv.sem is Semantics.Z:
                return same_except({ri}) and abs(w[ri]) >= max(u[ri], 0)
            return same_except({ri}) and w[ri] >= u[ri]
        return False
    return False


# ----------------------------------------------------------- language wrappers

def encode_word(w: str, sem: Semantics) -> int:
    """Bijection from bitstrings onto N (resp. Z)."""
    if any(ch not in "01" for ch in w):
        raise InputError(f"{w!r} is not a bitstring")
    if sem is Semantics.N:
        return int("1" + w, 2) - 1
    if not w:
        return 0
    magnitude = int("1" + w[:-1], 2)
    return -magnitude if w[-1] == "1" else magnitude


def decode_value(x: int, sem: Semantics) -> str:
    if sem is Semantics.N:
        if x < 0:
            raise InputError(f"{x} is not a natural number")
        return bin(x + 1)[3:]
    if x == 0:
        return ""
    return bin(abs(x))[3:] + ("1" if x < 0 else "0")


def reduce_language(w: str, pv: PhiVass) -> tuple[Config, Config]:
    v = pv.vass
    start = (encode_word(w, pv.sem),) + (0,) * (v.d - 1)
    return v.config("p", start), v.config("q", (0,) * v.d)


def reduce_query(pv: PhiVass, src: Config, tgt: Config, membership: Callable[[str], bool]) -> bool:
    ans = phi_query(pv, src, tgt)
    if isinstance(ans, Defer):
        return membership(decode_value(ans.x, pv.sem))
    return ans


def evenness() -> Polynomial:
    """y1 - 2·y2: has a root in y2 exactly when y1 is even."""
    return Polynomial(2, ((1, (1, 0)), (-2, (0, 1))))
