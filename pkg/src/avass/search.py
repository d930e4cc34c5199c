"""Ground-truth oracles: bounded breadth-first reachability and direct simulators."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .errors import ConstructionBug, InputError
from .machines import Lba, MinskyMachine, PcpInstance
from .model import AffineVass, Config, Semantics, Transition, run

DEFAULT_COUNTER_BOUND = 64
DEFAULT_STEP_BOUND = 100_000


@dataclass(frozen=True)
class SearchResult:
    reached: bool
    witness: tuple[int, ...] | None
    explored: int
    frontier_peak: int

    @property
    def outcome(self) -> str:
        return "REACHED" if self.reached else "NOT_FOUND_WITHIN_BOUNDS"


def _compile_fire(t: Transition, lo: int, hi: int, check: tuple[int, ...] = (),
                  goal: tuple[int, ...] = ()):
    """A transition's affine map as straight-line Python: vals -> new vals, or None.

    None means the result leaves [lo, hi] in a written coordinate, or differs
    from ``goal`` in one of the ``check`` coordinates.
    """
    d = len(t.vec)
    lines = ["def fire(v):"]
    written = {}
    for i, row in enumerate(t.mat.rows):
        if t.vec[i] or any(a != (i == j) for j, a in enumerate(row)):
            terms = [f"{a}*v[{j}]" if a != 1 else f"v[{j}]" for j, a in enumerate(row) if a]
            if t.vec[i]:
                terms.append(str(t.vec[i]))
            lines.append(f"    n{i} = {' + '.join(terms) or '0'}")
            lines.append(f"    if n{i} < {lo} or n{i} > {hi}: return None")
            written[i] = f"n{i}"
    for i in check:
        lines.append(f"    if {written.get(i, f'v[{i}]')} != {goal[i]}: return None")
    if written:
        lines.append(f"    return ({', '.join(written.get(i, f'v[{i}]') for i in range(d))},)")
    else:
        lines.append("    return v")
    scope: dict = {}
    exec("\n".join(lines), scope)
    return scope["fire"]


def _bounds(sem: Semantics, counter_bound: int) -> tuple[int, int]:
    return (0 if sem is Semantics.N else -counter_bound), counter_bound


def _coreachable_states(v: AffineVass, target: int) -> set[int]:
    back: list[list[int]] = [[] for _ in v.states]
    for t in v.transitions:
        back[t.tgt].append(t.src)
    seen = {target}
    todo = [target]
    while todo:
        for p in back[todo.pop()]:
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def _writes(t: Transition) -> set[int]:
    return {i for i, row in enumerate(t.mat.rows) if t.vec[i] or any(a != (i == j) for j, a in enumerate(row))}


def _frozen_counters(v: AffineVass, useful: set[int]) -> list[frozenset[int]]:
    """For each state, the counters that no transition on a path towards ``useful`` writes."""
    frozen = []
    for p in range(len(v.states)):
        seen, todo, written = {p}, [p], set()
        while todo:
            for k in v.outgoing[todo.pop()]:
                t = v.transitions[k]
                if t.tgt not in useful:
                    continue
                written |= _writes(t)
                if t.tgt not in seen:
                    seen.add(t.tgt)
                    todo.append(t.tgt)
        frozen.append(frozenset(range(v.d)) - written)
    return frozen


def _check_inputs(v: AffineVass, cs: list[Config], sem: Semantics, counter_bound: int, step_bound: int):
    if counter_bound < 0 or step_bound < 0:
        raise InputError("bounds must be nonnegative")
    for c in cs:
        v.check_config(c)
        if any(abs(x) > counter_bound for x in c.vals):
            raise InputError(f"configuration {v.format_config(c)} exceeds the counter bound {counter_bound}")


def bounded_reach(v: AffineVass, source: Config, target: Config, sem: Semantics,
                  counter_bound: int = DEFAULT_COUNTER_BOUND,
                  step_bound: int = DEFAULT_STEP_BOUND) -> SearchResult:
    """Breadth-first search for ``target`` among configurations within the bounds.

    Complete for the bounded space, and the witness is a shortest one. States
    from which the target state is unreachable in the control graph are never
    entered, and neither are configurations where a counter that can no
    longer change differs from the target; neither cut can hide a witness.
    """
    _check_inputs(v, [source, target], sem, counter_bound, step_bound)
    if sem is Semantics.N and any(x < 0 for x in source.vals + target.vals):
        return SearchResult(False, None, 0, 0)
    if source == target:
        return SearchResult(True, (), 1, 1)
    lo, hi = _bounds(sem, counter_bound)
    useful = _coreachable_states(v, target.state)
    frozen = _frozen_counters(v, useful)
    goal_vals = target.vals
    # counters to compare after firing k: newly frozen at its target, or written and frozen there
    recheck = [tuple(sorted((frozen[t.tgt] - frozen[t.src]) | (frozen[t.tgt] & _writes(t))))
               for t in v.transitions]
    moves = [[(k, v.transitions[k].tgt, _compile_fire(v.transitions[k], lo, hi, recheck[k], goal_vals))
              for k in v.outgoing[p] if v.transitions[k].tgt in useful]
             for p in range(len(v.states))]
    if any(source.vals[i] != goal_vals[i] for i in frozen[source.state]):
        return SearchResult(False, None, 1, 1)
    goal = (target.state, target.vals)
    start = (source.state, source.vals)
    parent: dict[tuple, tuple] = {start: None}
    frontier = [start]
    peak = 1
    depth = 0
    while frontier and depth < step_bound:
        depth += 1
        nxt = []
        for node in frontier:
            p, vals = node
            for k, tgt, fire in moves[p]:
                out = fire(vals)
                if out is None:
                    continue
                child = (tgt, out)
                if child in parent:
                    continue
                parent[child] = (node, k)
                if child == goal:
                    return _finish(v, source, target, sem, parent, child, len(parent), max(peak, len(nxt) + 1))
                nxt.append(child)
        frontier = nxt
        peak = max(peak, len(frontier))
    return SearchResult(False, None, len(parent), peak)


def _finish(v, source, target, sem, parent, node, explored, peak) -> SearchResult:
    word = []
    while parent[node] is not None:
        node, k = parent[node]
        word.append(k)
    word.reverse()
    if run(v, source, word, sem) != target:
        raise ConstructionBug("bounded search produced a witness that does not replay")
    return SearchResult(True, tuple(word), explored, peak)


def reachable_configs(v: AffineVass, source: Config, sem: Semantics,
                      counter_bound: int = DEFAULT_COUNTER_BOUND,
                      step_bound: int = DEFAULT_STEP_BOUND) -> Iterator[Config]:
    """Every configuration reachable within the bounds, in breadth-first order."""
    _check_inputs(v, [source], sem, counter_bound, step_bound)
    if sem is Semantics.N and any(x < 0 for x in source.vals):
        return
    lo, hi = _bounds(sem, counter_bound)
    fires = [(t.tgt, _compile_fire(t, lo, hi)) for t in v.transitions]
    start = (source.state, source.vals)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (p, vals), depth = queue.popleft()
        yield Config(p, vals)
        if depth == step_bound:
            continue
        for k in v.outgoing[p]:
            tgt, fire = fires[k]
            out = fire(vals)
            if out is None:
                continue
            child = (tgt, out)
            if child not in seen:
                seen.add(child)
                queue.append((child, depth + 1))


def lba_accepts(m: Lba, w: str) -> bool:
    """Run the deterministic LBA on a |w|-cell tape holding w."""
    if not w:
        raise InputError("the LBA needs at least one tape cell")
    tape = [int(ch) for ch in w]
    state, head = m.init, 0
    seen = set()
    while True:
        if state == m.accept:
            return True
        key = (state, head, tuple(tape))
        if key in seen:
            return False
        seen.add(key)
        state, tape[head], move = m.delta[(state, tape[head])]
        head += move.offset
        if not 0 <= head < len(tape):
            return False


def minsky_run(m: MinskyMachine, source: tuple[str, int, int], target: tuple[str, int, int],
               step_bound: int = DEFAULT_STEP_BOUND) -> bool:
    """Breadth-first search over (state, x, y) with counters in N."""
    if source == target:
        return True
    seen = {source}
    frontier = [source]
    for _ in range(step_bound):
        nxt = []
        for p, x, y in frontier:
            for src, op, q in m.transitions:
                if src != p:
                    continue
                val = x if op.counter == "x" else y
                if op.kind == "zero":
                    if val != 0:
                        continue
                    new = val
                else:
                    new = val + op.value
                    if new < 0:
                        continue
                child = (q, new, y) if op.counter == "x" else (q, x, new)
                if child == target:
                    return True
                if child not in seen:
                    seen.add(child)
                    nxt.append(child)
        if not nxt:
            return False
        frontier = nxt
    return False


def pcp_match_search(p: PcpInstance, max_tiles: int) -> tuple[int, ...] | None:
    """A shortest match with at most ``max_tiles`` tiles, or None.

    The search runs over overhangs: after a sequence of tiles one of the two
    strings must be a prefix of the other, and only the leftover suffix matters.
    """
    parent: dict[tuple[int, str], tuple | None] = {}
    frontier: list[tuple[int, str]] = []

    def extend(over_side, over, i):
        top, bot = p.tiles[i]
        if over_side > 0:
            top = over + top
        elif over_side < 0:
            bot = over + bot
        if top.startswith(bot):
            return (1, top[len(bot):]) if len(top) > len(bot) else (0, "")
        if bot.startswith(top):
            return (-1, bot[len(top):])
        return None

    root = (0, "")
    for level in range(1, max_tiles + 1):
        sources = [root] if level == 1 else frontier
        frontier = []
        for node in sources:
            for i in range(len(p.tiles)):
                child = extend(node[0], node[1], i)
                if child is None:
                    continue
                if child == (0, ""):
                    seq = [i]
                    while node != root:
                        node, j = parent[node]
                        seq.append(j)
                    return tuple(reversed(seq))
                if child not in parent:
                    parent[child] = (node, i)
                    frontier.append(child)
        if not frontier:
            return None
    return None
