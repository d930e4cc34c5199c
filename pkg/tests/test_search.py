import random
from collections import deque

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avass.acceptance import random_vass
from avass.errors import InputError
from avass.fixtures import lba_zoo
from avass.machines import Lba, MinskyMachine, MinskyOp, Move, PcpInstance
from avass.model import Config, Semantics, VassBuilder, run, step
from avass.search import bounded_reach, lba_accepts, minsky_run, pcp_match_search, reachable_configs

Z, N = Semantics.Z, Semantics.N


def naive_distance(v, src, tgt, sem, bound, steps):
    """Plain BFS through model.step; the length of a shortest bounded run or None."""
    lo = 0 if sem is N else -bound
    seen, queue = {src}, deque([(src, 0)])
    while queue:
        c, n = queue.popleft()
        if c == tgt:
            return n
        if n == steps:
            continue
        for k in range(len(v.transitions)):
            nxt = step(v, c, k, sem)
            if nxt is not None and all(lo <= x <= bound for x in nxt.vals) and nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, n + 1))
    return None


class TestBoundedReach:
    def test_doubling_example(self, doubler):
        r = bounded_reach(doubler, doubler.config("p", (3, 1)), doubler.config("r", (4, 0)), Z, 64)
        assert r.outcome == "REACHED" and len(r.witness) == 6
        assert [doubler.transitions[k].name for k in r.witness] == ["s", "t", "u", "t", "u", "t"]

    def test_same_config(self, doubler):
        c = doubler.config("q", (5, -2))
        r = bounded_reach(doubler, c, c, Z, 64)
        assert r.reached and r.witness == ()

    def test_negative_target_under_n(self, doubler):
        for bound in (3, 5, 64):
            r = bounded_reach(doubler, doubler.config("p", (3, 0)), doubler.config("q", (1, -1)), N, bound)
            assert r.outcome == "NOT_FOUND_WITHIN_BOUNDS"

    def test_endpoint_beyond_bound(self, doubler):
        with pytest.raises(InputError):
            bounded_reach(doubler, doubler.config("p", (100, 0)), doubler.config("r", (0, 0)), Z, 64)

    def test_dimension_mismatch(self, doubler):
        with pytest.raises(InputError):
            bounded_reach(doubler, Config(0, (1, 2, 3)), doubler.config("r", (0, 0)), Z, 64)

    def test_step_bound(self, doubler):
        src, tgt = doubler.config("p", (3, 1)), doubler.config("r", (4, 0))
        assert not bounded_reach(doubler, src, tgt, Z, 64, 5).reached
        assert bounded_reach(doubler, src, tgt, Z, 64, 6).reached

    def test_counter_bound(self):
        b = VassBuilder(1)
        b.add("p", "q", vec=(5,))
        b.add("q", "r", vec=(-5,))
        v = b.build()
        src, tgt = v.config("p", (0,)), v.config("r", (0,))
        assert not bounded_reach(v, src, tgt, Z, 4).reached
        assert bounded_reach(v, src, tgt, Z, 5).reached

    def test_deterministic(self, doubler):
        src, tgt = doubler.config("p", (0, 1)), doubler.config("r", (4, 0))
        assert bounded_reach(doubler, src, tgt, Z, 9) == bounded_reach(doubler, src, tgt, Z, 9)

    def test_unwritten_counter_mismatch(self):
        b = VassBuilder(2)
        b.add("p", "p", vec=(1, 0))
        v = b.build()
        r = bounded_reach(v, v.config("p", (0, 0)), v.config("p", (3, 1)), Z, 8)
        assert not r.reached and r.explored <= 1

    def test_reachable_configs(self, doubler):
        got = set(reachable_configs(doubler, doubler.config("p", (1, 1)), N, 2))
        assert got == {doubler.config("p", (1, 1)), doubler.config("q", (1, 0)), doubler.config("r", (1, 0)),
                       doubler.config("q", (1, 1)), doubler.config("r", (2, 0)), doubler.config("q", (2, 2))}


@st.composite
def small_queries(draw):
    rng = random.Random(draw(st.integers(0, 10**6)))
    d = draw(st.integers(1, 2))
    v = random_vass(rng, d, draw(st.integers(1, 3)), draw(st.integers(1, 4)), lambda a: True)
    sem = draw(st.sampled_from([Z, N]))
    lo = 0 if sem is N else -2
    vals = st.tuples(*[st.integers(lo, 2)] * d)
    src = Config(draw(st.integers(0, len(v.states) - 1)), draw(vals))
    tgt = Config(draw(st.integers(0, len(v.states) - 1)), draw(vals))
    return v, src, tgt, sem


@given(small_queries(), st.integers(2, 4), st.integers(0, 8))
def test_matches_naive_search(q, bound, steps):
    v, src, tgt, sem = q
    r = bounded_reach(v, src, tgt, sem, bound, steps)
    expected = naive_distance(v, src, tgt, sem, bound, steps)
    assert r.reached == (expected is not None)
    if r.reached:
        assert len(r.witness) == expected
        assert run(v, src, r.witness, sem) == tgt


@given(small_queries(), st.integers(2, 3), st.integers(0, 6))
def test_monotone_in_bounds(q, bound, steps):
    v, src, tgt, sem = q
    if bounded_reach(v, src, tgt, sem, bound, steps).reached:
        assert bounded_reach(v, src, tgt, sem, bound + 1, steps).reached
        assert bounded_reach(v, src, tgt, sem, bound, steps + 2).reached


class TestSimulators:
    def test_accepting_lba(self):
        assert lba_accepts(lba_zoo()["accept_now"], "0")

    def test_looping_lba(self):
        assert not lba_accepts(lba_zoo()["ping_pong"], "01")

    def test_head_falls_off(self):
        m = Lba(("s", "acc"), {("s", 0): ("s", 0, Move.RIGHT), ("s", 1): ("s", 1, Move.RIGHT),
                               ("acc", 0): ("acc", 0, Move.RIGHT), ("acc", 1): ("acc", 1, Move.RIGHT)}, "s", "acc")
        assert not lba_accepts(m, "000")

    @pytest.mark.parametrize("name, table", [
        ("seek_one", {"0": False, "1": False, "00": False, "01": True, "10": False, "11": False}),
        ("second_zero", {"0": False, "1": False, "00": True, "01": False, "10": True, "11": False}),
        ("toggle_back", {"0": False, "1": False, "00": False, "01": True, "10": False, "11": True}),
    ])
    def test_fixture_tables(self, name, table):
        assert {w: lba_accepts(lba_zoo()[name], w) for w in table} == table

    def test_lba_needs_a_cell(self):
        with pytest.raises(InputError):
            lba_accepts(lba_zoo()["accept_now"], "")

    def test_minsky_zero_tests(self):
        mm = MinskyMachine(("p", "r"), (("p", MinskyOp("zero", "x"), "r"),), "p", "r")
        assert minsky_run(mm, ("p", 0, 3), ("r", 0, 3))
        assert not minsky_run(mm, ("p", 1, 0), ("r", 1, 0))

    def test_minsky_transfer(self):
        mm = MinskyMachine(("p", "q", "r"), (("p", MinskyOp("add", "x", -1), "q"),
                                             ("q", MinskyOp("add", "y", 1), "p"),
                                             ("p", MinskyOp("zero", "x"), "r")), "p", "r")
        assert minsky_run(mm, ("p", 3, 0), ("r", 0, 3))
        assert not minsky_run(mm, ("p", 3, 0), ("r", 0, 2))

    def test_pcp(self):
        assert pcp_match_search(PcpInstance((("1", "1"),)), 4) == (0,)
        assert pcp_match_search(PcpInstance((("0", "1"),)), 6) is None
        p = PcpInstance((("11", "1"), ("1", "111")))
        match = pcp_match_search(p, 6)
        assert match is not None
        assert "".join(p.tiles[i][0] for i in match) == "".join(p.tiles[i][1] for i in match)
        assert pcp_match_search(p, len(match) - 1) is None
