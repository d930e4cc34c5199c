import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avass.classify import is_pseudo_transfer
from avass.emulate import GammaCtx, doubling_matrix
from avass.errors import CapExceeded, InputError, PreconditionError
from avass.fixtures import lba_zoo, minsky_zoo, pcp_zoo, permutation_vass_zoo
from avass.machines import Lba, MinskyMachine, MinskyOp, Move, PcpInstance
from avass.model import AffineVass, Config, Mat, Semantics, VassBuilder, run
from avass.reduce import (compile_lba, compile_minsky, compile_pcp, cover_to_reach, decode_tiles, minsky_config,
                          mirror, perm_expand, perm_queries, perm_reach, project_run)
from avass.search import bounded_reach, lba_accepts, minsky_run, pcp_match_search, reachable_configs

from conftest import transfer_like

Z, N = Semantics.Z, Semantics.N
R = Move.RIGHT
LBA_SEEDS = [None, Mat(((0, -1), (1, 0))), Mat(((-1, 0), (-1, 0)))]


def reach(inst, bound=64, steps=100_000):
    return bounded_reach(inst.vass, inst.source, inst.target, inst.semantics, bound, steps)


def words(max_len):
    for n in range(1, max_len + 1):
        yield from map("".join, itertools.product("01", repeat=n))


class TestLba:
    accept_now = Lba(("a",), {("a", 0): ("a", 0, R), ("a", 1): ("a", 1, R)}, "a", "a")
    never = Lba(("a", "acc"), {("a", 0): ("a", 0, R), ("a", 1): ("a", 1, R),
                                ("acc", 0): ("acc", 0, R), ("acc", 1): ("acc", 1, R)}, "a", "acc")

    def test_immediate_accept(self):
        assert lba_accepts(self.accept_now, "0")
        assert reach(compile_lba(self.accept_now, "0")).reached

    def test_unreachable_accept(self):
        for w in ("0", "01", "110"):
            assert not lba_accepts(self.never, w)
            assert not reach(compile_lba(self.never, w), bound=12).reached

    def test_encoding_of_the_input(self):
        inst = compile_lba(self.accept_now, "01")
        assert inst.source.vals == (1, 1, 1, -1)
        assert inst.target.vals == (0, 0, 0, 0)
        assert inst.semantics is Z
        assert inst.counter_roles == {0: "x0", 1: "y0", 2: "x1", 3: "y1"}

    @pytest.mark.parametrize("seed", LBA_SEEDS, ids=["native", "pseudo-transfer", "pseudo-copy"])
    def test_zoo_agrees_with_simulator(self, seed):
        for name, m in lba_zoo().items():
            for w in words(2):
                assert reach(compile_lba(m, w, seed), bound=8, steps=10_000).reached == lba_accepts(m, w), (name, w)

    def test_emulated_flips_add_auxiliary_counters(self):
        inst = compile_lba(self.accept_now, "0", Mat(((-1, 0), (-1, 0))))
        assert inst.vass.d > 2
        assert any(t.name.startswith("aux") for t in inst.vass.transitions)
        assert set(inst.counter_roles.values()) >= {"x0", "y0", "aux"}

    def test_bad_seed(self):
        with pytest.raises(PreconditionError):
            compile_lba(self.accept_now, "0", Mat(((1, 1), (0, 0))))

    @pytest.mark.parametrize("name", ["ping_pong", "toggle_back", "seek_one"])
    def test_gap_never_negative(self, name):
        m = lba_zoo()[name]
        for w in words(2):
            inst = compile_lba(m, w)
            for c in reachable_configs(inst.vass, inst.source, Z, counter_bound=6, step_bound=30):
                pairs = [(abs(c.vals[2 * j]), abs(c.vals[2 * j + 1])) for j in range(len(w))]
                if inst.vass.states[c.state].startswith("q["):
                    assert all(x >= y for x, y in pairs)
                    if all(x == y for x, y in pairs):
                        assert all(y > 0 for _, y in pairs)

    def test_wrong_guess_can_zero_a_cell(self):
        # reading 1 from a cell holding 0 (y = 1) drives y to zero and opens a gap of two
        inst = compile_lba(lba_zoo()["second_zero"], "00")
        c = run(inst.vass, inst.source, ["visit[s,0:1]", "read[s,0:1]"], Z)
        assert c is not None and c.vals == (2, 0, 1, 1)

    def test_wrong_branch_misses_target(self):
        m = lba_zoo()["second_zero"]
        assert lba_accepts(m, "00")
        inst = compile_lba(m, "00")
        v = inst.vass
        # the first cell holds 0 but the run guesses 1: the gap on cell 0 can never close
        bad = run(v, inst.source, ["visit[s,0:1]", "read[s,0:1]", "write[s,0:1]"], Z)
        assert bad is not None
        assert not bounded_reach(v, bad, inst.target, Z, 12, 10_000).reached
        good = run(v, inst.source, ["visit[s,0:0]", "read[s,0:0]", "write[s,0:0]"], Z)
        assert bounded_reach(v, good, inst.target, Z, 12, 10_000).reached


class TestPcp:
    ctx = doubling_matrix(Mat(((2,),)))

    def test_identical_tile(self):
        inst = compile_pcp(PcpInstance((("1", "1"),)), self.ctx)
        r = reach(inst)
        assert r.reached and decode_tiles(inst.vass, r.witness) == (0,)

    def test_hopeless_tile(self):
        p = PcpInstance((("0", "1"),))
        assert pcp_match_search(p, 6) is None
        assert not reach(compile_pcp(p, self.ctx), bound=16).reached

    def test_nontrivial_match(self):
        p = pcp_zoo()["three_tiles"]
        match = pcp_match_search(p, 6)
        assert match is not None and len(match) >= 3
        inst = compile_pcp(p, self.ctx)
        r = reach(inst)
        assert r.reached
        tiles = decode_tiles(inst.vass, r.witness)
        top = "".join(p.tiles[i][0] for i in tiles)
        assert top == "".join(p.tiles[i][1] for i in tiles)
        assert len(tiles) == len(match)

    @pytest.mark.parametrize("sem", [Z, N])
    def test_zoo(self, sem):
        for name, p in pcp_zoo().items():
            assert reach(compile_pcp(p, self.ctx, sem), bound=64).reached == (pcp_match_search(p, 6) is not None), name

    def test_shape(self):
        inst = compile_pcp(PcpInstance((("10", "1"),)), self.ctx)
        assert inst.vass.d == 2
        assert inst.source == inst.vass.config("p", (1, 1))
        assert inst.target == inst.vass.config("r", (1, 1))

    def test_negative_doubling_matrix_under_n(self):
        ctx = GammaCtx(Mat(((2, 0), (0, -1))), 2)
        with pytest.raises(PreconditionError):
            compile_pcp(PcpInstance((("1", "1"),)), ctx, N)


def machine(*transitions, init="p", final="r"):
    states = sorted({s for p, _, q in transitions for s in (p, q)} | {init, final})
    return MinskyMachine(tuple(states), tuple((p, MinskyOp(*op), q) for p, op, q in transitions), init, final)


class TestMinsky:
    seed = Mat(((-1,),))

    def test_zero_test_blocks(self):
        mm = machine(("p", ("add", "x", 2), "q"), ("q", ("zero", "x"), "r"))
        assert not minsky_run(mm, ("p", 0, 0), ("r", 0, 0))
        assert not reach(compile_minsky(mm, self.seed), bound=10).reached

    def test_zero_test_passes(self):
        mm = machine(("p", ("zero", "x"), "r"))
        assert reach(compile_minsky(mm, self.seed)).reached

    def test_add_zero_is_a_plain_edge(self):
        mm = machine(("p", ("add", "y", 0), "r"))
        inst = compile_minsky(mm, self.seed)
        t = inst.vass.transitions[0]
        assert t.mat.is_identity() and not any(t.vec)
        assert reach(inst).reached

    @pytest.mark.parametrize("seed", [Mat(((-1,),)), Mat(((0, -1), (1, 0))), Mat(((1, 0), (-1, 0)))], ids=str)
    def test_zoo_agrees_with_simulator(self, seed):
        for name, mm in minsky_zoo().items():
            truth = minsky_run(mm, (mm.init, 0, 0), (mm.final, 0, 0), 50)
            assert reach(compile_minsky(mm, seed), bound=16, steps=50).reached == truth, name

    def test_embedding_of_counter_values(self):
        mm = minsky_zoo()["transfer"]
        inst = compile_minsky(mm, Mat(((0, -1), (1, 0))))
        for x, y in [(0, 0), (2, 0), (1, 3)]:
            for x2, y2 in [(0, 0), (0, 2), (0, 4)]:
                truth = minsky_run(mm, ("p", x, y), ("r", x2, y2), 50)
                got = bounded_reach(inst.vass, minsky_config(inst, "p", x, y), minsky_config(inst, "r", x2, y2),
                                    N, 16, 50).reached
                assert got == truth, (x, y, x2, y2)

    def test_needs_negative_entry(self):
        with pytest.raises(PreconditionError):
            compile_minsky(machine(("p", ("zero", "x"), "r")), Mat(((1,),)))


def oracle(v, s, t):
    return bounded_reach(v, s, t, N, 8, 10_000).reached


class TestPermutations:
    def test_one_counter_is_a_copy(self):
        b = VassBuilder(1)
        b.add("p", "q", vec=(1,))
        b.add("q", "p", vec=(-1,))
        v = b.build()
        e = perm_expand(v)
        assert len(e.states) == len(v.states) and len(e.transitions) == len(v.transitions)

    def test_state_count(self):
        for v in permutation_vass_zoo().values():
            e = perm_expand(v)
            splits = sum(1 for t in v.transitions if not t.mat.is_identity() and any(t.vec))
            assert len(e.states) == (len(v.states) + splits) * math.factorial(v.d)
            assert all(t.mat.is_identity() for t in e.transitions)

    def test_queries_agree_with_direct_search(self):
        v = permutation_vass_zoo()["swap_inc"]
        for s, t in [("p(1,0)", "p(0,1)"), ("p(0,0)", "p(2,1)"), ("p(1,0)", "p(0,0)")]:
            src, tgt = v.parse_config(s), v.parse_config(t)
            assert perm_reach(v, src, tgt, oracle) == oracle(v, src, tgt)

    def test_query_count(self):
        v = permutation_vass_zoo()["swap_inc"]
        e = perm_expand(v)
        assert len(perm_queries(v, e, v.config("p", (0, 0)), v.config("p", (1, 1)))) == 2

    def test_identity_only_vass_needs_one_query(self):
        b = VassBuilder(2)
        b.add("p", "p", vec=(1, 0))
        v = b.build()
        e = perm_expand(v)
        src, tgt = v.config("p", (0, 0)), v.config("p", (2, 0))
        answers = [oracle(e, s, t) for s, t in perm_queries(v, e, src, tgt)]
        assert answers == [True, False]

    def test_witnesses_project_to_runs(self):
        for v in permutation_vass_zoo().values():
            e = perm_expand(v)
            grid = [Config(p, vals) for p in range(len(v.states)) for vals in itertools.product(range(2), repeat=v.d)]
            for s, t in itertools.product(grid, repeat=2):
                for es, et in perm_queries(v, e, s, t):
                    r = bounded_reach(e, es, et, N, 6, 10_000)
                    if r.reached:
                        assert run(v, s, project_run(e, r.witness), N) == t

    def test_rejects_non_permutation(self):
        b = VassBuilder(2)
        b.add("p", "p", Mat(((1, 1), (0, 0))))
        with pytest.raises(InputError):
            perm_expand(b.build())

    def test_dimension_cap(self):
        b = VassBuilder(7)
        b.add("p", "p")
        with pytest.raises(CapExceeded):
            perm_expand(b.build())

    def test_state_cap_from_environment(self, monkeypatch):
        monkeypatch.setenv("AVASS_MAX_STATES", "3")
        with pytest.raises(CapExceeded):
            perm_expand(permutation_vass_zoo()["rotate3"])


class TestCoverToReach:
    def test_increment(self):
        b = VassBuilder(1)
        b.add("p", "p", vec=(1,))
        t = cover_to_reach(b.build()).transitions[0]
        assert t.vec == (1, -1) and t.mat.is_identity()

    def test_doubler_run_is_mirrored(self, doubler):
        w = cover_to_reach(doubler)
        got = run(w, mirror(doubler.config("p", (3, 1))), ["s", "t", "u", "t", "u", "t"], Z)
        assert got == mirror(doubler.config("r", (4, 0)))

    def test_small_queries(self, doubler):
        w = cover_to_reach(doubler)
        grid = [Config(p, vals) for p in range(3) for vals in itertools.product(range(-1, 2), repeat=2)]
        for s in grid:
            for t in grid:
                direct = bounded_reach(doubler, s, t, Z, 4, 6).reached
                assert bounded_reach(w, mirror(s), mirror(t), Z, 4, 6).reached == direct


@given(st.integers(1, 3).flatmap(lambda d: st.lists(transfer_like(d), min_size=1, max_size=3)))
def test_cover_transform_keeps_pseudo_transfers(mats):
    b = VassBuilder(mats[0].dim)
    for a in mats:
        b.add("p", "p", a)
    assert all(is_pseudo_transfer(t.mat) for t in cover_to_reach(b.build()).transitions)
