import pytest
from hypothesis import given
from hypothesis import strategies as st

from avass.errors import DimensionError, InputError
from avass.fixtures import doubler_word
from avass.model import (AffineVass, Config, Mat, Perm, Semantics, Transition, VassBuilder, mat_conj, mat_ext,
                         mat_mul, mat_norm, run, step)

from conftest import mats, perms

Z, N = Semantics.Z, Semantics.N
O = Mat(((1, 1), (0, 0)))


def M(*rows):
    return Mat(tuple(map(tuple, rows)))


class TestMatrixAlgebra:
    def test_identity_is_neutral(self):
        a = M([3, -1], [0, 2])
        assert mat_mul(Mat.identity(2), a) == a

    def test_scalar_product(self):
        assert mat_mul(M([2]), M([3])) == M([6])

    def test_gathering_product(self):
        left = mat_ext(O, 1)
        right = mat_conj(mat_ext(O, 1), Perm.transposition(3, 1, 2))
        assert mat_mul(left, right) == M([1, 1, 1], [0, 0, 0], [0, 0, 0])

    def test_mul_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_mul(M([1]), Mat.identity(2))

    @pytest.mark.parametrize("a, n, expected", [
        (M([5]), 0, M([5])),
        (O, 1, M([1, 1, 0], [0, 0, 0], [0, 0, 1])),
        (M([2]), 2, M([2, 0, 0], [0, 1, 0], [0, 0, 1])),
    ])
    def test_ext(self, a, n, expected):
        assert mat_ext(a, n) == expected

    def test_conj_by_identity(self):
        a = M([1, 2], [3, 4])
        assert mat_conj(a, Perm.identity(2)) == a

    def test_conj_swaps_last_two(self):
        a = M([1, 1, 0], [0, 0, 0], [0, 0, 1])
        assert mat_conj(a, Perm.transposition(3, 1, 2)) == M([1, 0, 1], [0, 1, 0], [0, 0, 0])

    def test_conj_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            mat_conj(O, Perm.identity(3))

    @pytest.mark.parametrize("a, expected", [(Mat.identity(3), 1), (O, 1), (M([-3, 2], [0, 1]), 3)])
    def test_norm(self, a, expected):
        assert mat_norm(a) == expected

    def test_ragged_matrix_rejected(self):
        with pytest.raises(DimensionError):
            Mat(((1, 2), (3,)))

    def test_bad_permutation_rejected(self):
        with pytest.raises(DimensionError):
            Perm((0, 0, 1))

    def test_big_entries_stay_exact(self):
        a = M([2**40, 0], [0, 1])
        assert mat_mul(a, a)[0, 0] == 2**80


@st.composite
def mat_and_perms(draw, count=2):
    d = draw(st.integers(1, 6))
    return (draw(mats(d)), *[draw(perms(d)) for _ in range(count)])


@given(mat_and_perms())
def test_conj_places_entries(args):
    a, s, _ = args
    r = mat_conj(a, s)
    assert all(r[s(i), s(j)] == a[i, j] for i in range(a.dim) for j in range(a.dim))


@given(mat_and_perms())
def test_conj_is_an_action(args):
    a, s, p = args
    assert mat_conj(mat_conj(a, s), p) == mat_conj(a, p.compose(s))
    assert mat_conj(mat_conj(a, s), s.inverse()) == a


@given(st.integers(1, 5).flatmap(lambda d: st.tuples(mats(d), mats(d), perms(d), st.integers(0, 3))))
def test_operations_respect_products(args):
    a, b, s, n = args
    assert mat_conj(mat_mul(a, b), s) == mat_mul(mat_conj(a, s), mat_conj(b, s))
    assert mat_ext(mat_mul(a, b), n) == mat_mul(mat_ext(a, n), mat_ext(b, n))


@given(mat_and_perms(count=1), st.integers(0, 3))
def test_norm_under_class_operations(args, n):
    a, s = args
    expected = max(mat_norm(a), 1) if n else mat_norm(a)
    assert mat_norm(mat_ext(a, n)) == expected
    assert mat_norm(mat_conj(a, s)) == mat_norm(a)


class TestStep:
    def test_fires_under_z(self, doubler):
        c = doubler.config("p", (3, 1))
        assert step(doubler, c, "s", Z) == doubler.config("q", (1, 0))

    def test_negative_output_blocked_under_n(self, doubler):
        assert step(doubler, doubler.config("p", (3, 0)), "s", N) is None
        assert step(doubler, doubler.config("p", (3, 0)), "s", Z) == doubler.config("q", (1, -1))

    def test_negative_input_blocked_under_n(self, doubler):
        assert step(doubler, doubler.config("q", (-1, 0)), "t", N) is None

    def test_wrong_state_disabled(self, doubler):
        assert step(doubler, doubler.config("q", (3, 1)), "s", Z) is None

    def test_identity_transition(self):
        b = VassBuilder(2)
        b.add("q", "q", name="idle")
        v = b.build()
        c = v.config("q", (4, -7))
        assert step(v, c, "idle", Z) == c


class TestRun:
    def test_doubling_word(self, doubler):
        got = run(doubler, doubler.config("p", (3, 1)), ["s", "t", "u", "t", "u", "t"], Z)
        assert got == doubler.config("r", (4, 0))

    def test_empty_word(self, doubler):
        c = doubler.config("p", (3, 1))
        assert run(doubler, c, [], Z) == c

    def test_powers_of_two(self, doubler):
        got = run(doubler, doubler.config("p", (7, 1)), doubler_word(5), Z)
        assert got == doubler.config("r", (32, 0))

    def test_unknown_transition(self, doubler):
        with pytest.raises(InputError):
            run(doubler, doubler.config("p", (0, 0)), ["s", "nope"], Z)


words = st.lists(st.sampled_from(["s", "t", "u"]), max_size=8)
small = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@given(words, words, small, st.sampled_from([Z, N]))
def test_run_composes(doubler, w1, w2, vals, sem):
    c = doubler.config("p", vals)
    mid = run(doubler, c, w1, sem)
    if mid is not None:
        assert run(doubler, c, w1 + w2, sem) == run(doubler, mid, w2, sem)


@given(words, small, st.sampled_from(["p", "q", "r"]))
def test_n_steps_stay_nonnegative(doubler, w, vals, state):
    c = doubler.config(state, tuple(abs(x) for x in vals))
    for t in w:
        nxt = step(doubler, c, t, N)
        if nxt is None:
            break
        assert min(nxt.vals) >= 0
        c = nxt


class TestValidation:
    def test_transition_dimension_checked(self):
        t = Transition(0, Mat.identity(3), (0, 0, 0), 0)
        with pytest.raises((DimensionError, InputError)):
            AffineVass(2, ("p",), (t,))

    def test_unknown_state_checked(self):
        t = Transition(0, Mat.identity(1), (0,), 5)
        with pytest.raises((DimensionError, InputError)):
            AffineVass(1, ("p",), (t,))

    def test_config_literal(self, doubler):
        assert doubler.parse_config(" q( 1, -2 ) ") == Config(1, (1, -2))
        with pytest.raises(InputError):
            doubler.parse_config("z(1,2)")
        with pytest.raises(InputError):
            doubler.parse_config("p(1)")
        assert doubler.format_config(Config(2, (4, 0))) == "r(4,0)"
