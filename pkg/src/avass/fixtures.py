"""Small named instances used by the tests, the demos and ``avass selftest``."""
from __future__ import annotations

from .machines import Lba, MinskyMachine, MinskyOp, Move, PcpInstance
from .model import AffineVass, Mat, VassBuilder

L, R = Move.LEFT, Move.RIGHT


def doubler_vass() -> AffineVass:
    """Three states p, q, r; the loop q -> r -> q doubles the first counter."""
    b = VassBuilder(2)
    b.add("p", "q", Mat(((0, 0), (0, 1))), (1, -1), name="s")
    b.add("q", "r", Mat(((1, 1), (0, 0))), name="t")
    b.add("r", "q", Mat(((1, 0), (1, 0))), name="u")
    return b.build()


def doubler_word(k: int) -> list[str]:
    """s, t, then (u, t) k times: takes p(x, 1) to r(2^k, 0)."""
    return ["s", "t"] + ["u", "t"] * k


def _lba(states, delta, init, accept) -> Lba:
    return Lba(tuple(states), {(p, a): out for (p, a), out in delta.items()}, init, accept)


def lba_zoo() -> dict[str, Lba]:
    zoo = {}
    zoo["accept_now"] = _lba(["a"], {("a", 0): ("a", 0, R), ("a", 1): ("a", 1, R)}, "a", "a")
    zoo["ping_pong"] = _lba(
        ["s", "t", "acc"],
        {("s", 0): ("t", 0, R), ("s", 1): ("t", 1, R),
         ("t", 0): ("s", 0, L), ("t", 1): ("s", 1, L),
         ("acc", 0): ("acc", 0, R), ("acc", 1): ("acc", 1, R)},
        "s", "acc")
    zoo["seek_one"] = _lba(
        ["s", "acc"],
        {("s", 0): ("s", 0, R), ("s", 1): ("acc", 1, L),
         ("acc", 0): ("acc", 0, R), ("acc", 1): ("acc", 1, R)},
        "s", "acc")
    zoo["toggle_back"] = _lba(
        ["s", "t", "acc"],
        {("s", 0): ("t", 1, R), ("s", 1): ("t", 0, R),
         ("t", 0): ("s", 0, L), ("t", 1): ("acc", 1, L),
         ("acc", 0): ("acc", 0, R), ("acc", 1): ("acc", 1, R)},
        "s", "acc")
    zoo["second_zero"] = _lba(
        ["s", "t", "acc"],
        {("s", 0): ("t", 0, R), ("s", 1): ("t", 1, R),
         ("t", 0): ("acc", 1, L), ("t", 1): ("t", 1, R),
         ("acc", 0): ("acc", 0, R), ("acc", 1): ("acc", 1, R)},
        "s", "acc")
    zoo["erase_then_check"] = _lba(
        ["s", "t", "acc"],
        {("s", 0): ("s", 0, R), ("s", 1): ("t", 0, L),
         ("t", 0): ("acc", 0, R), ("t", 1): ("s", 1, R),
         ("acc", 0): ("acc", 0, L), ("acc", 1): ("acc", 1, L)},
        "s", "acc")
    return zoo


def pcp_zoo() -> dict[str, PcpInstance]:
    return {
        "identical": PcpInstance((("1", "1"),)),
        "never": PcpInstance((("0", "1"),)),
        "two_tiles": PcpInstance((("1", "10"), ("0", "0"), ("01", "1"))),
        "short": PcpInstance((("10", "1"), ("1", "01"))),
        "longer_top": PcpInstance((("11", "1"), ("0", "10"))),
        "overhang": PcpInstance((("1", "11"), ("11", "1"))),
        "mismatch": PcpInstance((("10", "0"), ("1", "01"))),
        "three_tiles": PcpInstance((("11", "1"), ("1", "111"))),
    }


def _mm(states, transitions, init, final) -> MinskyMachine:
    return MinskyMachine(tuple(states), tuple((p, MinskyOp(*op), q) for p, op, q in transitions), init, final)


def minsky_zoo() -> dict[str, MinskyMachine]:
    return {
        "add_then_test": _mm(["p", "q", "r"], [("p", ("add", "x", 2), "q"), ("q", ("zero", "x"), "r")], "p", "r"),
        "test_only": _mm(["p", "r"], [("p", ("zero", "x"), "r")], "p", "r"),
        "transfer": _mm(
            ["p", "q", "r"],
            [("p", ("add", "x", -1), "q"), ("q", ("add", "y", 1), "p"), ("p", ("zero", "x"), "r")],
            "p", "r"),
        "count_down": _mm(
            ["p", "q", "r"],
            [("p", ("add", "x", 3), "q"), ("q", ("add", "x", -1), "q"), ("q", ("zero", "x"), "r"),
             ("r", ("add", "y", 1), "r")],
            "p", "r"),
        "guarded_y": _mm(
            ["p", "q", "r"],
            [("p", ("add", "y", 1), "q"), ("q", ("zero", "y"), "r"), ("q", ("add", "y", -1), "p")],
            "p", "r"),
    }


def permutation_vass_zoo() -> dict[str, AffineVass]:
    swap = Mat(((0, 1), (1, 0)))
    zoo = {}
    b = VassBuilder(2)
    b.add("p", "p", swap, name="swap")
    b.add("p", "p", vec=(1, 0), name="inc")
    zoo["swap_inc"] = b.build()
    b = VassBuilder(2)
    b.add("p", "q", swap, (0, 1), name="swap_add")
    b.add("q", "p", vec=(-1, 0), name="dec")
    b.add("q", "q", vec=(1, 1), name="both")
    zoo["mixed"] = b.build()
    cyc = Mat(((0, 0, 1), (1, 0, 0), (0, 1, 0)))
    b = VassBuilder(3)
    b.add("p", "p", cyc, name="rotate")
    b.add("p", "q", vec=(1, 0, 0), name="bump")
    b.add("q", "p", vec=(0, 0, -1), name="drop")
    zoo["rotate3"] = b.build()
    return zoo


def matrix_zoo() -> list[tuple[str, Mat, dict[str, bool]]]:
    """Matrices with hand-checked predicate values.

    Keys: reset, pseudo_reset, transfer, pseudo_transfer, copy, pseudo_copy, permutation.
    """
    def row(name, rows, *true):
        flags = {k: k in true for k in
                 ("reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy", "permutation")}
        return name, Mat(tuple(map(tuple, rows))), flags

    all_shapes = ("reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy", "permutation")
    return [
        row("I1", [[1]], *all_shapes),
        row("I2", [[1, 0], [0, 1]], *all_shapes),
        row("I3", [[1, 0, 0], [0, 1, 0], [0, 0, 1]], *all_shapes),
        row("zero1", [[0]], "reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("diag101", [[1, 0, 0], [0, 0, 0], [0, 0, 1]],
            "reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("neg1", [[-1]], "pseudo_reset", "pseudo_transfer", "pseudo_copy"),
        row("diag_neg", [[1, 0], [0, -1]], "pseudo_reset", "pseudo_transfer", "pseudo_copy"),
        row("transfer_O", [[1, 1], [0, 0]], "transfer", "pseudo_transfer"),
        row("copy_u", [[1, 0], [1, 0]], "copy", "pseudo_copy"),
        row("swap2", [[0, 1], [1, 0]], "transfer", "pseudo_transfer", "copy", "pseudo_copy", "permutation"),
        row("cycle3", [[0, 0, 1], [1, 0, 0], [0, 1, 0]],
            "transfer", "pseudo_transfer", "copy", "pseudo_copy", "permutation"),
        row("neg_swap", [[0, -1], [1, 0]], "pseudo_transfer", "pseudo_copy"),
        row("upper1", [[0, 1], [0, 0]], "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("pseudo_transfer_neg", [[-1, 1], [0, 0]], "pseudo_transfer"),
        row("pseudo_copy_neg", [[-1, 0], [1, 0]], "pseudo_copy"),
        row("two", [[2]]),
        row("minus_two", [[-2]]),
        row("full_ones", [[1, 1], [1, 1]]),
        row("fib", [[1, 1], [1, 0]]),
        row("doubler_s", [[0, 0], [0, 1]], "reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("gather3", [[1, 1, 1], [0, 0, 0], [0, 0, 0]], "transfer", "pseudo_transfer"),
        row("spread3", [[1, 0, 0], [1, 0, 0], [1, 0, 0]], "copy", "pseudo_copy"),
        row("mixed_sign_row", [[1, -1], [0, 0]], "pseudo_transfer"),
        row("mixed_sign_col", [[1, 0], [-1, 0]], "pseudo_copy"),
        row("big_diag", [[3, 0], [0, 1]]),
        row("perm_with_reset", [[0, 1, 0], [1, 0, 0], [0, 0, 0]], "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("neg_perm", [[0, 0, -1], [-1, 0, 0], [0, -1, 0]], "pseudo_transfer", "pseudo_copy"),
        row("triangle", [[1, 1, 0], [0, 1, 1], [0, 0, 1]]),
        row("zero3", [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
            "reset", "pseudo_reset", "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("reset_neg_diag", [[0, 0], [0, -1]], "pseudo_reset", "pseudo_transfer", "pseudo_copy"),
        row("shift4", [[0, 0, 0, 0], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]],
            "transfer", "pseudo_transfer", "copy", "pseudo_copy"),
        row("cross", [[0, 1, 1], [1, 0, 0], [0, 0, 0]], "transfer", "pseudo_transfer"),
    ]
