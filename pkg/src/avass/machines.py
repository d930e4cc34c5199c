"""Source machines for the reductions: LBAs, PCP instances and two-counter Minsky machines."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping

from .errors import InputError


class Move(enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def offset(self) -> int:
        return -1 if self is Move.LEFT else 1


@dataclass(frozen=True, eq=False)
class Lba:
    """Deterministic linear bounded automaton over the alphabet {0, 1}.

    ``delta[(state, symbol)] = (next_state, written_symbol, move)`` and must be
    total on states × {0, 1}.
    """

    states: tuple[str, ...]
    delta: Mapping[tuple[str, int], tuple[str, int, Move]]
    init: str
    accept: str

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        known = set(self.states)
        if self.init not in known or self.accept not in known:
            raise InputError("init and accept must be declared states")
        for p in self.states:
            for a in (0, 1):
                if (p, a) not in self.delta:
                    raise InputError(f"transition function undefined on ({p}, {a})")
        for (p, a), (q, b, mv) in self.delta.items():
            if p not in known or q not in known or a not in (0, 1) or b not in (0, 1):
                raise InputError(f"bad transition ({p}, {a}) -> ({q}, {b}, {mv})")
            if not isinstance(mv, Move):
                raise InputError(f"bad move {mv!r}")


def check_bits(w: str, what: str = "word") -> str:
    if any(ch not in "01" for ch in w):
        raise InputError(f"{what} {w!r} is not a bitstring")
    return w


@dataclass(frozen=True)
class PcpInstance:
    tiles: tuple[tuple[str, str], ...]

    def __post_init__(self):
        tiles = tuple((check_bits(u, "tile top"), check_bits(v, "tile bottom")) for u, v in self.tiles)
        if not tiles:
            raise InputError("a PCP instance needs at least one tile")
        object.__setattr__(self, "tiles", tiles)


@dataclass(frozen=True)
class MinskyOp:
    kind: str      # "add" or "zero"
    counter: str   # "x" or "y"
    value: int = 0

    def __post_init__(self):
        if self.kind not in ("add", "zero") or self.counter not in ("x", "y"):
            raise InputError(f"bad Minsky operation {self}")
        if self.kind == "zero" and self.value:
            raise InputError("zero tests carry no constant")


@dataclass(frozen=True)
class MinskyMachine:
    states: tuple[str, ...]
    transitions: tuple[tuple[str, MinskyOp, str], ...]
    init: str
    final: str

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", tuple(self.transitions))
        known = set(self.states)
        if self.init not in known or self.final not in known:
            raise InputError("init and final must be declared states")
        for p, _, q in self.transitions:
            if p not in known or q not in known:
                raise InputError(f"transition {p} -> {q} uses an undeclared state")
