"""JSON documents for every model type, and DOT export.

Integers beyond 53 bits are written as decimal strings so that JavaScript
readers do not round them; loaders accept either form. Every load error
carries a JSON pointer to the offending field.
"""
from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .errors import InputError
from .machines import Lba, MinskyMachine, MinskyOp, Move, PcpInstance
from .model import AffineVass, Config, Mat, Semantics, Transition
from .polygadget import Polynomial

SAFE_INT = 2**53


def enc_int(x: int) -> int | str:
    return x if -SAFE_INT < x < SAFE_INT else str(x)


def dec_int(x: Any, ptr: str) -> int:
    if isinstance(x, bool):
        raise InputError("expected an integer, got a boolean", ptr)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise InputError(f"expected an integer, got {x!r}", ptr)


def expect_object(doc: Any, ptr: str, required: set[str], optional: set[str] = frozenset()) -> dict:
    if not isinstance(doc, dict):
        raise InputError("expected an object", ptr)
    missing = required - doc.keys()
    if missing:
        raise InputError(f"missing field {sorted(missing)[0]!r}", ptr)
    unknown = doc.keys() - required - optional
    if unknown:
        raise InputError(f"unknown field {sorted(unknown)[0]!r}", ptr)
    return doc


def _list(doc: Any, ptr: str) -> list:
    if not isinstance(doc, list):
        raise InputError("expected an array", ptr)
    return doc


def _str(doc: Any, ptr: str) -> str:
    if not isinstance(doc, str):
        raise InputError("expected a string", ptr)
    return doc


def read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON ({e.msg} at line {e.lineno})") from None


_FLAT_LIST = re.compile(r"\[\s*((?:-?\d+|\"[^\"\n]*\")(?:,\s*(?:-?\d+|\"[^\"\n]*\"))*)\s*\]")


def dumps(doc: Any) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(doc, indent=2, ensure_ascii=False)
    return _FLAT_LIST.sub(_flatten, text)


def _flatten(m: re.Match) -> str:
    try:
        return json.dumps(json.loads(m.group(0)), ensure_ascii=False)
    except json.JSONDecodeError:
        return m.group(0)


# ------------------------------------------------------------------ matrices

def mat_to_json(a: Mat) -> list[list]:
    return [[enc_int(x) for x in r] for r in a.rows]


def mat_from_json(doc: Any, ptr: str = "", dim: int | None = None) -> Mat:
    rows = _list(doc, ptr)
    n = len(rows)
    if n == 0:
        raise InputError("empty matrix", ptr)
    out = []
    for i, r in enumerate(_list(x, f"{ptr}/{i}") for i, x in enumerate(rows)):
        if len(r) != n:
            raise InputError(f"matrix is not square: row {i} has {len(r)} entries, expected {n}", f"{ptr}/{i}")
        out.append(tuple(dec_int(x, f"{ptr}/{i}/{j}") for j, x in enumerate(r)))
    if dim is not None and n != dim:
        raise InputError(f"matrix is {n}x{n}, expected {dim}x{dim}", ptr)
    return Mat(tuple(out))


def matrices_to_json(mats: list[Mat]) -> dict:
    return {"matrices": [mat_to_json(a) for a in mats]}


def matrices_from_json(doc: Any) -> list[Mat]:
    if isinstance(doc, dict) and "matrices" in doc:
        items = _list(doc["matrices"], "/matrices")
        mats = [mat_from_json(a, f"/matrices/{i}") for i, a in enumerate(items)]
    else:
        raise InputError("expected an object with a 'matrices' array", "")
    if not mats:
        raise InputError("no matrices", "/matrices")
    return mats


# ---------------------------------------------------------------------- VASS

def vass_to_json(v: AffineVass) -> dict:
    ts = []
    for t in v.transitions:
        item: dict[str, Any] = {"from": v.states[t.src], "to": v.states[t.tgt]}
        if t.name:
            item["name"] = t.name
        if not t.mat.is_identity():
            item["matrix"] = mat_to_json(t.mat)
        if any(t.vec):
            item["vector"] = [enc_int(x) for x in t.vec]
        ts.append(item)
    return {"d": v.d, "states": list(v.states), "transitions": ts}


def vass_from_json(doc: Any, ptr: str = "") -> AffineVass:
    expect_object(doc, ptr, {"d", "states", "transitions"})
    d = dec_int(doc["d"], f"{ptr}/d")
    if d < 1:
        raise InputError("dimension must be positive", f"{ptr}/d")
    states = [_str(s, f"{ptr}/states/{i}") for i, s in enumerate(_list(doc["states"], f"{ptr}/states"))]
    index = {s: i for i, s in enumerate(states)}
    if len(index) != len(states):
        raise InputError("duplicate state name", f"{ptr}/states")
    ts = []
    for k, item in enumerate(_list(doc["transitions"], f"{ptr}/transitions")):
        here = f"{ptr}/transitions/{k}"
        expect_object(item, here, {"from", "to"}, {"name", "matrix", "vector"})
        ends = []
        for key in ("from", "to"):
            s = _str(item[key], f"{here}/{key}")
            if s not in index:
                raise InputError(f"unknown state {s!r}", f"{here}/{key}")
            ends.append(index[s])
        mat = mat_from_json(item["matrix"], f"{here}/matrix", d) if "matrix" in item else Mat.identity(d)
        vec = tuple(dec_int(x, f"{here}/vector/{i}")
                    for i, x in enumerate(_list(item.get("vector", [0] * d), f"{here}/vector")))
        if len(vec) != d:
            raise InputError(f"vector has {len(vec)} entries, expected {d}", f"{here}/vector")
        ts.append(Transition(ends[0], mat, vec, ends[1], _str(item.get("name", ""), f"{here}/name")))
    return AffineVass(d, tuple(states), tuple(ts))


def instance_to_json(v: AffineVass, source: Config, target: Config, sem: Semantics,
                     counter_roles: dict[int, str] | None = None) -> dict:
    return {
        "vass": vass_to_json(v),
        "source": v.format_config(source),
        "target": v.format_config(target),
        "semantics": sem.value,
        "counter_roles": {str(i): r for i, r in sorted((counter_roles or {}).items())},
    }


def load_reach_input(doc: Any) -> tuple[AffineVass, dict]:
    """A bare ``vass`` document, or any emitted document that embeds one under "vass".

    Returns the VASS and the remaining fields (source, target, ...) if present.
    """
    if isinstance(doc, dict) and "vass" in doc:
        return vass_from_json(doc["vass"], "/vass"), {k: x for k, x in doc.items() if k != "vass"}
    return vass_from_json(doc), {}


def parse_semantics(text: str) -> Semantics:
    try:
        return Semantics(text.lower())
    except ValueError:
        raise InputError(f"semantics must be 'z' or 'n', got {text!r}") from None


# ------------------------------------------------------------------ machines

def lba_to_json(m: Lba) -> dict:
    delta = [{"state": p, "read": a, "next": q, "write": b, "move": mv.value}
             for (p, a), (q, b, mv) in sorted(m.delta.items())]
    return {"states": list(m.states), "init": m.init, "accept": m.accept, "delta": delta}


def lba_from_json(doc: Any) -> Lba:
    expect_object(doc, "", {"states", "init", "accept", "delta"})
    states = tuple(_str(s, f"/states/{i}") for i, s in enumerate(_list(doc["states"], "/states")))
    delta = {}
    for n, item in enumerate(_list(doc["delta"], "/delta")):
        here = f"/delta/{n}"
        expect_object(item, here, {"state", "read", "next", "write", "move"})
        try:
            move = Move(item["move"])
        except ValueError:
            raise InputError("move must be 'L' or 'R'", f"{here}/move") from None
        key = (_str(item["state"], f"{here}/state"), dec_int(item["read"], f"{here}/read"))
        if key in delta:
            raise InputError(f"duplicate entry for {key}", here)
        delta[key] = (_str(item["next"], f"{here}/next"), dec_int(item["write"], f"{here}/write"), move)
    return Lba(states, delta, _str(doc["init"], "/init"), _str(doc["accept"], "/accept"))


def pcp_to_json(p: PcpInstance) -> dict:
    return {"tiles": [[u, w] for u, w in p.tiles]}


def pcp_from_json(doc: Any) -> PcpInstance:
    expect_object(doc, "", {"tiles"})
    tiles = []
    for i, t in enumerate(_list(doc["tiles"], "/tiles")):
        pair = _list(t, f"/tiles/{i}")
        if len(pair) != 2:
            raise InputError("a tile is a [top, bottom] pair", f"/tiles/{i}")
        tiles.append((_str(pair[0], f"/tiles/{i}/0"), _str(pair[1], f"/tiles/{i}/1")))
    return PcpInstance(tuple(tiles))


def minsky_to_json(m: MinskyMachine) -> dict:
    ts = []
    for p, op, q in m.transitions:
        item = {"from": p, "to": q, "op": op.kind, "counter": op.counter}
        if op.kind == "add":
            item["value"] = enc_int(op.value)
        ts.append(item)
    return {"states": list(m.states), "init": m.init, "final": m.final, "transitions": ts}


def minsky_from_json(doc: Any) -> MinskyMachine:
    expect_object(doc, "", {"states", "init", "final", "transitions"})
    states = tuple(_str(s, f"/states/{i}") for i, s in enumerate(_list(doc["states"], "/states")))
    ts = []
    for n, item in enumerate(_list(doc["transitions"], "/transitions")):
        here = f"/transitions/{n}"
        expect_object(item, here, {"from", "to", "op", "counter"}, {"value"})
        op = MinskyOp(_str(item["op"], f"{here}/op"), _str(item["counter"], f"{here}/counter"),
                      dec_int(item.get("value", 0), f"{here}/value"))
        ts.append((_str(item["from"], f"{here}/from"), op, _str(item["to"], f"{here}/to")))
    return MinskyMachine(states, tuple(ts), _str(doc["init"], "/init"), _str(doc["final"], "/final"))


def poly_to_json(p: Polynomial) -> dict:
    return {"k": p.k, "monomials": [{"coef": enc_int(c), "exps": list(e)} for c, e in p.monomials]}


def poly_from_json(doc: Any, ptr: str = "") -> Polynomial:
    expect_object(doc, ptr, {"k", "monomials"})
    k = dec_int(doc["k"], f"{ptr}/k")
    monos = []
    for n, item in enumerate(_list(doc["monomials"], f"{ptr}/monomials")):
        here = f"{ptr}/monomials/{n}"
        expect_object(item, here, {"coef", "exps"})
        exps = tuple(dec_int(e, f"{here}/exps/{i}") for i, e in enumerate(_list(item["exps"], f"{here}/exps")))
        monos.append((dec_int(item["coef"], f"{here}/coef"), exps))
    return Polynomial(k, tuple(monos))


# ----------------------------------------------------------------------- DOT

def _label(t: Transition) -> str:
    parts = [t.name] if t.name else []
    if not t.mat.is_identity():
        parts.append(str(t.mat.tolist()))
    if any(t.vec):
        parts.append(str(list(t.vec)))
    return "\n".join(parts)


def to_dot(v: AffineVass, title: str = "vass") -> str:
    lines = [f"digraph {json.dumps(title)} {{", "  rankdir=LR;"]
    lines += [f"  {json.dumps(s)};" for s in v.states]
    for t in v.transitions:
        lines.append(f"  {json.dumps(v.states[t.src])} -> {json.dumps(v.states[t.tgt])}"
                     f" [label={json.dumps(_label(t))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
