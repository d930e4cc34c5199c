"""``avass``: command-line front end.

Exit codes: 0 positive answer or success, 1 negative answer, 2 usage error,
3 input error (bad file, bad configuration, unsupported seed, cap exceeded),
4 internal self-check failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import io
from .classify import (dichotomy, is_copy, is_permutation, is_pseudo_copy, is_pseudo_reset,
                       is_pseudo_transfer, is_reset, is_transfer, trichotomy)
from .emulate import (OpKind, derivation_log, doubling_matrix, flip_family, lambda_seq, reset_family,
                      swap_family, verify_impl)
from .errors import AvassError, ConstructionBug, InputError
from .model import AffineVass, Config, Semantics, step
from .polygadget import Defer, PhiVass, PolyVass, build_phi, build_poly, phi_query, poly_oracle, poly_witness
from .reduce import (compile_lba, compile_minsky, compile_pcp, cover_to_reach, mirror, perm_expand,
                     perm_queries)
from .search import DEFAULT_COUNTER_BOUND, DEFAULT_STEP_BOUND, bounded_reach

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_INPUT, EXIT_BUG = 0, 1, 2, 3, 4


@dataclass
class Manifest:
    command: str
    action: str | None = None
    inputs: list[str] = field(default_factory=list)
    sem: Semantics | None = None
    counter_bound: int = DEFAULT_COUNTER_BOUND
    step_bound: int = DEFAULT_STEP_BOUND
    output: str | None = None
    as_json: bool = False
    quiet: bool = False
    seed: int = 0
    options: dict[str, Any] = field(default_factory=dict)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"{text!r} is negative")
    return n


def _sem(text: str) -> Semantics:
    try:
        return io.parse_semantics(text)
    except AvassError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", dest="as_json", help="machine-readable output")
    common.add_argument("--quiet", action="store_true", help="no output; answer via exit code")
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness (default 0)")
    common.add_argument("-o", "--output", help="write the JSON artifact here instead of stdout")

    def with_sem(p, default=None):
        p.add_argument("--sem", type=_sem, default=default, help="z (integers) or n (naturals)")

    def with_bounds(p):
        p.add_argument("--bound", type=_nonneg, default=DEFAULT_COUNTER_BOUND, help="counter bound")
        p.add_argument("--steps", type=_nonneg, default=DEFAULT_STEP_BOUND, help="path length bound")

    def with_query(p, required=True):
        p.add_argument("--from", dest="source", required=required, metavar="CONFIG", help="e.g. 'p(3,1)'")
        p.add_argument("--to", dest="target", required=required, metavar="CONFIG")

    top = _Parser(prog="avass", description="Reachability tools for affine vector addition systems.")
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", parents=[common], help="complexity verdict for a set of matrices")
    p.add_argument("file")

    p = sub.add_parser("reach", parents=[common], help="bounded breadth-first reachability")
    p.add_argument("file")
    with_query(p, required=False)
    with_sem(p)
    with_bounds(p)
    p.add_argument("--witness", action="store_true", help="list the run step by step")

    p = sub.add_parser("emulate", parents=[common], help="operation families built from a seed matrix")
    p.add_argument("action", choices=["flip", "swap", "reset", "doubling"])
    p.add_argument("--matrix", required=True, help="matrices file; the seed is --index")
    p.add_argument("--index", type=_nonneg, default=0)
    p.add_argument("-n", type=_nonneg, default=2, help="size of the emulated counter set")
    p.add_argument("--verify", type=_nonneg, default=0, metavar="TRIALS", help="random vectors per member")
    p.add_argument("--depth", type=_nonneg, default=12, help="doubling: steps of λ to certify")

    p = sub.add_parser("compile", help="reductions into affine VASS reachability")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = csub.add_parser("lba", parents=[common])
    c.add_argument("file")
    c.add_argument("--word", required=True)
    c.add_argument("--flip-seed", help="matrices file whose first matrix replaces diag(-1)")
    c.add_argument("--dot")
    c = csub.add_parser("pcp", parents=[common])
    c.add_argument("file")
    c.add_argument("--doubling-seed", required=True)
    with_sem(c, Semantics.Z)
    c.add_argument("--dot")
    c = csub.add_parser("minsky", parents=[common])
    c.add_argument("file")
    c.add_argument("--neg-seed", required=True)
    c.add_argument("--dot")
    for name in ("perm-expand", "cover2reach"):
        c = csub.add_parser(name, parents=[common])
        c.add_argument("file")
        with_query(c, required=False)
        c.add_argument("--dot")

    p = sub.add_parser("poly", help="weak polynomial evaluator")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = psub.add_parser("build", parents=[common])
    c.add_argument("file")
    with_sem(c, Semantics.Z)
    c.add_argument("--order", choices=["canonical", "reversed"], default="canonical")
    c.add_argument("--dot")
    c = psub.add_parser("oracle", parents=[common])
    c.add_argument("file")
    with_query(c)
    c.add_argument("--witness", action="store_true")

    p = sub.add_parser("phi", help="the φ-VASS of a polynomial")
    psub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    c = psub.add_parser("build", parents=[common])
    c.add_argument("file")
    with_sem(c, Semantics.Z)
    c.add_argument("--dot")
    c = psub.add_parser("query", parents=[common])
    c.add_argument("file")
    with_query(c)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return top


_PARSER = _build_parser()
_MANIFEST_KEYS = {"command", "action", "file", "sem", "bound", "steps", "output", "as_json", "quiet", "seed"}


def parse_args(argv: Sequence[str]) -> Manifest:
    """Validated manifest; raises SystemExit(2) on a usage error."""
    try:
        ns = vars(_PARSER.parse_args(list(argv)))
    except _Usage as e:
        print(e, file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    return Manifest(
        command=ns["command"],
        action=ns.get("action"),
        inputs=[ns["file"]] if ns.get("file") else [],
        sem=ns.get("sem"),
        counter_bound=ns.get("bound", DEFAULT_COUNTER_BOUND),
        step_bound=ns.get("steps", DEFAULT_STEP_BOUND),
        output=ns.get("output"),
        as_json=ns["as_json"],
        quiet=ns["quiet"],
        seed=ns["seed"],
        options={k: x for k, x in ns.items() if k not in _MANIFEST_KEYS},
    )


# ------------------------------------------------------------------ reporting

@dataclass
class Result:
    code: int
    doc: Any                       # JSON document
    text: str                      # human-readable rendering
    artifact: bool = False         # doc is a re-loadable model (goes to --output)
    extra: dict[str, str] = field(default_factory=dict)   # path -> content (DOT files)


def table(rows: Sequence[Sequence[Any]], header: Sequence[str] | None = None) -> str:
    cells = [[str(c) for c in r] for r in ([header] if header else []) + list(rows)]
    if not cells:
        return ""
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    if header:
        lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def report(result: Result, m: Manifest) -> None:
    for path, content in result.extra.items():
        with open(path, "w") as fh:
            fh.write(content)
    if m.output and result.artifact:
        with open(m.output, "w") as fh:
            fh.write(io.dumps(result.doc) + "\n")
    if m.quiet:
        return
    if m.as_json or (result.artifact and not m.output):
        print(io.dumps(result.doc))
    else:
        print(result.text)


# ------------------------------------------------------------------- commands

_PREDICATES = [("reset", is_reset), ("pseudo-reset", is_pseudo_reset), ("transfer", is_transfer),
               ("pseudo-transfer", is_pseudo_transfer), ("copy", is_copy), ("pseudo-copy", is_pseudo_copy),
               ("permutation", is_permutation)]


def cmd_classify(m: Manifest) -> Result:
    mats = io.matrices_from_json(io.read_json(m.inputs[0]))
    tri, di = trichotomy(mats), dichotomy(mats)
    doc = {"trichotomy": tri.bucket.value, "dichotomy": di.bucket.value, "witness": tri.witness,
           "dichotomy_witness": di.witness,
           "matrices": [{name: pred(a) for name, pred in _PREDICATES} for a in mats]}
    rows = [[i, a.dim] + ["yes" if pred(a) else "-" for _, pred in _PREDICATES] for i, a in enumerate(mats)]
    text = table(rows, ["#", "dim"] + [name for name, _ in _PREDICATES])
    text += f"\n\ntrichotomy: {tri.bucket.value}\ndichotomy:  {di.bucket.value}"
    if tri.witness:
        text += f"\nwitness:    {json.dumps(tri.witness)}"
    return Result(EXIT_YES, doc, text)


def _endpoints(v: AffineVass, extra: dict, m: Manifest) -> tuple[Config, Config]:
    src = m.options.get("source") or extra.get("source")
    tgt = m.options.get("target") or extra.get("target")
    if not src or not tgt:
        raise InputError("give --from and --to (or a compiled instance with source and target)")
    return v.parse_config(src), v.parse_config(tgt)


def _trace(v: AffineVass, src: Config, word: Sequence[int], sem: Semantics) -> list[tuple[str, str]]:
    out, cur = [], src
    for k in word:
        cur = step(v, cur, k, sem)
        out.append((v.transitions[k].name or f"#{k}", v.format_config(cur)))
    return out


def cmd_reach(m: Manifest) -> Result:
    v, extra = io.load_reach_input(io.read_json(m.inputs[0]))
    src, tgt = _endpoints(v, extra, m)
    sem = m.sem or (io.parse_semantics(extra["semantics"]) if "semantics" in extra else Semantics.Z)
    r = bounded_reach(v, src, tgt, sem, m.counter_bound, m.step_bound)
    doc = {"outcome": r.outcome, "explored": r.explored, "frontier_peak": r.frontier_peak,
           "semantics": sem.value, "bound": m.counter_bound, "steps": m.step_bound}
    text = f"{r.outcome}  ({r.explored} configurations explored, frontier peak {r.frontier_peak})"
    if r.reached:
        steps = _trace(v, src, r.witness, sem)
        doc["witness"] = [name for name, _ in steps]
        doc["configs"] = [v.format_config(src)] + [c for _, c in steps]
        text = f"REACHED in {len(steps)} steps  ({r.explored} configurations explored)"
        if m.options["witness"]:
            text += "\n\n" + table([["", v.format_config(src)]] + [list(s) for s in steps], ["transition", "config"])
    return Result(EXIT_YES if r.reached else EXIT_NO, doc, text)


_FAMILIES = {"flip": flip_family, "swap": swap_family, "reset": reset_family}


def cmd_emulate(m: Manifest) -> Result:
    mats = io.matrices_from_json(io.read_json(m.options["matrix"]))
    if m.options["index"] >= len(mats):
        raise InputError(f"no matrix at index {m.options['index']}", "/matrices")
    a = mats[m.options["index"]]
    if m.action == "doubling":
        ctx = doubling_matrix(a, m.options["depth"])
        lam = lambda_seq(ctx, ctx.depth + 1)
        doc = {"kind": "doubling", "dim": ctx.dim, "pivot": ctx.pivot, "macro_steps": len(ctx.steps),
               "lambda": [io.enc_int(x) for x in lam], "matrices": [io.mat_to_json(ctx.c_matrix)],
               "derivation": derivation_log(ctx.term) if ctx.term else []}
        text = (f"doubling matrix of dimension {ctx.dim} (pivot {ctx.pivot}, {len(ctx.steps)} factors)\n"
                f"λ_0..λ_{ctx.depth + 1}: {', '.join(map(str, lam))}")
        return Result(EXIT_YES, doc, text)
    w = _FAMILIES[m.action](a, m.options["n"])
    members = sorted(w.terms.items())
    doc = {"kind": w.kind.value, "mode": w.mode.value, "m": w.m, "X": list(w.X), "seed": io.mat_to_json(a),
           "members": [{"key": list(k), "matrix": io.mat_to_json(t.value), "derivation": derivation_log(t)}
                       for k, t in members],
           "matrices": [io.mat_to_json(t.value) for _, t in members]}
    text = (f"{w.kind.value} family in {w.mode.value} mode: dimension {w.m}, X = {list(w.X)}, "
            f"{len(members)} members")
    code = EXIT_YES
    if m.options["verify"]:
        rep = verify_impl(w, OpKind(w.kind), m.options["verify"], m.seed)
        doc["verification"] = {"passed": rep.passed, "trials": rep.trials, "checks": rep.checks,
                               "failures": rep.failures}
        text += f"\nverification: {'passed' if rep.passed else 'FAILED'} ({rep.checks} checks, seed {m.seed})"
        for f in rep.failures:
            text += (f"\n  member {f['member']} item ({f['item']}) counter {f['counter']}: "
                     f"vector {f['vector']} -> {f['result']}")
        code = EXIT_YES if rep.passed else EXIT_NO
    return Result(code, doc, text)


def _first_matrix(path: str):
    return io.matrices_from_json(io.read_json(path))[0]


def _instance_result(v: AffineVass, src: Config | None, tgt: Config | None, sem: Semantics,
                     roles: dict[int, str], m: Manifest, more: dict | None = None) -> Result:
    doc = {"vass": io.vass_to_json(v), "semantics": sem.value,
           "counter_roles": {str(i): r for i, r in sorted(roles.items())}}
    if src is not None:
        doc["source"] = v.format_config(src)
        doc["target"] = v.format_config(tgt)
    doc.update(more or {})
    text = f"{len(v.states)} states, {len(v.transitions)} transitions, dimension {v.d}"
    if src is not None:
        text += f"\nsource {doc['source']}\ntarget {doc['target']}"
    extra = {m.options["dot"]: io.to_dot(v)} if m.options.get("dot") else {}
    return Result(EXIT_YES, doc, text, artifact=True, extra=extra)


def cmd_compile(m: Manifest) -> Result:
    doc = io.read_json(m.inputs[0])
    if m.action == "lba":
        seed_m = _first_matrix(m.options["flip_seed"]) if m.options.get("flip_seed") else None
        inst = compile_lba(io.lba_from_json(doc), m.options["word"], seed_m)
    elif m.action == "pcp":
        ctx = doubling_matrix(_first_matrix(m.options["doubling_seed"]))
        inst = compile_pcp(io.pcp_from_json(doc), ctx, m.sem)
    elif m.action == "minsky":
        inst = compile_minsky(io.minsky_from_json(doc), _first_matrix(m.options["neg_seed"]))
    else:
        v, extra = io.load_reach_input(doc)
        has_query = m.options.get("source") or extra.get("source")
        src, tgt = _endpoints(v, extra, m) if has_query else (None, None)
        if m.action == "cover2reach":
            out = cover_to_reach(v)
            if src is not None:
                src, tgt = mirror(src), mirror(tgt)
            return _instance_result(out, src, tgt, Semantics.Z, {}, m)
        out = perm_expand(v)
        more = {}
        if src is not None:
            queries = perm_queries(v, out, src, tgt)
            more["queries"] = [[out.format_config(s), out.format_config(t)] for s, t in queries]
            src, tgt = queries[0]
        return _instance_result(out, src, tgt, Semantics.N, {}, m, more)
    return _instance_result(inst.vass, inst.source, inst.target, inst.semantics, inst.counter_roles, m)


def _poly_doc(pv: PolyVass, order: str) -> dict:
    return {"polynomial": io.poly_to_json(pv.poly), "semantics": pv.sem.value, "order": order,
            "vass": io.vass_to_json(pv.vass),
            "layout": {"inputs": list(range(pv.k)), "output": pv.total,
                       "monomials": [{"coef": io.enc_int(lay.coef), "a0": lay.a0, "out": lay.out,
                                      "stations": [{"state": s.state, "var": s.var, "copy": s.copy,
                                                    "acc": s.acc} for s in lay.stations]}
                                     for lay in pv.monomials]}}


def _load_built(path: str, kind: str):
    doc = io.read_json(path)
    io.expect_object(doc, "", {"polynomial", "semantics", "vass"}, {"order", "layout"})
    poly = io.poly_from_json(doc["polynomial"], "/polynomial")
    sem = io.parse_semantics(doc["semantics"])
    built = build_poly(poly, sem, doc.get("order", "canonical")) if kind == "poly" else build_phi(poly, sem)
    if io.vass_from_json(doc["vass"], "/vass") != built.vass:
        raise InputError(f"the stored VASS is not the {kind} construction of the stored polynomial", "/vass")
    return built


def cmd_poly(m: Manifest) -> Result:
    if m.action == "build":
        pv = build_poly(io.poly_from_json(io.read_json(m.inputs[0])), m.sem, m.options["order"])
        text = (f"evaluator: {len(pv.vass.states)} states, {len(pv.vass.transitions)} transitions, "
                f"dimension {pv.vass.d}; output counter {pv.total}")
        extra = {m.options["dot"]: io.to_dot(pv.vass)} if m.options.get("dot") else {}
        return Result(EXIT_YES, _poly_doc(pv, m.options["order"]), text, artifact=True, extra=extra)
    pv = _load_built(m.inputs[0], "poly")
    src, tgt = pv.vass.parse_config(m.options["source"]), pv.vass.parse_config(m.options["target"])
    ans = poly_oracle(pv, src, tgt)
    doc: dict[str, Any] = {"reachable": ans}
    text = "REACHABLE" if ans else "NOT REACHABLE"
    if ans and m.options["witness"]:
        steps = _trace(pv.vass, src, poly_witness(pv, src, tgt), pv.sem)
        doc["witness"] = [name for name, _ in steps]
        text += "\n\n" + table([["", pv.vass.format_config(src)]] + [list(s) for s in steps], ["transition", "config"])
    return Result(EXIT_YES if ans else EXIT_NO, doc, text)


def cmd_phi(m: Manifest) -> Result:
    if m.action == "build":
        pv: PhiVass = build_phi(io.poly_from_json(io.read_json(m.inputs[0])), m.sem)
        doc = {"polynomial": io.poly_to_json(pv.poly.poly), "semantics": pv.sem.value,
               "vass": io.vass_to_json(pv.vass)}
        text = f"φ-VASS: {len(pv.vass.states)} states, {len(pv.vass.transitions)} transitions, dimension {pv.m}"
        extra = {m.options["dot"]: io.to_dot(pv.vass)} if m.options.get("dot") else {}
        return Result(EXIT_YES, doc, text, artifact=True, extra=extra)
    pv = _load_built(m.inputs[0], "phi")
    src, tgt = pv.vass.parse_config(m.options["source"]), pv.vass.parse_config(m.options["target"])
    ans = phi_query(pv, src, tgt)
    if isinstance(ans, Defer):
        # deferred to a membership oracle on x; reported as success
        return Result(EXIT_YES, {"answer": "DEFER", "x": io.enc_int(ans.x)}, f"DEFER({ans.x})")
    return Result(EXIT_YES if ans else EXIT_NO, {"answer": "TRUE" if ans else "FALSE"}, "TRUE" if ans else "FALSE")


def cmd_selftest(m: Manifest) -> Result:
    from .acceptance import run_all

    only = None
    if m.options.get("only"):
        try:
            only = {int(x) for x in m.options["only"].split(",")}
        except ValueError:
            raise InputError(f"--only expects numbers, got {m.options['only']!r}") from None
    outcomes = run_all(only, echo=not (m.quiet or m.as_json))
    doc = [{"criterion": o.number, "title": o.title, "passed": o.passed, "seconds": round(o.seconds, 2),
            "detail": o.detail} for o in outcomes]
    passed = all(o.passed for o in outcomes)
    text = f"{sum(o.passed for o in outcomes)}/{len(outcomes)} criteria passed"
    return Result(EXIT_YES if passed else EXIT_NO, doc, text)


_COMMANDS = {"classify": cmd_classify, "reach": cmd_reach, "emulate": cmd_emulate, "compile": cmd_compile,
             "poly": cmd_poly, "phi": cmd_phi, "selftest": cmd_selftest}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        m = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        result = _COMMANDS[m.command](m)
    except ConstructionBug as e:
        print(f"avass: internal check failed: {e}", file=sys.stderr)
        return EXIT_BUG
    except AvassError as e:
        print(f"avass: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"avass: {e}", file=sys.stderr)
        return EXIT_INPUT
    report(result, m)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
