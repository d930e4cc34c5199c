"""
Building flips, swaps, resets and doubling from one seed matrix
===============================================================

Using only extension, conjugation by permutations and products, a seed
matrix outside the easy classes yields a family acting as a basic operation
on a chosen set X of counters while leaving the others alone or zeroing them.
"""
from avass.emulate import (OpKind, derivation_log, doubling_matrix, flip_family, gamma, lambda_seq,
                           reset_family, swap_family, verify_impl)
from avass.model import Mat

for build, kind, a in [(flip_family, OpKind.FLIP, Mat(((0, -1), (1, 0)))),
                       (swap_family, OpKind.SWAP, Mat(((1, 1), (0, 0)))),
                       (reset_family, OpKind.RESET, Mat(((1, 0), (1, 0))))]:
    w = build(a, 3)
    rep = verify_impl(w, kind, trials=200)
    print(f"{kind.value:6} from {a.rows}: dimension {w.m}, X = {list(w.X)}, mode {w.mode.value}, "
          f"{len(w.terms)} members, verified: {rep.passed} ({rep.checks} checks)")

key, term = next(iter(sorted(w.terms.items())))
print(f"\nderivation of the reset member {key}:")
for line in derivation_log(term)[:8]:
    print("  ", line)

ctx = doubling_matrix(Mat(((0, -3), (1, 0))))
print(f"\ndoubling matrix of dimension {ctx.dim}; λ = {lambda_seq(ctx, 8)}")
print("γ on short words:", {x: gamma(ctx, x) for x in ["", "0", "1", "10", "11", "101"]})
