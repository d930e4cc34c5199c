"""
Permutation VASS and the coverability transform
===============================================

Permutation matrices can be pushed into the control states, leaving a plain
VASS over N. Separately, any VASS can be mirrored so that coverability
questions become reachability questions.
"""
from avass.fixtures import permutation_vass_zoo
from avass.model import Semantics
from avass.reduce import cover_to_reach, mirror, perm_expand, perm_reach
from avass.search import bounded_reach

for name, v in permutation_vass_zoo().items():
    plain = perm_expand(v)
    print(f"{name}: {len(v.states)} states, dimension {v.d} -> {len(plain.states)} states, "
          f"all matrices identity: {all(t.mat.is_identity() for t in plain.transitions)}")

v = permutation_vass_zoo()["swap_inc"]
src, tgt = v.config("p", (1, 0)), v.config("p", (0, 2))


def oracle(w, s, t):
    return bounded_reach(w, s, t, Semantics.N, 8).reached


print("\nsearched directly:", oracle(v, src, tgt), " via the expansion:", perm_reach(v, src, tgt, oracle))

twice = cover_to_reach(v)
print(f"\nmirrored VASS has dimension {twice.d}; {v.format_config(tgt)} becomes "
      f"{twice.format_config(mirror(tgt))}")
