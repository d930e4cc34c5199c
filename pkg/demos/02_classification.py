"""
Which matrix classes keep reachability decidable?
=================================================

Each generator set gets a trichotomy verdict (integer semantics) and a
dichotomy verdict (natural semantics), with a witness when it is hard.
"""
import json

from avass.classify import dichotomy, monoid_enumerate, trichotomy
from avass.model import Mat

sets = {
    "resets only": [Mat.diag((1, 0, 1)), Mat.identity(3)],
    "a transfer": [Mat(((1, 1), (0, 0)))],
    "a copy": [Mat(((1, 0), (1, 0)))],
    "transfer and copy": [Mat(((1, 1), (0, 0))), Mat(((1, 0), (1, 0)))],
    "scaling by 2": [Mat(((2,),))],
    "a swap": [Mat(((0, 1), (1, 0)))],
}

for name, gens in sets.items():
    tri, di = trichotomy(gens), dichotomy(gens)
    print(f"{name:18} {tri.bucket.value:28} {di.bucket.value}")
    if tri.witness:
        print(" " * 19 + json.dumps(tri.witness))

# Pseudo-transfer generators keep the monoid finite with entries in {-1, 0, 1}.
gens = [Mat(((1, 1, 0), (0, 0, 0), (0, 0, 1))), Mat(((0, -1, 0), (0, 0, 1), (1, 0, 0)))]
monoid = monoid_enumerate(gens)
print(f"\nmonoid of two 3x3 pseudo-transfer matrices: {len(monoid)} elements (cap 7^3 = {7 ** 3})")
