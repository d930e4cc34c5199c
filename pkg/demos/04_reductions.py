"""
Compiling machines into affine VASS reachability
================================================

Bounded automata, tile-matching puzzles and two-counter machines become
reachability questions. The compiled answers agree with direct simulation.
"""
from avass.emulate import doubling_matrix
from avass.fixtures import lba_zoo, minsky_zoo, pcp_zoo
from avass.model import Mat
from avass.reduce import compile_lba, compile_minsky, compile_pcp, decode_tiles
from avass.search import bounded_reach, lba_accepts, pcp_match_search

m = lba_zoo()["second_zero"]
for w in ["0", "00", "10", "11"]:
    inst = compile_lba(m, w)
    r = bounded_reach(inst.vass, inst.source, inst.target, inst.semantics, 64)
    print(f"LBA on {w!r}: simulator {lba_accepts(m, w)}, compiled {r.reached}")

p = pcp_zoo()["three_tiles"]
inst = compile_pcp(p, doubling_matrix(Mat(((2,),))))
r = bounded_reach(inst.vass, inst.source, inst.target, inst.semantics, 64)
print(f"\ntiles {p.tiles}: brute force {pcp_match_search(p, 6)}, compiled run spells "
      f"{decode_tiles(inst.vass, r.witness) if r.reached else None}")

for name, mm in minsky_zoo().items():
    inst = compile_minsky(mm, Mat(((-1,),)))
    print(f"two-counter machine {name!r}: {len(inst.vass.states)} states, dimension {inst.vass.d}, "
          f"roles {inst.counter_roles}")
