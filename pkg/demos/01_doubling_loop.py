"""
A three-state VASS that doubles a counter
=========================================

Counter 0 is reset and counter 1 is moved into it; then the loop q -> r -> q
copies counter 0 into counter 1 and adds both back, doubling it each lap.
"""
from avass.fixtures import doubler_vass, doubler_word
from avass.model import Semantics, run
from avass.search import bounded_reach

v = doubler_vass()
for t in v.transitions:
    print(f"{v.states[t.src]} -> {v.states[t.tgt]}  {t.name}: A = {t.mat.rows}, b = {t.vec}")

# Replay the hand-written word for k laps.
src = v.config("p", (3, 1))
for k in range(5):
    end = run(v, src, doubler_word(k), Semantics.Z)
    print(f"k = {k}: {v.format_config(src)} -> {v.format_config(end)}")

# Breadth-first search finds the same word without being told.
r = bounded_reach(v, src, v.config("r", (8, 0)), Semantics.Z, 64)
print("search:", r.outcome, [v.transitions[k].name for k in r.witness])

# Under N the same target is still reachable; a negative one never is.
print("N, r(8,0): ", bounded_reach(v, src, v.config("r", (8, 0)), Semantics.N, 64).outcome)
print("N, q(1,-1):", bounded_reach(v, src, v.config("q", (1, -1)), Semantics.N, 64).outcome)
