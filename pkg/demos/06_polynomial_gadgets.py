"""
Evaluating polynomials with an affine VASS
==========================================

The evaluator reaches q(x, 0, ...) from p(x, 0, ...) exactly when P(x) = 0.
The φ-VASS adds an upper gadget so that only the question "is P(x) = 0 for
the input x" is left over, which a language oracle can answer.
"""
import itertools

from avass.model import Semantics
from avass.polygadget import (Polynomial, build_phi, build_poly, encode_word, evenness, phi_query,
                              poly_oracle, poly_witness, reduce_language, reduce_query)

N = Semantics.N
product = Polynomial(2, ((1, (1, 1)), (-4, (0, 0))))
pv = build_poly(product, N)
pad = (0,) * (pv.vass.d - 2)
roots = [xs for xs in itertools.product(range(6), repeat=2)
         if poly_oracle(pv, pv.vass.config("p", xs + pad), pv.vass.config("q", xs + pad))]
print(f"y1*y2 - 4 over N: {len(pv.vass.states)} states, dimension {pv.vass.d}; roots in [0,6)^2: {roots}")

src, tgt = pv.vass.config("p", (2, 2) + pad), pv.vass.config("q", (2, 2) + pad)
print("a run for (2, 2):", [pv.vass.transitions[k].name for k in poly_witness(pv, src, tgt)][:12], "...")

phi = build_phi(evenness(), N)
print(f"\nφ-VASS of the evenness polynomial: dimension {phi.m}")
for w in ["", "0", "1", "00", "01"]:
    s, t = reduce_language(w, phi)
    print(f"  {w!r:5} x = {encode_word(w, N)}  query -> {phi_query(phi, s, t)}  "
          f"answer {reduce_query(phi, s, t, lambda u: encode_word(u, N) % 2 == 0)}")
