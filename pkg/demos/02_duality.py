"""Dual norms and the bidual round trip."""

import numpy as np

from absnorm import ONE, PNorm, Polygonal, bidual_check, dual, duality_chain_check, evaluate

P1 = Polygonal([[1, 0], [0.5, 0.75], [0, 1]])

print("dual of P1 has vertices", np.round(np.array(dual(P1).vertices), 4).tolist())
print("dual of l1 at (1,1):", evaluate(dual(ONE), 1, 1))
for name, F in [("l1.5", PNorm(1.5)), ("P1", P1)]:
    rep = bidual_check(F)
    print(f"{name}: bidual deviation {rep.details['max_deviation']:.2e}, verdict {rep.verdict}")
    print(f"{name}: duality chain verdict {duality_chain_check(F).verdict}")
