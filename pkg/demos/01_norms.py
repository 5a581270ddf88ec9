"""Absolute norms on the plane: evaluation, boundary curves and profiles."""

from absnorm import INF, ONE, TWO, PNorm, Polygonal, boundary, evaluate, profile, r_of

P1 = Polygonal([[1, 0], [0.5, 0.75], [0, 1]])

for name, F in [("l1", ONE), ("l1.5", PNorm(1.5)), ("l2", TWO), ("linf", INF), ("P1", P1)]:
    prof = profile(F)
    print(f"{name:5s} F(1,1) = {evaluate(F, 1, 1):.4f}  f(0.5) = {boundary(F, 0.5):.4f}  "
          f"r_F = {prof.rF:.4f}  class {prof.classification.value}")

# Exact and generic computation of r_F agree on the polygon.
print("r_P1 exact", r_of(P1), "bisection", r_of(P1, exact=False))
