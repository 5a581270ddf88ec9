"""Upper bounds on Banach-Mazur distances between planar spaces."""

from absnorm import PSpace, bm_search, check_s_isometry_invariance

L1, L2, LINF = PSpace(1, 2), PSpace(2, 2), PSpace("inf", 2)

for name, X, Y in [("l1 vs linf", L1, LINF), ("l2 vs linf", L2, LINF)]:
    d, M = bm_search(X, Y, restarts=16)
    print(f"{name}: d <= {d:.4f} via {M.round(3).tolist()}")

print("s invariant under a rotation of l1:",
      check_s_isometry_invariance(L1, [[1, 1], [1, -1]]).verdict)
