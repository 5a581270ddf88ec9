"""Verification of octahedrality statements for absolute sums."""

from absnorm import (INF, ONE, TWO, InfinityNormExcluded, PNorm, PSpace, check_asq_impossible,
                     check_loh2, check_loh3, check_prop_loh, check_sum_lasq_transfer)

X = PSpace("inf", 2)

for name, F in [("l1", ONE), ("l2", TWO), ("linf", INF)]:
    print(f"{name}: loh2 {check_loh2(F).verdict}, loh3(0.1) {check_loh3(F, 0.1).verdict}")

print("prop-loh linf(+)_2 linf:", check_prop_loh(X, X, TWO, 0.2).verdict)
print("lasq transfer linf(+)_1.5 l2:", check_sum_lasq_transfer(X, PSpace(2, 2), PNorm(1.5)).verdict)
for name, F in [("l1", ONE), ("l2", TWO)]:
    rep = check_asq_impossible(X, X, F)
    print(f"asq impossible with {name}: {rep.verdict}, margin {rep.worst_margin:.4f}")

try:
    check_asq_impossible(X, X, INF)
except InfinityNormExcluded as exc:
    print("max-norm sums are refused:", exc)
