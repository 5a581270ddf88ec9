"""Certified brackets for s(X), the LASQ defect and slice diameters."""

from absnorm import PSpace, Polyhedral, SliceQuery, lasq_defect, s_modulus, slice_diameter

for name, X in [("linf(2)", PSpace("inf", 2)), ("l2(2)", PSpace(2, 2)),
                ("hexagon", Polyhedral([[1, 0], [0.5, 0.866], [-0.5, 0.866]]))]:
    s, d = s_modulus(X), lasq_defect(X)
    print(f"{name:8s} s in [{s.s_lower:.4f}, {s.s_upper:.4f}]  "
          f"LASQ defect in [{d.lasq_defect_lower:.4f}, {d.lasq_defect_upper:.4f}]")

L1 = PSpace(1, 2)
for f in [(1, 0), (1, 1)]:
    print(f"l1(2) slice at {f}, eps 0.1: diameter in {slice_diameter(L1, SliceQuery(f, 0.1))}")
