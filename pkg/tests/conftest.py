import math

import numpy as np
import pytest
from hypothesis import strategies as st

from absnorm import INF, ONE, TWO, PNorm, Polygonal, PSpace

P1 = Polygonal(((1, 0), (0.5, 0.75), (0, 1)))
L15 = PNorm(1.5)
L3 = PNorm(3)
NORMS = {"l1": ONE, "l1.5": L15, "l2": TWO, "l3": L3, "linf": INF, "P1": P1}

L1_2 = PSpace(1, 2)
L2_2 = PSpace(2, 2)
LINF_2 = PSpace(math.inf, 2)


@pytest.fixture(params=sorted(NORMS), ids=sorted(NORMS))
def any_norm(request):
    return NORMS[request.param]


@st.composite
def inscribed_polygons(draw, max_inner=5):
    """Convex polygons inscribed in a strictly convex p-sphere."""
    p = draw(st.floats(1.2, 6.0))
    k = draw(st.integers(0, max_inner))
    angles = draw(st.lists(st.floats(0.05, math.pi / 2 - 0.05), min_size=k, max_size=k,
                           unique=True))
    angles = sorted(angles)
    pts = [(1.0, 0.0)]
    for t in angles:
        u = np.array([math.cos(t), math.sin(t)])
        u = u / np.linalg.norm(u, ord=p)
        pts.append(tuple(u))
    pts.append((0.0, 1.0))
    # drop points too close in angle for a stable normal
    clean = [pts[0]]
    for q in pts[1:]:
        if math.atan2(q[1], q[0]) - math.atan2(clean[-1][1], clean[-1][0]) > 1e-3:
            clean.append(q)
    if clean[-1] != (0.0, 1.0):
        clean[-1] = (0.0, 1.0)
    return Polygonal(tuple(clean))


def p_norms():
    return st.one_of(st.just(math.inf), st.floats(1.0, 8.0)).map(PNorm)


def absolute_norms():
    return st.one_of(p_norms(), inscribed_polygons())
