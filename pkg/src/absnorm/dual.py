"""Dual absolute norms.

For ``c, d >= 0`` the dual is ``F*(c, d) = max_{t in [0,1]} c*t + d*f(t)``
with ``f`` the upper boundary curve of ``F``.  Polygons dualise exactly:
the vertices of the dual arc are the edge functionals of the primal arc
together with the two axis points.
"""

import numpy as np

from .geometry import EQ_TAU, is_sc_point, r_of
from .norm2 import DualNumeric, Polygonal, as_polygon, sphere_arc
from .report import VerificationReport

SMOOTH_STEP = 1e-6
SMOOTH_TOL = 1e-3


def _polygon_dual(P):
    pts = [(1.0, 0.0)] + [tuple(n) for n in P.normals] + [(0.0, 1.0)]
    out = []
    for p in pts:
        if out and np.allclose(p, out[-1], atol=1e-12):
            continue
        out.append(p)
    # drop collinear middle points so every listed vertex is a corner
    keep = [out[0]]
    for k in range(1, len(out) - 1):
        a, b, c = np.array(keep[-1]), np.array(out[k]), np.array(out[k + 1])
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(cross) > 1e-12:
            keep.append(out[k])
    keep.append(out[-1])
    return Polygonal(tuple(keep))


def dual(F, resolution=256):
    """The dual norm ``F*``: exact for polygons, numeric otherwise."""
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    P = as_polygon(F)
    if P is not None:
        return _polygon_dual(P)
    return DualNumeric(F, resolution)


def bidual_check(F, resolution=256, tol=1e-6, grid=101):
    """Compare ``F**`` with ``F`` on a ``grid x grid`` lattice of ``[0,1]^2``."""
    G = dual(dual(F, resolution), resolution)
    g = np.linspace(0.0, 1.0, grid)
    A, B = np.meshgrid(g, g, indexing="ij")
    dev = np.abs(np.asarray(G(A, B)) - np.asarray(F(A, B)))
    i, j = np.unravel_index(np.argmax(dev), dev.shape)
    worst = float(dev[i, j])
    failed = worst > tol
    return VerificationReport(
        claim_id="bidual",
        instance={"norm": F.to_spec()},
        samples=int(dev.size),
        worst_margin=tol - worst,
        verdict="fail" if failed else "pass",
        counterexample={"a": g[i], "b": g[j], "F": F(g[i], g[j]),
                        "F**": G(g[i], g[j])} if failed else None,
        details={"resolution": resolution, "tol": tol, "max_deviation": worst},
    )


def smooth_at(F, points, step=SMOOTH_STEP, tol=SMOOTH_TOL):
    """One-sided tangential difference quotients of ``F`` agree at each point."""
    x, y = (np.asarray(p, dtype=float) for p in points)
    wx, wy = -y, x
    f0 = np.asarray(F(x, y))
    fwd = (np.asarray(F(x + step * wx, y + step * wy)) - f0) / step
    bwd = (f0 - np.asarray(F(x - step * wx, y - step * wy))) / step
    return np.abs(fwd - bwd) <= tol


def duality_chain_check(F, resolution=256, samples=32, tol=1e-6):
    """Smooth ``F`` has strictly convex dual; strictly convex ``F`` has r_F = 1.

    Both implications are tested on ``samples + 1`` arc points, plus the
    vertices when ``F`` is polygonal.  An unmet
    hypothesis is recorded and the corresponding implication passes
    vacuously.
    """
    a, b = sphere_arc(F, samples)
    poly = as_polygon(F)
    if poly is not None:
        # vertices are the only candidate kinks and rarely land on the arc grid
        v = np.array(poly.vertices, dtype=float)
        a, b = np.concatenate([a, v[:, 0]]), np.concatenate([b, v[:, 1]])
    smooth = smooth_at(F, (a, b))
    notes = {}
    margins = []
    failure = None

    if np.all(smooth):
        D = dual(F, resolution)
        da, db = sphere_arc(D, samples)
        sc = [is_sc_point(D, (p, q)) for p, q in zip(da, db)]
        notes["smooth"] = "hypothesis met"
        notes["dual_sc_points"] = int(sum(sc))
        margins.append(1.0 if all(sc) else -1.0)
        if not all(sc):
            k = sc.index(False)
            failure = {"implication": "smooth => dual strictly convex",
                       "dual_point": [da[k], db[k]]}
    else:
        k = int(np.argmin(smooth))
        notes["smooth"] = f"hypothesis not met: kink near ({a[k]:.6g}, {b[k]:.6g})"

    sc_primal = [is_sc_point(F, (p, q)) for p, q in zip(a, b)]
    if all(sc_primal):
        r = r_of(F, tol)
        notes["strictly_convex"] = "hypothesis met"
        notes["rF"] = r
        margins.append(tol - abs(r - 1.0))
        if abs(r - 1.0) > tol and failure is None:
            failure = {"implication": "strictly convex => r_F = 1", "rF": r}
    else:
        notes["strictly_convex"] = "hypothesis not met"

    if failure is not None:
        verdict = "fail"
    elif margins:
        verdict = "pass"
    else:
        verdict = "vacuous"
    return VerificationReport(
        claim_id="duality-chain",
        instance={"norm": F.to_spec()},
        samples=int(len(a)),
        worst_margin=float(min(margins)) if margins else 0.0,
        verdict=verdict,
        counterexample=failure,
        details={"resolution": resolution, "tol": tol, "tau": EQ_TAU, **notes},
    )
