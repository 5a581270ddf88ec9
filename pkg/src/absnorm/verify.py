"""Instance checks for the structural results on absolute sums.

Each check scans one concrete instance and returns a
:class:`~absnorm.report.VerificationReport`.  A pass means that no
counterexample was found at the stated resolution.
"""

import numpy as np

from ._optimize import bisect_sup
from .constants import LASQ_TRANSFER_EPS_FRACTION, LASQ_TRANSFER_GAMMA_CAP
from .errors import InfinityNormExcluded
from .geometry import (Extreme, asq_obstruction, classify_extremes, lasq2_modulus,
                       loh3_modulus, r_of)
from .report import VerificationReport
from .sampling import sphere_cover
from .space import FSum, lasq_defect_at, m_of_x, s_modulus

LOH2_THRESHOLD = 2.0 - 1e-9
LOH2_TOL = 1e-6
BISECT_TOL = 1e-13
MAX_SUM_DIM = 4


def _pts(v):
    return [float(t) for t in np.atleast_1d(v)]


def _exclude_max_norm(F, what):
    if classify_extremes(F, 32) is Extreme.INFINITY:
        raise InfinityNormExcluded(f"{what} needs F != max-norm")


def _check_sum_dim(X, Y):
    if X.dim + Y.dim > MAX_SUM_DIM:
        raise ValueError(f"sum dimension {X.dim + Y.dim} exceeds {MAX_SUM_DIM}")


def _verdict(failed):
    return "fail" if failed else "pass"


def check_lemma_infty(F, resolution=256, tol=1e-9):
    """``F(1,1) = 1`` iff ``F`` is the max-norm; ``F(1,1) = 2`` iff it is the 1-norm.

    Both sides of each equivalence are decided independently: the left from
    ``F(1, 1)``, the right from the largest deviation on a square grid.
    """
    g = np.linspace(0.0, 1.0, resolution)
    A, B = np.meshgrid(g, g, indexing="ij")
    vals = np.asarray(F(A, B))
    f11 = F(1.0, 1.0)
    margins, failure = [], None
    for name, target, ref in (("max", 1.0, np.maximum(A, B)), ("one", 2.0, A + B)):
        dev = np.abs(vals - ref)
        worst = float(dev.max())
        lhs = abs(f11 - target) <= tol
        rhs = worst <= tol
        # how clearly both sides are settled; negated when they disagree
        gap = max(min(abs(abs(f11 - target) - tol), abs(worst - tol)), 1e-300)
        margins.append(gap if lhs == rhs else -gap)
        if lhs != rhs and failure is None:
            i, j = np.unravel_index(np.argmax(dev), dev.shape)
            failure = {"norm": name, "F11": f11, "a": g[i], "b": g[j],
                       "F": vals[i, j], "reference": ref[i, j]}
    return VerificationReport(
        claim_id="lemma-infty",
        instance={"norm": F.to_spec()},
        samples=int(vals.size),
        worst_margin=float(min(margins)),
        verdict=_verdict(failure is not None),
        counterexample=failure,
        details={"resolution": resolution, "tol": tol, "F11": f11},
    )


def check_loh2(F, samples=10_000):
    """``F(a, f(a)) = 1`` and ``F(c, f(a)) = 2`` with ``c <= 1 + a`` force
    ``c = 1 + a`` and ``a >= r_F``.

    For each sampled ``a`` the set of ``c`` in ``[0, 1 + a]`` meeting the
    threshold is an interval ending at ``1 + a`` (``F`` is monotone in
    ``c``); its left end is found by bisection, so the whole interval is
    tested rather than a grid of it.
    """
    a = np.linspace(0.0, 1.0, samples)
    b = np.asarray(F.boundary(a, BISECT_TOL))
    top = np.asarray(F(1.0 + a, b))
    hit = top >= LOH2_THRESHOLD
    r = r_of(F)
    if not np.any(hit):
        return VerificationReport(
            claim_id="lemma-loh2", instance={"norm": F.to_spec()}, samples=samples,
            worst_margin=0.0, verdict="vacuous",
            details={"threshold": LOH2_THRESHOLD, "tol": LOH2_TOL, "rF": r,
                     "qualifying": 0})
    ah, bh = a[hit], b[hit]
    below = lambda c: np.asarray(F(c, bh)) < LOH2_THRESHOLD
    start = np.zeros_like(ah)
    ok0 = np.logical_not(below(start))
    c_left = bisect_sup(below, start, 1.0 + ah, BISECT_TOL)
    # the left end of the qualifying interval, or 0 when everything qualifies
    c_left = np.where(ok0, 0.0, c_left)
    gap = LOH2_TOL - np.abs(c_left - (1.0 + ah))
    slack = ah - (r - LOH2_TOL)
    margin = np.minimum(gap, slack)
    k = int(np.argmin(margin))
    failed = margin[k] < 0
    return VerificationReport(
        claim_id="lemma-loh2",
        instance={"norm": F.to_spec()},
        samples=int(samples),
        worst_margin=float(margin[k]),
        verdict=_verdict(failed),
        counterexample={"a": ah[k], "b": bh[k], "c": c_left[k],
                        "F(c,b)": F(c_left[k], bh[k]), "rF": r} if failed else None,
        details={"threshold": LOH2_THRESHOLD, "tol": LOH2_TOL, "rF": r,
                 "qualifying": int(hit.sum())},
    )


def check_loh3(F, eps, resolution=10_000):
    """``F(a, b) = 1``, ``c <= 1 + a`` and ``F(c, b) >= 2 - delta`` force
    ``c >= 1 + r_F - eps`` for ``delta = loh3_modulus(F, eps)``.

    The scan is independent of the modulus computation: an even grid in
    ``a`` with bisection for the smallest qualifying ``c``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = r_of(F)
    delta = loh3_modulus(F, eps, r=r)
    a = np.linspace(0.0, 1.0, resolution + 1)
    b = np.asarray(F.boundary(a, BISECT_TOL))
    thr = 2.0 - delta
    hit = np.asarray(F(1.0 + a, b)) >= thr
    details = {"eps": eps, "delta": delta, "rF": r, "qualifying": int(hit.sum())}
    if not np.any(hit):
        return VerificationReport(
            claim_id="lemma-loh3", instance={"norm": F.to_spec()},
            samples=int(a.size), worst_margin=0.0, verdict="vacuous", details=details)
    ah, bh = a[hit], b[hit]
    below = lambda c: np.asarray(F(c, bh)) < thr
    start = np.zeros_like(ah)
    c_left = np.where(below(start), bisect_sup(below, start, 1.0 + ah, BISECT_TOL), 0.0)
    margin = c_left - (1.0 + r - eps)
    k = int(np.argmin(margin))
    failed = margin[k] < 0
    return VerificationReport(
        claim_id="lemma-loh3",
        instance={"norm": F.to_spec()},
        samples=int(a.size),
        worst_margin=float(margin[k]),
        verdict=_verdict(failed),
        counterexample={"a": ah[k], "b": bh[k], "c": c_left[k],
                        "F(c,b)": F(c_left[k], bh[k])} if failed else None,
        details=details,
    )


def check_prop_loh(X, Y, F, eps, resolution=None, x_resolution=64):
    """Replay the LOH transfer chain on samples, then its global contrapositive.

    Per sample: a unit ``(u, v)`` of the sum with ``F(|x +- u|, |v|) >= 2 - delta``
    for a unit ``x`` must have ``|x +- u/|u|| >= 2 r_F - eps``, where
    ``delta = loh3_modulus(F, eps/2)``.

    Globally: if the certified ``s(X)`` is below ``2 r_F - eps`` at some
    ``x``, then ``m((x, 0)) <= 2 - delta`` in the sum, so the sum is
    quantitatively not locally octahedral.
    """
    _check_sum_dim(X, Y)
    if eps <= 0:
        raise ValueError("eps must be positive")
    Z = FSum(X, Y, F)
    r = r_of(F)
    delta = loh3_modulus(F, eps / 2.0, r=r)
    bound = 2.0 * r - eps
    if resolution is None:
        resolution = {2: 2048, 3: 40_000}.get(Z.dim, 250_000)
    k = X.dim
    zs = sphere_cover(Z.norm, Z.dim, resolution).points
    xs = sphere_cover(X.norm, X.dim, x_resolution).points
    u, v = zs[:, :k], zs[:, k:]
    nu, nv = X._norm(u), Y._norm(v)

    worst, failure, qualifying = np.inf, None, 0
    for x in xs if bound > 0 else ():
        plus = np.asarray(F(X._norm(x + u), nv))
        minus = np.asarray(F(X._norm(x - u), nv))
        q = (plus >= 2.0 - delta) & (minus >= 2.0 - delta)
        if not np.any(q):
            continue
        qualifying += int(q.sum())
        with np.errstate(divide="ignore", invalid="ignore"):
            unit = u[q] / nu[q, None]
            got = np.minimum(X._norm(x + unit), X._norm(x - unit))
        got = np.where(nu[q] > 0, got, -np.inf)
        j = int(np.argmin(got))
        m = float(got[j]) - bound
        if m < worst:
            worst = m
            if m < 0 and failure is None:
                idx = np.flatnonzero(q)[j]
                failure = {"x": _pts(x), "u": _pts(u[idx]), "v": _pts(v[idx]),
                           "F(|x+u|,|v|)": float(plus[idx]),
                           "F(|x-u|,|v|)": float(minus[idx]),
                           "min |x +- u/|u||": float(got[j]), "bound": bound}

    details = {"eps": eps, "delta": delta, "rF": r, "resolution": resolution,
               "x_resolution": x_resolution, "qualifying": qualifying}
    margins = []
    if bound <= 0:
        details["chain"] = "vacuous: 2 r_F - eps <= 0"
    elif qualifying == 0:
        details["chain"] = "vacuous: no sampled (u, v) passed the 2 - delta filter"
    else:
        details["chain"] = "checked"
        margins.append(worst)

    sx = s_modulus(X)
    details["s_X"] = [sx.s_lower, sx.s_upper]
    x_worst = None
    if sx.s_upper < bound:
        xcov = sphere_cover(X.norm, X.dim, sx.resolution).points
        mx = [m_of_x(X, p, sx.resolution) for p in xcov]
        i = int(np.argmin([m[1] for m in mx]))
        if mx[i][1] < bound:
            x_worst = xcov[i]
    if x_worst is not None:
        lo, hi = m_of_x(Z, np.concatenate([x_worst, np.zeros(Y.dim)]))
        g = (2.0 - delta) - hi
        details["global"] = {"x": _pts(x_worst), "m_X": list(mx[i]),
                             "m_sum": [lo, hi], "threshold": 2.0 - delta}
        margins.append(g)
        if g < 0 and failure is None:
            failure = {"x": _pts(x_worst), "m_sum": [lo, hi],
                       "threshold": 2.0 - delta}
    else:
        details["global"] = "vacuous: s_upper(X) >= 2 r_F - eps"

    if margins:
        margin, verdict = float(min(margins)), "fail" if failure else "pass"
    else:
        margin, verdict = 0.0, "vacuous"
    return VerificationReport(
        claim_id="prop-loh",
        instance={"X": X.to_spec(), "Y": Y.to_spec(), "F": F.to_spec()},
        samples=int(len(xs) * len(zs)),
        worst_margin=margin,
        verdict=verdict,
        counterexample=failure,
        details=details,
    )


def lasq_transfer_bound(F, mu):
    """Lower bound on the sum's LASQ defect from a summand defect ``mu``."""
    return min(lasq2_modulus(F, LASQ_TRANSFER_EPS_FRACTION * mu),
               LASQ_TRANSFER_GAMMA_CAP * mu)


def check_sum_lasq_transfer(X, Y, F, mu=None, resolution=None, y_resolution=None):
    """A LASQ defect ``mu`` of ``Y`` leaves a defect ``g(mu)`` in ``X (+)_F Y``.

    The ``y`` of ``Y`` with the largest certified pointwise defect is lifted
    to ``(0, y)``; every sampled unit ``z`` of the sum must have defect at
    least ``g(mu)`` against it (see :mod:`absnorm.constants`).  With
    ``mu=None`` the certified defect of that ``y`` is used.
    """
    _exclude_max_norm(F, "the LASQ transfer")
    _check_sum_dim(X, Y)
    Z = FSum(X, Y, F)
    if y_resolution is None:
        y_resolution = {1: 2, 2: 256}.get(Y.dim, 512)
    ys = sphere_cover(Y.norm, Y.dim, y_resolution).points
    brackets = [lasq_defect_at(Y, y) for y in ys]
    i = int(np.argmax([b[0] for b in brackets]))
    y_lo = brackets[i][0]
    if mu is None:
        mu = y_lo
    details = {"mu": mu, "y": _pts(ys[i]), "y_defect": [brackets[i][0], brackets[i][1]]}
    instance = {"X": X.to_spec(), "Y": Y.to_spec(), "F": F.to_spec()}
    if not (0 < mu < 2) or y_lo < mu:
        details["note"] = "vacuous: no sampled y has certified defect >= mu"
        return VerificationReport(claim_id="sum-lasq-transfer", instance=instance,
                                  samples=len(ys), worst_margin=0.0,
                                  verdict="vacuous", details=details)
    mu = min(mu, 1.0)
    g = lasq_transfer_bound(F, mu)
    if resolution is None:
        resolution = {2: 2048, 3: 40_000}.get(Z.dim, 250_000)
    point = np.concatenate([np.zeros(X.dim), ys[i]])
    lo, sampled, z = lasq_defect_at(Z, point, resolution)
    margin = sampled - g
    failed = margin < 0
    details.update({"g": g, "sum_defect_sampled_min": sampled,
                    "sum_defect_certified": lo, "resolution": resolution})
    return VerificationReport(
        claim_id="sum-lasq-transfer",
        instance=instance,
        samples=int(resolution),
        worst_margin=float(margin),
        verdict=_verdict(failed),
        counterexample={"z": _pts(z), "defect": sampled, "g": g} if failed else None,
        details=details,
    )


def check_asq_impossible(X, Y, F, resolution=20_000, xy_resolution=128):
    """No unit ``(u, v)`` of the sum is almost square against ``(x, 0)`` and ``(0, y)``.

    With ``delta = asq_obstruction(F)`` every sampled triple must have one of
    ``F(|x +- u|, |v|)``, ``F(|u|, |y +- v|)`` above ``1 + delta``.  Since
    ``x`` and ``y`` enter separately, the minimum over triples of the largest
    of the four is ``min_z max(min_x A(x, z), min_y B(y, z))``.
    """
    _exclude_max_norm(F, "asq_impossible")
    _check_sum_dim(X, Y)
    delta = asq_obstruction(F)
    Z = FSum(X, Y, F)
    k = X.dim
    zs = sphere_cover(Z.norm, Z.dim, resolution).points
    xs = sphere_cover(X.norm, X.dim, xy_resolution).points
    ys = sphere_cover(Y.norm, Y.dim, xy_resolution).points
    u, v = zs[:, :k], zs[:, k:]
    nu, nv = X._norm(u), Y._norm(v)

    bestA = np.full(len(zs), np.inf)
    argA = np.zeros(len(zs), dtype=int)
    for j, x in enumerate(xs):
        a = np.maximum(F(X._norm(x + u), nv), F(X._norm(x - u), nv))
        better = a < bestA
        bestA = np.where(better, a, bestA)
        argA = np.where(better, j, argA)
    bestB = np.full(len(zs), np.inf)
    argB = np.zeros(len(zs), dtype=int)
    for j, y in enumerate(ys):
        b = np.maximum(F(nu, Y._norm(y + v)), F(nu, Y._norm(y - v)))
        better = b < bestB
        bestB = np.where(better, b, bestB)
        argB = np.where(better, j, argB)
    worst = np.maximum(bestA, bestB)
    i = int(np.argmin(worst))
    margin = float(worst[i]) - (1.0 + delta)
    failed = margin < 0
    return VerificationReport(
        claim_id="asq-impossible",
        instance={"X": X.to_spec(), "Y": Y.to_spec(), "F": F.to_spec()},
        samples=int(len(zs) * len(xs) * len(ys)),
        worst_margin=margin,
        verdict=_verdict(failed),
        counterexample={"x": _pts(xs[argA[i]]), "y": _pts(ys[argB[i]]),
                        "u": _pts(u[i]), "v": _pts(v[i]),
                        "max_quantity": float(worst[i]), "delta": delta} if failed else None,
        details={"delta": delta, "resolution": resolution,
                 "xy_resolution": xy_resolution, "min_max_quantity": float(worst[i])},
    )
