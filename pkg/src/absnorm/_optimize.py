"""Vectorised one-dimensional search routines.

Every routine works elementwise on broadcast arrays of brackets so a whole
grid of independent problems is solved with a fixed number of numpy passes.
"""

import math

import numpy as np

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_sup(pred, lo, hi, tol):
    """Largest ``x`` in ``[lo, hi]`` with ``pred(x)`` true, per element.

    ``pred`` must be true at ``lo`` and monotone (true then false).  Returns
    the last point known to satisfy ``pred``; the true supremum lies within
    ``tol`` above it.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo = lo.copy()
    hi = hi.copy()
    width = float(np.max(hi - lo)) if lo.size else 0.0
    if width <= 0.0:
        return lo
    steps = max(1, math.ceil(math.log2(width / tol)))
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        ok = pred(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def golden_max(func, lo, hi, tol=1e-15, max_iter=200):
    """Maximise a unimodal ``func`` on ``[lo, hi]`` elementwise.

    Returns ``(x, fx)``.  The endpoints are compared against the interior
    optimum at the end, so maxima sitting exactly on the bracket edge are
    returned exactly.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
    a = lo.copy()
    b = hi.copy()
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc = func(c)
    fd = func(d)
    for _ in range(max_iter):
        if float(np.max(b - a)) <= tol:
            break
        left = fc >= fd
        # keep [a, d] where f(c) >= f(d), otherwise [c, b]
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = np.where(left, b - INVPHI * (b - a), d)
        new_d = np.where(left, c, a + INVPHI * (b - a))
        fnew = func(np.where(left, new_c, new_d))
        fc, fd = np.where(left, fnew, fd), np.where(left, fc, fnew)
        c, d = new_c, new_d
    best_x = np.where(fc >= fd, c, d)
    best_f = np.maximum(fc, fd)
    for edge in (lo, hi):
        fe = func(edge)
        better = fe > best_f
        best_x = np.where(better, edge, best_x)
        best_f = np.where(better, fe, best_f)
    return best_x, best_f


def golden_min(func, lo, hi, tol=1e-15, max_iter=200):
    x, fx = golden_max(lambda s: -func(s), lo, hi, tol=tol, max_iter=max_iter)
    return x, -fx


def bracket_from_table(grid, values, maximize=True):
    """Bracket around the discrete optimum of each row of ``values``.

    ``values`` has shape ``(..., len(grid))``.  For a unimodal profile the
    continuous optimum lies between the neighbours of the discrete one.
    """
    idx = np.argmax(values, axis=-1) if maximize else np.argmin(values, axis=-1)
    n = len(grid)
    lo = grid[np.clip(idx - 1, 0, n - 1)]
    hi = grid[np.clip(idx + 1, 0, n - 1)]
    return lo, hi
