"""Absolute normalised norms on the plane.

A norm ``F`` on R^2 is *absolute* when ``F(a, b) = F(|a|, |b|)`` and
*normalised* when ``F(1, 0) = F(0, 1) = 1``.  All representations here are
immutable; evaluation is vectorised over numpy arrays and always works on
magnitudes, so absoluteness holds by construction.

Representations
---------------
PNorm       closed-form p-norms, ``p = inf`` kept as an exact tag
Polygonal   first-quadrant arc of a polygonal unit sphere
Swapped     ``F~(a, b) = F(b, a)``
DualNumeric ``F*(c, d) = max_t c*t + d*f(t)`` with ``f`` the boundary curve
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._optimize import bisect_sup, bracket_from_table, golden_max, golden_min
from .errors import SpecError
from .report import VerificationReport

DEFAULT_TOL = 1e-9


def _mags(a, b):
    a = np.abs(np.asarray(a, dtype=float))
    b = np.abs(np.asarray(b, dtype=float))
    return np.broadcast_arrays(a, b)


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


class AbsoluteNorm:
    """Base class; subclasses implement ``_eval`` on non-negative arrays."""

    def __call__(self, a, b):
        a, b = _mags(a, b)
        return _scalar(self._eval(a, b))

    def _eval(self, a, b):
        raise NotImplementedError

    def boundary(self, t, tol=DEFAULT_TOL):
        """``f(t) = sup{b in [0, 1] : F(t, b) <= 1}`` by bisection."""
        t = np.abs(np.asarray(t, dtype=float))
        if np.any(t > 1.0):
            raise ValueError("boundary curve is defined on [-1, 1]")

        def feasible(b):
            return self._eval(*np.broadcast_arrays(t, b)) <= 1.0

        full = self._eval(*np.broadcast_arrays(t, np.ones_like(t))) <= 1.0
        out = bisect_sup(feasible, np.zeros_like(t), np.ones_like(t), tol)
        return _scalar(np.where(full, 1.0, out))

    def to_spec(self):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()!r})"


@dataclass(frozen=True, repr=False)
class PNorm(AbsoluteNorm):
    p: float

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1.0:
            raise SpecError(f"p must satisfy 1 <= p <= inf, got {self.p!r}", "p")
        object.__setattr__(self, "p", p)

    def _eval(self, a, b):
        p = self.p
        if p == 1.0:
            return a + b
        if math.isinf(p):
            return np.maximum(a, b)
        m = np.maximum(a, b)
        safe = np.where(m > 0, m, 1.0)
        return m * ((a / safe) ** p + (b / safe) ** p) ** (1.0 / p)

    def boundary(self, t, tol=DEFAULT_TOL):
        t = np.abs(np.asarray(t, dtype=float))
        if np.any(t > 1.0):
            raise ValueError("boundary curve is defined on [-1, 1]")
        if math.isinf(self.p):
            return _scalar(np.ones_like(t))
        return _scalar(np.maximum(1.0 - t**self.p, 0.0) ** (1.0 / self.p))

    def to_spec(self):
        return {"type": "p", "p": "inf" if math.isinf(self.p) else self.p}


@dataclass(frozen=True, repr=False)
class Polygonal(AbsoluteNorm):
    """Norm whose unit sphere is a polygon.

    ``vertices`` lists the closed first-quadrant arc from ``(1, 0)`` to
    ``(0, 1)`` with strictly increasing polar angle.  Convexity is *not*
    enforced here; :func:`validate` reports non-convex input.
    """

    vertices: tuple
    _angles: np.ndarray = field(init=False, compare=False)
    _normals: np.ndarray = field(init=False, compare=False)

    def __post_init__(self):
        try:
            verts = np.array(self.vertices, dtype=float)
        except (TypeError, ValueError) as exc:
            raise SpecError(f"not a list of points: {exc}", "vertices") from None
        if verts.ndim != 2 or verts.shape[1] != 2 or len(verts) < 2:
            raise SpecError("need at least two (a, b) pairs", "vertices")
        if np.any(verts < 0) or not np.all(np.isfinite(verts)):
            raise SpecError("vertices must be finite and non-negative", "vertices")
        if not (np.allclose(verts[0], (1, 0), atol=1e-12)
                and np.allclose(verts[-1], (0, 1), atol=1e-12)):
            raise SpecError("arc must start at (1,0) and end at (0,1)", "vertices")
        verts[0] = (1.0, 0.0)
        verts[-1] = (0.0, 1.0)
        if np.any(np.diff(verts[:, 0]) > 0):
            raise SpecError("first coordinates must be non-increasing", "vertices")
        angles = np.arctan2(verts[:, 1], verts[:, 0])
        if np.any(np.diff(angles) <= 0):
            raise SpecError("polar angles must strictly increase", "vertices")
        p, q = verts[:-1], verts[1:]
        det = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
        # edge normal n with n.p = n.q = 1
        normals = np.stack([(q[:, 1] - p[:, 1]) / det, (p[:, 0] - q[:, 0]) / det], axis=1)
        object.__setattr__(self, "vertices", tuple(map(tuple, verts.tolist())))
        object.__setattr__(self, "_angles", angles)
        object.__setattr__(self, "_normals", normals)

    @property
    def array(self):
        return np.array(self.vertices)

    @property
    def normals(self):
        """Supporting functional of each first-quadrant edge."""
        return self._normals.copy()

    def _eval(self, a, b):
        phi = np.arctan2(b, a)
        idx = np.searchsorted(self._angles, phi, side="right") - 1
        idx = np.clip(idx, 0, len(self._normals) - 1)
        n = self._normals[idx]
        return n[..., 0] * a + n[..., 1] * b

    def boundary(self, t, tol=DEFAULT_TOL):
        t = np.abs(np.asarray(t, dtype=float))
        if np.any(t > 1.0):
            raise ValueError("boundary curve is defined on [-1, 1]")
        v = self.array
        at_one = v[v[:, 0] == 1.0]
        f1 = at_one[:, 1].max()
        rest = v[v[:, 0] < 1.0][::-1]
        xs = np.concatenate([rest[:, 0], [1.0]])
        ys = np.concatenate([rest[:, 1], [f1]])
        out = np.interp(t, xs, ys)
        return _scalar(np.where(t == 1.0, f1, out))

    def to_spec(self):
        return {"type": "polygon", "vertices": [list(v) for v in self.vertices]}


@dataclass(frozen=True, repr=False)
class Swapped(AbsoluteNorm):
    inner: AbsoluteNorm

    def _eval(self, a, b):
        return self.inner._eval(b, a)

    def to_spec(self):
        return {"type": "swap", "inner": self.inner.to_spec()}


@dataclass(frozen=True, repr=False)
class DualNumeric(AbsoluteNorm):
    """Dual norm of ``inner`` evaluated by concave maximisation.

    The inner boundary curve is tabulated at ``resolution + 1`` nodes; each
    evaluation brackets the maximiser between the neighbours of the best
    node and polishes it with golden-section search.
    """

    inner: AbsoluteNorm
    resolution: int = 256
    _grid: np.ndarray = field(init=False, compare=False)
    _table: np.ndarray = field(init=False, compare=False)

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 8:
            raise SpecError("resolution must be an integer >= 8", "resolution")
        grid = np.linspace(0.0, 1.0, int(self.resolution) + 1)
        table = np.asarray(self.inner.boundary(grid, tol=1e-15), dtype=float)
        object.__setattr__(self, "_grid", grid)
        object.__setattr__(self, "_table", table)

    def _inner_f(self, s):
        return np.asarray(self.inner.boundary(np.clip(s, 0.0, 1.0), tol=1e-15))

    def _eval(self, c, d):
        shape = c.shape
        c = c.ravel()
        d = d.ravel()
        table = c[:, None] * self._grid + d[:, None] * self._table
        lo, hi = bracket_from_table(self._grid, table)
        _, best = golden_max(lambda s: c * s + d * self._inner_f(s), lo, hi)
        return np.maximum(best, table.max(axis=1)).reshape(shape)

    def boundary(self, t, tol=DEFAULT_TOL):
        # f*(t) = inf_s (1 - t s) / f(s); quasi-convex in s because f is concave
        t = np.abs(np.asarray(t, dtype=float))
        if np.any(t > 1.0):
            raise ValueError("boundary curve is defined on [-1, 1]")
        shape = t.shape
        tt = t.ravel()

        def ratio(num, f):
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.where(f > 0, num / np.where(f > 0, f, 1.0), np.inf)

        table = ratio(1.0 - tt[:, None] * self._grid, self._table)
        lo, hi = bracket_from_table(self._grid, table, maximize=False)
        _, best = golden_min(lambda s: ratio(1.0 - tt * s, self._inner_f(s)), lo, hi)
        best = np.minimum(best, table.min(axis=1))
        return _scalar(np.clip(best, 0.0, 1.0).reshape(shape))

    def to_spec(self):
        return {"type": "dual", "inner": self.inner.to_spec(),
                "resolution": int(self.resolution)}


ONE = PNorm(1)
TWO = PNorm(2)
INF = PNorm(math.inf)


def evaluate(F, a, b):
    """``F(|a|, |b|)``; broadcasts over arrays."""
    return F(a, b)


def boundary(F, t, tol=DEFAULT_TOL):
    """Upper boundary curve ``f(t)`` with ``F(t, f(t)) = 1``.

    At ``|t| = 1`` the continuous extension ``sup{b : F(1, b) <= 1}`` is
    returned.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    return F.boundary(t, tol)


def swap(F):
    """The norm ``(a, b) -> F(b, a)``."""
    return Swapped(F)


def as_polygon(F):
    """Exact polygonal form of ``F`` if it has one, else ``None``."""
    if isinstance(F, Polygonal):
        return F
    if isinstance(F, PNorm) and F.p == 1.0:
        return Polygonal(((1, 0), (0, 1)))
    if isinstance(F, PNorm) and math.isinf(F.p):
        return Polygonal(((1, 0), (1, 1), (0, 1)))
    if isinstance(F, Swapped):
        inner = as_polygon(F.inner)
        if inner is not None:
            return Polygonal(tuple((b, a) for a, b in reversed(inner.vertices)))
    return None


def sphere_arc(F, n):
    """``n + 1`` points of the closed first-quadrant unit-sphere arc.

    Directions are equally spaced in angle and scaled radially, so every
    point is exactly on the sphere up to rounding.  Endpoints are exactly
    ``(1, 0)`` and ``(0, 1)``.
    """
    theta = np.linspace(0.0, np.pi / 2, n + 1)
    ca, sb = np.cos(theta), np.sin(theta)
    ca[-1], sb[-1] = 0.0, 1.0
    r = np.asarray(F(ca, sb))
    return ca / r, sb / r


def validate(F, resolution=64, tol=1e-9):
    """Sample the basic facts every absolute normalised norm satisfies.

    Checks normalisation, ``max(|a|,|b|) <= F <= |a|+|b|``, coordinatewise
    monotonicity on a grid of ``[0, 1]^2`` and the midpoint inequality on
    pairs of sampled sphere points.  Returns a failing report (never raises)
    listing the worst violation.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    g = np.linspace(0.0, 1.0, resolution)
    A, B = np.meshgrid(g, g, indexing="ij")
    vals = np.asarray(F(A, B))
    checks = {}

    norm_err = max(abs(F(1.0, 0.0) - 1.0), abs(F(0.0, 1.0) - 1.0))
    checks["normalised"] = (tol - norm_err, {"F(1,0)": F(1.0, 0.0), "F(0,1)": F(0.0, 1.0)})

    scale = np.maximum(A + B, 1.0)
    low = vals - np.maximum(A, B) + tol * scale
    high = A + B - vals + tol * scale
    sand = np.minimum(low, high)
    i, j = np.unravel_index(np.argmin(sand), sand.shape)
    checks["sandwich"] = (float(sand[i, j]),
                          {"a": g[i], "b": g[j], "F": float(vals[i, j])})

    da = vals[1:, :] - vals[:-1, :] + tol
    db = vals[:, 1:] - vals[:, :-1] + tol
    ia = np.unravel_index(np.argmin(da), da.shape)
    ib = np.unravel_index(np.argmin(db), db.shape)
    if da[ia] <= db[ib]:
        mono = (float(da[ia]), {"a": g[ia[0]], "a_next": g[ia[0] + 1], "b": g[ia[1]]})
    else:
        mono = (float(db[ib]), {"a": g[ib[0]], "b": g[ib[1]], "b_next": g[ib[1] + 1]})
    checks["monotone"] = mono

    theta = np.linspace(0.0, 2 * np.pi, 4 * resolution, endpoint=False)
    ca, sb = np.cos(theta), np.sin(theta)
    r = np.asarray(F(ca, sb))
    px, py = ca / r, sb / r
    mx = 0.5 * (px[:, None] + px[None, :])
    my = 0.5 * (py[:, None] + py[None, :])
    conv = 1.0 + tol - np.asarray(F(mx, my))
    k, m = np.unravel_index(np.argmin(conv), conv.shape)
    checks["convex"] = (float(conv[k, m]),
                        {"p": [px[k], py[k]], "q": [px[m], py[m]],
                         "F(midpoint)": float(1.0 + tol - conv[k, m])})

    worst_name = min(checks, key=lambda name: checks[name][0])
    worst, witness = checks[worst_name]
    failed = worst < 0
    return VerificationReport(
        claim_id="norm-facts",
        instance={"norm": F.to_spec()},
        samples=int(vals.size + conv.size),
        worst_margin=float(worst),
        verdict="fail" if failed else "pass",
        counterexample={"check": worst_name, **witness} if failed else None,
        details={"resolution": resolution, "tol": tol,
                 "margins": {name: float(v[0]) for name, v in checks.items()}},
    )
