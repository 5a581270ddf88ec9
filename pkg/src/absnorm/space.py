"""Finite-dimensional normed spaces and certified sphere moduli.

Every modulus here is a sup or inf over unit spheres of a function that is
1-Lipschitz in each argument.  Sampling the sphere with a cover of mesh
``h`` therefore gives a two-sided bracket; see :mod:`absnorm.sampling`.
Brackets are certified for ``dim <= 4``.  Above that the upper end is
replaced by the trivial bound and a :class:`CertificationUnavailable`
warning is emitted.
"""

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .errors import (CertificationUnavailable, DimensionMismatch, EmptySample,
                     SpecError)
from .norm2 import AbsoluteNorm
from .sampling import sphere_cover

LIPSCHITZ = 2.0
MAX_CERTIFIED_DIM = 4
DEFAULT_RESOLUTION = {1: 2, 2: 2048, 3: 40_000, 4: 250_000}
DEFAULT_X_RESOLUTION = {1: 2, 2: 2048, 3: 512, 4: 512}
_CHUNK = 1 << 22


class FiniteSpace:
    """A norm on R^dim; ``norm`` acts on the last axis of an array."""

    dim: int

    def norm(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dim:
            raise DimensionMismatch(f"expected vectors of length {self.dim}, got {x.shape[-1]}")
        return self._norm(x)

    def __call__(self, x):
        out = self.norm(x)
        return float(out) if np.ndim(out) == 0 else out

    def extreme_points(self):
        """Extreme points of the unit ball, or ``None`` if not finite/known."""
        return None

    def dual_norm(self, f):
        raise NotImplementedError

    def to_spec(self):
        raise NotImplementedError


@dataclass(frozen=True)
class PSpace(FiniteSpace):
    p: float
    dim: int

    def __post_init__(self):
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise SpecError(f"p must satisfy 1 <= p <= inf, got {self.p!r}", "p")
        if int(self.dim) != self.dim or self.dim < 1:
            raise SpecError("dim must be a positive integer", "dim")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "dim", int(self.dim))

    def _norm(self, x):
        return np.linalg.norm(x, ord=self.p, axis=-1)

    def extreme_points(self):
        if self.p == 1.0:
            eye = np.eye(self.dim)
            return np.concatenate([eye, -eye])
        if math.isinf(self.p):
            return np.array(list(itertools.product((-1.0, 1.0), repeat=self.dim)))
        return None

    def dual_norm(self, f):
        f = np.asarray(f, dtype=float)
        if self.p == 1.0:
            q = math.inf
        elif math.isinf(self.p):
            q = 1.0
        else:
            q = self.p / (self.p - 1.0)
        return float(np.linalg.norm(f, ord=q))

    def to_spec(self):
        return {"type": "p", "p": "inf" if math.isinf(self.p) else self.p, "dim": self.dim}


@dataclass(frozen=True)
class Polyhedral(FiniteSpace):
    """``|x| = max_i |g_i . x|`` for functionals ``g_i`` spanning the dual."""

    functionals: tuple
    dim: int = field(init=False)

    def __post_init__(self):
        try:
            G = np.array(self.functionals, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("functionals must be a list of equal-length vectors",
                            "functionals") from None
        if G.ndim != 2 or len(G) == 0 or not np.all(np.isfinite(G)):
            raise SpecError("functionals must be a non-empty matrix", "functionals")
        if np.linalg.matrix_rank(G) < G.shape[1]:
            raise SpecError("functionals do not span; this is only a seminorm",
                            "functionals")
        object.__setattr__(self, "functionals", tuple(map(tuple, G.tolist())))
        object.__setattr__(self, "dim", G.shape[1])

    @property
    def matrix(self):
        return np.array(self.functionals)

    def _norm(self, x):
        return np.max(np.abs(x @ self.matrix.T), axis=-1)

    def extreme_points(self):
        G = self.matrix
        halfspaces = np.concatenate([G, -G])
        verts = []
        for rows in itertools.combinations(range(len(halfspaces)), self.dim):
            A = halfspaces[list(rows)]
            if abs(np.linalg.det(A)) < 1e-12:
                continue
            v = np.linalg.solve(A, np.ones(self.dim))
            if np.all(halfspaces @ v <= 1.0 + 1e-9):
                verts.append(v)
        verts = np.unique(np.round(np.array(verts), 12), axis=0)
        return verts

    def dual_norm(self, f):
        G = self.matrix
        A = np.concatenate([G, -G])
        res = linprog(-np.asarray(f, float), A_ub=A, b_ub=np.ones(len(A)),
                      bounds=[(None, None)] * self.dim, method="highs")
        return float(-res.fun)

    def to_spec(self):
        return {"type": "polyhedral", "functionals": [list(g) for g in self.functionals]}


@dataclass(frozen=True)
class FSum(FiniteSpace):
    """Absolute sum ``left (+)_F right`` with norm ``F(|x|, |y|)``."""

    left: FiniteSpace
    right: FiniteSpace
    F: AbsoluteNorm
    dim: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dim", self.left.dim + self.right.dim)

    def _norm(self, x):
        k = self.left.dim
        return np.asarray(self.F(self.left._norm(x[..., :k]), self.right._norm(x[..., k:])))

    def dual_norm(self, f):
        from .dual import dual

        f = np.asarray(f, dtype=float)
        k = self.left.dim
        return float(dual(self.F)(self.left.dual_norm(f[:k]), self.right.dual_norm(f[k:])))

    def to_spec(self):
        return {"type": "fsum", "left": self.left.to_spec(),
                "right": self.right.to_spec(), "F": self.F.to_spec()}


@dataclass(frozen=True)
class ImageSpace(FiniteSpace):
    """R^dim normed by ``|y| = |T^{-1} y|_base``, so ``T`` is an isometry onto it."""

    base: FiniteSpace
    matrix: tuple
    dim: int = field(init=False)
    _inverse: np.ndarray = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        from .errors import SingularMatrix

        T = np.array(self.matrix, dtype=float)
        if T.shape != (self.base.dim, self.base.dim):
            raise DimensionMismatch("matrix shape must match the base dimension")
        if abs(np.linalg.det(T)) < 1e-12 or np.linalg.cond(T) > 1e12:
            raise SingularMatrix("matrix is not invertible")
        object.__setattr__(self, "matrix", tuple(map(tuple, T.tolist())))
        object.__setattr__(self, "dim", self.base.dim)
        object.__setattr__(self, "_inverse", np.linalg.inv(T))

    def _norm(self, y):
        return self.base._norm(y @ self._inverse.T)

    def extreme_points(self):
        ext = self.base.extreme_points()
        return None if ext is None else ext @ np.array(self.matrix).T

    def dual_norm(self, f):
        return self.base.dual_norm(np.array(self.matrix).T @ np.asarray(f, float))

    def to_spec(self):
        return {"type": "image", "base": self.base.to_spec(),
                "matrix": [list(r) for r in self.matrix]}


@dataclass(frozen=True)
class ModuliReport:
    """Certified brackets of ``s(X)`` and the LASQ defect.

    Fields for the modulus that was not computed are ``None``.
    ``lipschitz_margin`` is the total slack added to the sampled values.
    """

    s_lower: float = None
    s_upper: float = None
    lasq_defect_lower: float = None
    lasq_defect_upper: float = None
    resolution: int = 0
    x_resolution: int = 0
    lipschitz_margin: float = 0.0
    certified: bool = True

    def to_dict(self):
        return dict(self.__dict__)


def norm(X, x):
    """The norm of ``x`` in ``X``."""
    return X(x)


def _resolutions(X, resolution, x_resolution):
    if resolution is None:
        resolution = DEFAULT_RESOLUTION.get(X.dim, 250_000)
    if x_resolution is None:
        x_resolution = DEFAULT_X_RESOLUTION.get(X.dim, 512) if X.dim != 2 else resolution
    return int(resolution), int(x_resolution)


def _cover(X, n):
    cover = sphere_cover(X.norm, X.dim, n)
    if X.dim > MAX_CERTIFIED_DIM:
        warnings.warn(f"dim {X.dim} > {MAX_CERTIFIED_DIM}: sampling-only estimate",
                      CertificationUnavailable, stacklevel=3)
    return cover


def _certified(X):
    return X.dim <= MAX_CERTIFIED_DIM


def _pairwise(X, xs, ys, reduce_y, combine):
    """Row reductions of ``combine(|x_i + y_j|, |x_i - y_j|)`` over ``j``."""
    out = np.empty(len(xs))
    arg = np.empty(len(xs), dtype=int)
    step = max(1, _CHUNK // max(1, len(ys) * X.dim))
    for start in range(0, len(xs), step):
        x = xs[start:start + step, None, :]
        vals = combine(X._norm(x + ys[None]), X._norm(x - ys[None]))
        if reduce_y == "max":
            idx = np.argmax(vals, axis=1)
        else:
            idx = np.argmin(vals, axis=1)
        out[start:start + step] = np.take_along_axis(vals, idx[:, None], axis=1)[:, 0]
        arg[start:start + step] = idx
    return out, arg


def _check_unit(X, x, tol=1e-6):
    x = np.asarray(x, dtype=float)
    if abs(X(x) - 1.0) > tol:
        raise ValueError(f"vector {x.tolist()} is not on the unit sphere")
    return x


def _m_values(X, xs, ys):
    return _pairwise(X, xs, ys, "max", np.minimum)


def m_of_x(X, x, resolution=None):
    """Bracket ``m(x) = sup_{|y|=1} min(|x + y|, |x - y|)``.

    Returns ``(lo, hi)`` with ``lo`` the best sampled value and
    ``hi = lo + 2 h``.
    """
    resolution, _ = _resolutions(X, resolution, None)
    x = _check_unit(X, x)
    cover = _cover(X, resolution)
    lo, _ = _m_values(X, x[None], cover.points)
    lo = float(lo[0])
    hi = min(2.0, lo + LIPSCHITZ * cover.mesh) if _certified(X) else 2.0
    return lo, hi


def _strided_levels(n, min_points=64):
    strides = [1]
    while n % (2 * strides[-1]) == 0 and n // (2 * strides[-1]) >= min_points:
        strides.append(2 * strides[-1])
    return strides


def s_modulus(X, resolution=None, x_resolution=None):
    """Certified bracket of ``s(X) = inf_{|x|=1} m(x)``.

    ``m`` is 1-Lipschitz in ``x``, so ``s >= min_i lo_i - h_x`` and
    ``s <= min_i hi_i``.  In dimension 2 the bracket is intersected over the
    nested sub-grids of strides 1, 2, 4, ... so refining the resolution by
    doubling never loosens it.
    """
    if X.dim == 1:
        return ModuliReport(s_lower=0.0, s_upper=0.0, resolution=2, x_resolution=2)
    resolution, x_resolution = _resolutions(X, resolution, x_resolution)
    ycov = _cover(X, resolution)
    certified = _certified(X)
    if X.dim == 2 and x_resolution == resolution:
        pts = ycov.points
        n = len(pts)
        V = np.empty((n, n))
        step = max(1, _CHUNK // (n * 2))
        for start in range(0, n, step):
            x = pts[start:start + step, None, :]
            V[start:start + step] = np.minimum(X._norm(x + pts[None]), X._norm(x - pts[None]))
        lower, upper, margin = -np.inf, np.inf, None
        for s in _strided_levels(n):
            sub = pts[::s]
            h = float(np.max(X._norm(sub - np.roll(sub, -1, axis=0))))
            lo = V[::s, ::s].max(axis=1)
            lower = max(lower, float(lo.min()) - h)
            upper = min(upper, float(lo.min()) + LIPSCHITZ * h)
            if margin is None:
                margin = h + LIPSCHITZ * h
    else:
        xcov = _cover(X, x_resolution)
        lo, _ = _m_values(X, xcov.points, ycov.points)
        lower = float(lo.min()) - xcov.mesh
        upper = float(lo.min()) + LIPSCHITZ * ycov.mesh
        margin = xcov.mesh + LIPSCHITZ * ycov.mesh
    if not certified:
        lower, upper = 0.0, 2.0
    return ModuliReport(s_lower=max(0.0, lower), s_upper=min(2.0, upper),
                        resolution=resolution, x_resolution=x_resolution,
                        lipschitz_margin=float(margin), certified=certified)


def _defect(p, m):
    return np.maximum(np.abs(p - 1.0), np.abs(m - 1.0))


def lasq_defect_at(X, x, resolution=None):
    """Bracket of ``inf_{|y|=1} max(| |x+y| - 1 |, | |x-y| - 1 |)`` at one ``x``.

    Returns ``(lo, hi, y_best)``.
    """
    resolution, _ = _resolutions(X, resolution, None)
    x = _check_unit(X, x)
    cover = _cover(X, resolution)
    hi, idx = _pairwise(X, x[None], cover.points, "min", _defect)
    hi = float(hi[0])
    lo = max(0.0, hi - LIPSCHITZ * cover.mesh) if _certified(X) else 0.0
    return lo, hi, cover.points[idx[0]]


def lasq_defect(X, resolution=None, x_resolution=None):
    """Certified bracket of ``sup_x inf_y max(| |x+y| - 1 |, | |x-y| - 1 |)``.

    Zero is the finite-dimensional shadow of local almost squareness.
    """
    resolution, x_resolution = _resolutions(X, resolution, x_resolution)
    ycov = _cover(X, resolution)
    xcov = ycov if x_resolution == resolution else _cover(X, x_resolution)
    inner, _ = _pairwise(X, xcov.points, ycov.points, "min", _defect)
    lower = max(0.0, float(inner.max()) - LIPSCHITZ * ycov.mesh)
    upper = float(inner.max()) + xcov.mesh
    certified = _certified(X)
    if not certified:
        lower = 0.0
    return ModuliReport(lasq_defect_lower=lower, lasq_defect_upper=upper,
                        resolution=resolution, x_resolution=x_resolution,
                        lipschitz_margin=float(xcov.mesh + LIPSCHITZ * ycov.mesh),
                        certified=certified)


def oh_radius(X, points, resolution=None):
    """Bracket ``sup_{|y|=1} min_i |x_i + y|`` for unit vectors ``x_i``."""
    resolution, _ = _resolutions(X, resolution, None)
    xs = np.array([_check_unit(X, p) for p in points])
    cover = _cover(X, resolution)
    vals = np.min(X._norm(xs[:, None, :] + cover.points[None]), axis=0)
    lo = float(vals.max())
    hi = min(2.0, lo + LIPSCHITZ * cover.mesh) if _certified(X) else 2.0
    return lo, hi


@dataclass(frozen=True)
class SliceQuery:
    functional: tuple
    eps: float

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        object.__setattr__(self, "functional", tuple(float(v) for v in self.functional))


def _max_pair_distance(X, pts):
    best = 0.0
    step = max(1, _CHUNK // max(1, len(pts) * X.dim))
    for start in range(0, len(pts), step):
        d = X._norm(pts[start:start + step, None, :] - pts[None])
        best = max(best, float(d.max()))
    return best


def slice_diameter(X, q, resolution=None, tol=1e-6):
    """Bracket the diameter of ``{z in B_X : f(z) > 1 - eps}``.

    The closure of the slice is the convex hull of its points on the unit
    sphere, so the diameter is a max over pairs of sphere points.  Samples
    strictly inside the slice give the lower end; samples inside the slice
    enlarged by the mesh, plus ``2 h``, give the upper end.
    """
    resolution, _ = _resolutions(X, resolution, None)
    f = np.asarray(q.functional, dtype=float)
    if len(f) != X.dim:
        raise DimensionMismatch("functional length must equal dim")
    dn = X.dual_norm(f)
    if abs(dn - 1.0) > tol:
        raise ValueError(f"functional has dual norm {dn!r}, expected 1")
    cover = _cover(X, resolution)
    level = 1.0 - q.eps
    vals = cover.points @ f
    inside = cover.points[vals > level]
    if len(inside) == 0:
        raise EmptySample("no sample in the slice; raise the resolution")
    if X.dim == 2:
        # closure points where the sphere crosses the hyperplane f = 1 - eps
        pts = np.concatenate([inside, _arc_crossings(X, cover.points, f, level)])
        lo = _max_pair_distance(X, pts)
        return lo, min(2.0, lo + 2.0 * cover.mesh)
    near = cover.points[vals >= level - cover.mesh]
    lo = _max_pair_distance(X, inside)
    hi = min(2.0, _max_pair_distance(X, near) + 2.0 * cover.mesh) if _certified(X) else 2.0
    return lo, hi


def _arc_crossings(X, pts, f, level, steps=60):
    nxt = np.roll(pts, -1, axis=0)
    above = pts @ f > level
    change = above != (nxt @ f > level)
    if not np.any(change):
        return np.empty((0, 2))
    t0 = np.arctan2(pts[change, 1], pts[change, 0])
    t1 = np.arctan2(nxt[change, 1], nxt[change, 0])
    t1 = np.where(t1 < t0, t1 + 2 * np.pi, t1)
    up0 = above[change]

    def point(t):
        u = np.stack([np.cos(t), np.sin(t)], axis=1)
        return u / X._norm(u)[:, None]

    for _ in range(steps):
        mid = 0.5 * (t0 + t1)
        same = (point(mid) @ f > level) == up0
        t0 = np.where(same, mid, t0)
        t1 = np.where(same, t1, mid)
    return point(np.where(up0, t1, t0))


def exact_witness(X, x, target, resolution=None, tol=1e-9):
    """A unit ``y`` with ``min(|x + y|, |x - y|) >= target - tol``, or ``None``.

    In finite dimensions the supremum ``m(x)`` is attained, so near-witnesses
    exist at every tolerance below it; ``None`` means none was sampled.
    """
    if not 0.0 <= target <= 2.0:
        raise ValueError("target must lie in [0, 2]")
    resolution, _ = _resolutions(X, resolution, None)
    x = _check_unit(X, x)
    cover = _cover(X, resolution)
    vals, idx = _m_values(X, x[None], cover.points)
    if vals[0] >= target - tol:
        return cover.points[idx[0]].copy()
    return None


def definitional_s(X, resolution=None, grid=401):
    """``s(X)`` read straight from its definition as a sup over levels ``s``.

    A level ``s`` is admissible when every sampled ``x`` has a sampled ``y``
    with ``min(|x+y|, |x-y|) >= s - h``.  Used as a cross-check of the
    inf-sup form; returns the largest admissible level on ``grid``.
    """
    resolution, _ = _resolutions(X, resolution, None)
    cover = _cover(X, resolution)
    best, _ = _m_values(X, cover.points, cover.points)
    levels = np.linspace(0.0, 2.0, grid)
    ok = [s for s in levels if np.all(best >= s - cover.mesh)]
    return float(max(ok)) if ok else 0.0


__all__ = [
    "FiniteSpace", "PSpace", "Polyhedral", "FSum", "ImageSpace", "ModuliReport",
    "SliceQuery", "norm", "m_of_x", "s_modulus", "lasq_defect", "lasq_defect_at",
    "oh_radius", "slice_diameter", "exact_witness", "definitional_s"
]
