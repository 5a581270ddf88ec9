"""Scalar invariants of a single absolute normalised norm.

Equality tests such as ``F(a + 1, b) = 2`` cannot be decided in floating
point; they are read as ``F(a + 1, b) >= 2 - tau``.  Polygonal norms take
exact paths through their edge functionals wherever one exists.
"""

import enum
from dataclasses import dataclass

import numpy as np

from ._optimize import bisect_sup
from .errors import InconsistentNorm, InfinityNormExcluded, ResolutionExhausted
from .norm2 import DEFAULT_TOL, as_polygon, sphere_arc, swap

EQ_TAU = 1e-9
SC_EXCLUSION = 1e-2
MAX_REFINEMENT = 1 << 20


class Extreme(enum.Enum):
    INFINITY = "InfinityNorm"
    ONE = "OneNorm"
    NEITHER = "Neither"


@dataclass(frozen=True)
class NormProfile:
    F11: float
    rF: float
    rF_swapped: float
    sc_at_10: bool
    sc_at_01: bool
    f_at_1: float
    po_witness: tuple
    tolerance: float
    classification: Extreme

    def to_dict(self):
        return {
            "F11": self.F11,
            "class": self.classification.value,
            "rF": self.rF,
            "rF_swapped": self.rF_swapped,
            "sc_at_10": self.sc_at_10,
            "sc_at_01": self.sc_at_01,
            "f_at_1": self.f_at_1,
            "po": None if self.po_witness is None else list(self.po_witness),
            "tolerance": self.tolerance,
        }


def _grid(resolution):
    g = np.linspace(0.0, 1.0, resolution)
    return np.meshgrid(g, g, indexing="ij")


def classify_extremes(F, resolution=256, tol=DEFAULT_TOL):
    """Decide whether ``F`` is the max-norm, the 1-norm, or neither.

    The decision is made from ``F(1, 1)`` alone and then cross-checked
    against pointwise agreement on a grid; a disagreement means ``F`` is not
    a valid absolute normalised norm and raises :class:`InconsistentNorm`.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    f11 = F(1.0, 1.0)
    A, B = _grid(resolution)
    vals = np.asarray(F(A, B))
    dev_inf = float(np.max(np.abs(vals - np.maximum(A, B))))
    dev_one = float(np.max(np.abs(vals - (A + B))))
    is_inf = abs(f11 - 1.0) <= tol
    is_one = abs(f11 - 2.0) <= tol
    if is_inf != (dev_inf <= tol) or is_one != (dev_one <= tol):
        raise InconsistentNorm(
            f"F(1,1)={f11!r} but grid deviation from max-norm is {dev_inf:.3g} "
            f"and from 1-norm is {dev_one:.3g}")
    if is_inf:
        return Extreme.INFINITY
    if is_one:
        return Extreme.ONE
    return Extreme.NEITHER


def _r_polygon(P):
    """First coordinate of the far end of the sphere face through (1, 0)."""
    v = P.array
    n = P.normals[0]
    on_face = np.abs(v @ n - 1.0) <= 1e-12
    k = 0
    while k + 1 < len(v) and on_face[k + 1]:
        k += 1
    return float(v[k, 0])


def r_of(F, tol=1e-9, exact=True):
    """``r_F = inf{a : F(a, b) = 1 and F(a + 1, b) = 2 for some b >= 0}``.

    The admissible set is an interval ending at ``a = 1`` (it is the sphere
    face through ``(1, 0)``), so its left end is found by bisection with the
    equality threshold ``tau = tol / 10``.  Polygonal norms are answered
    exactly from the first edge functional unless ``exact=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if exact:
        P = as_polygon(F)
        if P is not None:
            return _r_polygon(P)
    tau = tol / 10.0
    btol = min(tau / 10.0, 1e-12)

    def admissible(a):
        return F(a + 1.0, F.boundary(a, btol)) >= 2.0 - tau

    if admissible(np.float64(0.0)):
        return 0.0
    # sup of the complement; admissible(1) holds since F(2, 0) = 2
    edge = bisect_sup(lambda a: np.logical_not(admissible(a)), 0.0, 1.0, tol)
    return float(min(1.0, edge + tol))


def is_sc_point(F, point, resolution=4096, tau=EQ_TAU, exclusion=SC_EXCLUSION):
    """True if ``F(point + y) < 2 - tau`` for all sampled unit ``y``.

    ``y`` ranges over the first-quadrant arc (enough by monotonicity for a
    point of the closed first quadrant) minus an ``exclusion`` ball around
    the point itself, measured in ``F``.
    """
    x = np.abs(np.asarray(point, dtype=float))
    if abs(F(*x) - 1.0) > 1e-6:
        raise ValueError("point must lie on the unit sphere")
    a, b = sphere_arc(F, resolution)
    far = np.asarray(F(a - x[0], b - x[1])) > exclusion
    vals = np.asarray(F(a + x[0], b + x[1]))
    return bool(np.all(vals[far] < 2.0 - tau))


def _certified_lasq2(F, eps, n):
    a = np.linspace(0.0, 1.0, n + 1)
    f = np.asarray(F.boundary(a, 1e-13))
    bad = f < 1.0 - eps + 1e-12
    if not np.any(bad):
        return 1.0, 0.0
    delta = float(np.min(np.asarray(F(a[bad], 1.0)) - 1.0)) / 2.0
    return delta, 1.0 / n


def lasq2_modulus(F, eps, resolution=256, max_resolution=MAX_REFINEMENT):
    """A certified ``delta > 0`` with: ``F(a, f(a)) = 1`` and
    ``F(a, 1) <= 1 + delta`` imply ``f(a) >= 1 - eps``.

    ``delta`` is half the smallest excess ``F(a, 1) - 1`` over grid points
    whose boundary value already drops below ``1 - eps``; since
    ``a -> F(a, 1)`` is 1-Lipschitz the value holds between nodes once the
    grid step is at most ``delta / 2``.  The grid doubles until that holds.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if classify_extremes(F, 32) is Extreme.INFINITY:
        raise InfinityNormExcluded("lasq2_modulus needs F != max-norm")
    n = int(resolution)
    while n <= max_resolution:
        delta, step = _certified_lasq2(F, eps, n)
        if delta > 0 and step <= delta / 2:
            return delta
        n *= 2
    raise ResolutionExhausted(f"lasq2_modulus did not certify below n={max_resolution}")


def loh3_modulus(F, eps, resolution=1024, r=None, max_resolution=MAX_REFINEMENT):
    """A certified ``delta > 0`` such that ``F(a, b) = 1``, ``c <= 1 + a``
    and ``F(c, b) >= 2 - delta`` force ``c >= 1 + r_F - eps``.

    With ``C = 1 + r_F - eps`` the quantity to bound is
    ``M = sup_a F(min(1 + a, C), f(a))``.  Between two consecutive arc
    samples the sphere stays inside the box they span, so monotonicity of
    ``F`` bounds ``M`` by corner evaluations with no Lipschitz slack.  The
    result is ``(2 - M) / 2``.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r is None:
        r = r_of(F)
    cap = 1.0 + r - eps
    n = int(resolution)
    while n <= max_resolution:
        a, b = sphere_arc(F, n)
        # a decreases and b increases along the arc
        corner = np.asarray(F(np.minimum(1.0 + a[:-1], cap), b[1:]))
        M = float(np.max(corner))
        if M < 2.0:
            return (2.0 - M) / 2.0
        n *= 2
    raise ResolutionExhausted(f"loh3_modulus did not certify below n={max_resolution}")


def positive_octahedrality(F, resolution=10_000, tol=DEFAULT_TOL):
    """Search the arc for ``(c, d)`` with ``F(c, d) = 1`` and
    ``F(c + 1, d) = F(c, d + 1) = 2``.

    Returns the first best witness if its residual is within ``tol``, else
    ``None``.  ``None`` only means "not found at this resolution".
    """
    c, d = sphere_arc(F, resolution)
    P = as_polygon(F)
    if P is not None:
        v = P.array
        c, d = np.concatenate([v[:, 0], c]), np.concatenate([v[:, 1], d])
    resid = np.maximum(np.abs(np.asarray(F(c + 1.0, d)) - 2.0),
                       np.abs(np.asarray(F(c, d + 1.0)) - 2.0))
    k = int(np.argmin(resid))
    if resid[k] <= tol:
        return float(c[k]), float(d[k])
    return None


def asq_obstruction(F, resolution=256):
    """``delta`` such that no unit ``(u, v)`` of ``X (+)_F Y`` meets
    ``F(|x +- u|, |v|) <= 1 + delta`` and ``F(|u|, |y +- v|) <= 1 + delta``.

    Uses ``eps = (1 - 1/F(1,1)) / 2`` so ``(1 - eps) F(1, 1) > 1``.
    """
    if classify_extremes(F, 32) is Extreme.INFINITY:
        raise InfinityNormExcluded("asq_obstruction needs F != max-norm")
    eps = (1.0 - 1.0 / F(1.0, 1.0)) / 2.0
    return min(lasq2_modulus(F, eps, resolution),
               lasq2_modulus(swap(F), eps, resolution))


def profile(F, tol=DEFAULT_TOL, resolution=4096):
    """Collect the scalar invariants of ``F`` into a :class:`NormProfile`."""
    cls = classify_extremes(F, 256, tol)
    return NormProfile(
        F11=F(1.0, 1.0),
        rF=r_of(F, tol),
        rF_swapped=r_of(swap(F), tol),
        sc_at_10=is_sc_point(F, (1.0, 0.0), resolution),
        sc_at_01=is_sc_point(F, (0.0, 1.0), resolution),
        f_at_1=float(F.boundary(1.0, tol)),
        po_witness=positive_octahedrality(F, 10_000, tol),
        tolerance=tol,
        classification=cls,
    )
