"""Operator norms between small normed spaces and Banach-Mazur upper bounds.

Only upper bounds on the Banach-Mazur distance are produced; every value
returned by :func:`bm_upper` is ``|T| |T^{-1}|`` for an explicit ``T``.
"""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.stats import qmc

from .constants import S_STABILITY_CONSTANT
from .errors import DimensionMismatch, SingularMatrix
from .report import VerificationReport
from .sampling import sphere_cover
from .space import ImageSpace, s_modulus

SEARCH_RESOLUTION = {1: 2, 2: 512, 3: 2000}
BM_MAX_DIM = 3


@dataclass(frozen=True)
class LinearMap:
    matrix: tuple

    def __post_init__(self):
        M = np.array(self.matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise DimensionMismatch("a linear map here is a square matrix")
        if np.linalg.cond(M) > 1e12:
            raise SingularMatrix("matrix is singular or nearly so")
        object.__setattr__(self, "matrix", tuple(map(tuple, M.tolist())))

    @property
    def array(self):
        return np.array(self.matrix)

    @property
    def dim(self):
        return len(self.matrix)

    @property
    def condition(self):
        return float(np.linalg.cond(self.array))

    def inverse(self):
        return LinearMap(np.linalg.inv(self.array))


def _as_matrix(T):
    return T.array if isinstance(T, LinearMap) else LinearMap(T).array


def operator_norm(T, source, target, resolution=None):
    """Bracket ``sup_{|x|=1} |Tx|`` from ``source`` to ``target``.

    When the source ball has finitely many known extreme points the maximum
    is taken over them and is exact.  Otherwise a sphere cover with mesh
    ``h < 1`` gives ``|T| <= max_k |T x_k| / (1 - h)``, because
    ``x -> |Tx|`` is ``|T|``-Lipschitz.
    """
    M = _as_matrix(T)
    if not (source.dim == target.dim == M.shape[0]):
        raise DimensionMismatch("map and spaces must share one dimension")
    ext = source.extreme_points()
    if ext is not None:
        v = float(np.max(target.norm(ext @ M.T)))
        return v, v
    if resolution is None:
        resolution = {2: 4096, 3: 40_000}.get(source.dim, 250_000)
    cover = sphere_cover(source.norm, source.dim, resolution)
    lo = float(np.max(target.norm(cover.points @ M.T)))
    hi = lo / (1.0 - cover.mesh) if cover.mesh < 1.0 else np.inf
    return lo, hi


class _FastNorm:
    """Operator-norm estimate reused across a local search."""

    def __init__(self, source, target, n):
        self.target = target
        ext = source.extreme_points()
        if ext is not None:
            self.points = ext
        else:
            self.points = sphere_cover(source.norm, source.dim, n).points

    def __call__(self, M):
        return float(np.max(self.target._norm(self.points @ M.T)))


def _objective(fwd, bwd, M):
    try:
        inv = np.linalg.inv(M)
    except np.linalg.LinAlgError:
        return np.inf
    if not np.all(np.isfinite(inv)) or np.linalg.cond(M) > 1e10:
        return np.inf
    return fwd(M) * bwd(inv)


def _starts(dim, count):
    eye = np.eye(dim)
    out = []
    for perm in itertools.permutations(range(dim)):
        for signs in itertools.product((1.0, -1.0), repeat=dim):
            out.append(eye[list(perm)] * np.array(signs)[:, None])
    for entries in itertools.product((1.0, -1.0), repeat=dim * dim):
        M = np.array(entries).reshape(dim, dim)
        if abs(np.linalg.det(M)) > 1e-9:
            out.append(M)
    out = out[:count]
    if len(out) < count:
        halton = qmc.Halton(d=dim * dim, scramble=False).random(count - len(out) + 1)[1:]
        out.extend((2.0 * h - 1.0).reshape(dim, dim) + eye for h in halton)
    return out


def _descend(J, M, step=0.5, min_step=1e-9, max_evals=20_000):
    best = J(M)
    evals = 0
    while step >= min_step and evals < max_evals:
        improved = False
        for idx in np.ndindex(M.shape):
            for sgn in (1.0, -1.0):
                cand = M.copy()
                cand[idx] += sgn * step
                val = J(cand)
                evals += 1
                if val < best * (1.0 - 1e-14):
                    M, best, improved = cand, val, True
        if not improved:
            step *= 0.5
    return M, best


def _search(X, Y, restarts):
    n = SEARCH_RESOLUTION.get(X.dim, 2000)
    fwd, bwd = _FastNorm(X, Y, n), _FastNorm(Y, X, n)
    J = lambda M: _objective(fwd, bwd, M)
    best_M, best = None, np.inf
    for M0 in _starts(X.dim, restarts):
        M, val = _descend(J, M0.astype(float))
        if val < best:
            best_M, best = M, val
    return best_M


def bm_search(X, Y, restarts=64, resolution=None):
    """Best map found and its certified ``|T| |T^{-1}|``.

    Searches from ``X`` to ``Y`` and from ``Y`` to ``X`` (inverting the
    result), so the answer does not depend on argument order.
    """
    if X.dim != Y.dim:
        raise DimensionMismatch("Banach-Mazur distance needs equal dimensions")
    if X.dim > BM_MAX_DIM:
        raise ValueError(f"bm search is limited to dim <= {BM_MAX_DIM}")
    candidates = [_search(X, Y, restarts), np.linalg.inv(_search(Y, X, restarts))]
    best = (np.inf, None)
    for M in candidates:
        val = (operator_norm(M, X, Y, resolution)[1]
               * operator_norm(np.linalg.inv(M), Y, X, resolution)[1])
        if val < best[0]:
            best = (val, M)
    return best


def bm_upper(X, Y, restarts=64, resolution=None):
    """An upper bound on the Banach-Mazur distance ``d(X, Y)``."""
    return bm_search(X, Y, restarts, resolution)[0]


def check_s_isometry_invariance(X, T, resolution=None, target=None):
    """``s`` is invariant under isometries and stable under near-isometries.

    Without ``target`` the pushforward ``Y`` normed by ``|T^{-1} y|_X`` is
    built, ``T`` is an exact isometry onto it, and the two certified
    brackets of ``s`` must overlap.  With ``target`` the map's distortion
    ``1 + delta = |T| |T^{-1}|`` is certified and
    ``s(target) >= s(X) - c delta`` is checked in both directions.
    """
    M = _as_matrix(T)
    sx = s_modulus(X, resolution)
    if target is None:
        Y = ImageSpace(X, M)
        sy = s_modulus(Y, resolution)
        margin = min(sx.s_upper, sy.s_upper) - max(sx.s_lower, sy.s_lower)
        details = {"mode": "isometry"}
    else:
        Y = target
        sy = s_modulus(Y, resolution)
        dist = (operator_norm(M, X, Y)[1] * operator_norm(np.linalg.inv(M), Y, X)[1])
        delta = dist - 1.0
        slack = S_STABILITY_CONSTANT * delta
        margin = min(sy.s_upper - (sx.s_lower - slack), sx.s_upper - (sy.s_lower - slack))
        details = {"mode": "near-isometry", "distortion": dist, "delta": delta,
                   "constant": S_STABILITY_CONSTANT}
    failed = margin < 0
    return VerificationReport(
        claim_id="s-isometry",
        instance={"space": X.to_spec(), "map": M.tolist(),
                  "target": None if target is None else target.to_spec()},
        samples=int(sx.resolution),
        worst_margin=float(margin),
        verdict="fail" if failed else "pass",
        counterexample={"s_X": [sx.s_lower, sx.s_upper],
                        "s_Y": [sy.s_lower, sy.s_upper]} if failed else None,
        details={**details, "s_X": [sx.s_lower, sx.s_upper],
                 "s_Y": [sy.s_lower, sy.s_upper], "resolution": sx.resolution},
    )
