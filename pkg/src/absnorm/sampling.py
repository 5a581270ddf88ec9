"""Deterministic covers of unit spheres of finite-dimensional normed spaces.

Each sampler returns the points together with a mesh ``h``: every point of
the unit sphere lies within ``h`` (in the space's own norm) of a sample.

* dim 1: the two points ``+-1``, ``h = 0``.
* dim 2: equally spaced angles scaled radially onto the sphere; ``h`` is the
  largest distance between angular neighbours.
* dim 3-4: nodes of a uniform grid on the faces of the cube ``[-1,1]^d``,
  scaled radially.  A point ``u`` of the cube surface is within sup-distance
  ``rho = 1/m`` of a node on the same face, and for unit directions
  ``|u/|u| - w/|w|| <= 2 |u - w| / |u|``, while ``|v| <= C |v|_inf`` with
  ``C`` the largest norm of a cube vertex.  Hence
  ``h = 2 C rho / c_low`` with ``c_low`` a certified lower bound of the norm
  on the cube surface.
"""

import itertools
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SphereCover:
    points: np.ndarray
    mesh: float

    def __len__(self):
        return len(self.points)


def angular_cover(norm, n):
    theta = 2.0 * np.pi * np.arange(n) / n
    u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    # pin the axis and diagonal directions so symmetric extremisers are hit
    for k in range(n):
        if (8 * k) % n == 0:
            q = 8 * k // n
            u[k] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)][q]
    pts = u / norm(u)[:, None]
    gaps = norm(pts - np.roll(pts, -1, axis=0))
    return SphereCover(pts, float(np.max(gaps)))


def cube_nodes(dim, m):
    axis = np.linspace(-1.0, 1.0, m + 1)
    faces = []
    rest = np.array(list(itertools.product(axis, repeat=dim - 1)))
    for k in range(dim):
        for s in (-1.0, 1.0):
            face = np.insert(rest, k, s, axis=1)
            faces.append(face)
    return np.concatenate(faces)


def cube_cover(norm, dim, n):
    """Cube-face grid with about ``n`` nodes (rounded to an even ``m``)."""
    m = int(np.floor((n / (2.0 * dim)) ** (1.0 / (dim - 1)))) - 1
    m = max(2, m - (m % 2))
    u = cube_nodes(dim, m)
    r = norm(u)
    vertices = np.array(list(itertools.product((-1.0, 1.0), repeat=dim)))
    big = float(np.max(norm(vertices)))
    rho = 1.0 / m
    c_low = float(np.min(r)) - big * rho
    mesh = 2.0 * big * rho / c_low if c_low > 0 else np.inf
    return SphereCover(u / r[:, None], float(min(mesh, 2.0)))


def sphere_cover(norm, dim, n):
    if dim == 1:
        return SphereCover(np.array([[1.0], [-1.0]]), 0.0)
    if dim == 2:
        return angular_cover(norm, n)
    return cube_cover(norm, dim, n)
