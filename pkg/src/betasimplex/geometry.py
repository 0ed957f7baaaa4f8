"""Low-dimensional geometry: vertex angles, tangent cones, projections, hulls.

The ``*_batch`` kernels take arrays with arbitrary leading batch axes and are
what the Monte Carlo estimators call. The scalar functions validate their
input and raise :class:`DegenerateError` on configurations that a continuous
distribution produces with probability zero.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .sampling import MCEstimate, _as_generator, sample_unit_directions

SIGN_TOL = 1e-10
DET_TOL = 1e-12


class DegenerateError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Simplex:
    """d+1 affinely independent points in R^d, stored as a (d+1, d) array."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
            raise ValueError(f"need a (d+1, d) vertex array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        if abs(np.linalg.det(v[1:] - v[0])) <= DET_TOL:
            raise DegenerateError("vertices are affinely dependent")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def d(self) -> int:
        return self.vertices.shape[1]


class ProjectionKind(enum.Enum):
    SIMPLEX = "SimplexProjection"
    NON_SIMPLEX = "NonSimplexProjection"


@dataclass(frozen=True)
class ProjectionClass:
    kind: ProjectionKind
    interior_index: Optional[int] = None

    def __post_init__(self):
        if (self.kind is ProjectionKind.SIMPLEX) != (self.interior_index is not None):
            raise ValueError("exactly the simplex class carries an interior index")


def _as_simplex(s) -> Simplex:
    return s if isinstance(s, Simplex) else Simplex(s)


def _unit(u, d: int) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (d,):
        raise ValueError(f"direction must have shape ({d},), got {u.shape}")
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("direction must be a unit vector")
    return u


def edge_matrices(vertices: np.ndarray) -> np.ndarray:
    """Edge matrices from every vertex: shape (..., d+1, d, d).

    Column k of ``out[..., i, :, :]`` is ``X_j - X_i`` for the k-th index
    j != i in increasing order.
    """
    v = np.asarray(vertices, dtype=float)
    m = v.shape[-2]
    others = np.array([[j for j in range(m) if j != i] for i in range(m)])
    diff = v[..., others, :] - v[..., :, None, :]  # (..., m, m-1, d)
    return np.swapaxes(diff, -1, -2)


def cone_coefficients_batch(vertices: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Coefficients of ``u`` in the edge basis at every vertex.

    ``vertices`` is (..., d+1, d), ``u`` is (..., k, d) with k directions per
    vertex broadcast against (..., d+1, k, d). Returns (..., d+1, k, d).
    """
    inv = np.linalg.inv(edge_matrices(vertices))  # (..., d+1, d, d)
    return np.einsum("...ij,...kj->...ki", inv, u)


def tangent_cone_contains(s, i: int, u) -> bool:
    """Whether direction ``u`` points from vertex ``i`` into the simplex."""
    s = _as_simplex(s)
    u = _unit(u, s.d)
    e = edge_matrices(s.vertices)[i]
    lam = np.linalg.solve(e, u)
    return bool(np.all(lam >= -SIGN_TOL))


def vertex_solid_angles_3d_batch(vertices: np.ndarray) -> np.ndarray:
    """Normalised solid angles at all four vertices of tetrahedra (..., 4, 3).

    Uses the half-angle form tan(omega/2) = |a.(b x c)| / (abc + (a.b)c +
    (a.c)b + (b.c)a); ``arctan2`` adds the half-turn when the denominator
    is negative.
    """
    e = np.swapaxes(edge_matrices(vertices), -1, -2)  # (..., 4, 3 edges, 3)
    a, b, c = e[..., 0, :], e[..., 1, :], e[..., 2, :]
    la, lb, lc = (np.linalg.norm(x, axis=-1) for x in (a, b, c))
    triple = np.abs(np.einsum("...i,...i->...", a, np.cross(b, c)))
    denom = (la * lb * lc
             + np.einsum("...i,...i->...", a, b) * lc
             + np.einsum("...i,...i->...", a, c) * lb
             + np.einsum("...i,...i->...", b, c) * la)
    return 2.0 * np.arctan2(triple, denom) / (4.0 * math.pi)


def vertex_solid_angle_3d_exact(s, i: int) -> float:
    s = _as_simplex(s)
    if s.d != 3:
        raise ValueError("closed-form solid angle needs a tetrahedron in R^3")
    return float(vertex_solid_angles_3d_batch(s.vertices)[i])


def vertex_solid_angle_mc(s, i: int, n_dirs: int, rng) -> MCEstimate:
    """Fraction of uniform directions lying in the tangent cone at vertex i."""
    s = _as_simplex(s)
    gen = _as_generator(rng)
    inv = np.linalg.inv(edge_matrices(s.vertices)[i])
    hits = np.empty(n_dirs, dtype=bool)
    chunk = 1 << 16
    for start in range(0, n_dirs, chunk):
        stop = min(start + chunk, n_dirs)
        u = sample_unit_directions(s.d, stop - start, gen)
        hits[start:stop] = np.all(u @ inv.T >= -SIGN_TOL, axis=-1)
    seed = getattr(rng, "seed", -1) if not isinstance(rng, int) else rng
    return MCEstimate.from_samples(hits, seed=seed)


def complement_basis_batch(u: np.ndarray) -> np.ndarray:
    """Orthonormal bases of u-perp: shape (..., d, d-1) for u of shape (..., d).

    A Householder reflection pivoted on the largest |u_k| maps e_k to -+u; its
    remaining columns, in index order, span the complement. Deterministic.
    """
    u = np.asarray(u, dtype=float)
    d = u.shape[-1]
    k = np.argmax(np.abs(u), axis=-1)
    uk = np.take_along_axis(u, k[..., None], axis=-1)[..., 0]
    sign = np.where(uk >= 0, 1.0, -1.0)
    v = u.copy()
    np.put_along_axis(v, k[..., None], (uk + sign)[..., None], axis=-1)
    vv = np.einsum("...i,...i->...", v, v)
    h = np.eye(d) - 2.0 * v[..., :, None] * v[..., None, :] / vv[..., None, None]
    keep = np.arange(d)[None, :] != np.reshape(k, (-1, 1))
    cols = np.nonzero(keep)[1].reshape(-1, d - 1)
    h2 = h.reshape(-1, d, d)
    basis = np.take_along_axis(h2, cols[:, None, :], axis=-1)
    return basis.reshape(u.shape[:-1] + (d, d - 1))


def project_onto_complement(points, u) -> np.ndarray:
    """Coordinates of ``points`` (m, d) projected onto u-perp, shape (m, d-1)."""
    p = np.asarray(points, dtype=float)
    u = _unit(u, p.shape[-1])
    return p @ complement_basis_batch(u)


def barycentric_batch(p: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of p (..., m) in simplices (..., m+1, m)."""
    v = np.asarray(vertices, dtype=float)
    p = np.asarray(p, dtype=float)
    ones = np.ones(v.shape[:-1] + (1,))
    a = np.swapaxes(np.concatenate([v, ones], axis=-1), -1, -2)
    rhs = np.concatenate([p, np.ones(p.shape[:-1] + (1,))], axis=-1)
    return np.linalg.solve(a, rhs[..., None])[..., 0]


def _check_affine(vertices: np.ndarray) -> None:
    v = np.asarray(vertices, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] + 1:
        raise ValueError(f"need m+1 vertices in R^m, got shape {v.shape}")
    if abs(np.linalg.det(v[1:] - v[0])) <= DET_TOL:
        raise DegenerateError("simplex vertices are affinely dependent")


def point_in_simplex(p, vertices) -> bool:
    _check_affine(vertices)
    lam = barycentric_batch(p, vertices)
    return bool(np.all(lam >= -SIGN_TOL))


def interior_margins_batch(projected: np.ndarray) -> np.ndarray:
    """For each point i of (..., m+1+1, m) the min barycentric coordinate
    with respect to the simplex formed by the other points. Shape (..., m+2).
    """
    q = np.asarray(projected, dtype=float)
    n = q.shape[-2]
    others = np.array([[j for j in range(n) if j != i] for i in range(n)])
    lam = barycentric_batch(q, q[..., others, :])
    return lam.min(axis=-1)


def classify_projection(projected) -> ProjectionClass:
    """Whether d+1 points in R^{d-1} have one point in the hull of the rest."""
    q = np.asarray(projected, dtype=float)
    if q.ndim != 2 or q.shape[0] != q.shape[1] + 2:
        raise ValueError(f"need d+1 points in R^(d-1), got shape {q.shape}")
    n = q.shape[0]
    for i in range(n):
        _check_affine(np.delete(q, i, axis=0))
    inside = np.nonzero(interior_margins_batch(q) >= -SIGN_TOL)[0]
    if len(inside) > 1:
        raise DegenerateError(f"points {inside.tolist()} all lie in the hull of the others")
    if len(inside) == 1:
        return ProjectionClass(ProjectionKind.SIMPLEX, int(inside[0]))
    return ProjectionClass(ProjectionKind.NON_SIMPLEX)


@lru_cache(maxsize=None)
def _facet_index_sets(n: int, d: int):
    subsets = list(itertools.combinations(range(n), d))
    rest = [[j for j in range(n) if j not in s] for s in subsets]
    return np.array(subsets), np.array(rest)


def hull_facet_counts_batch(points: np.ndarray):
    """Facet counts of convex hulls of (..., n, d) point sets, d in {2, 3}.

    A d-subset spans a facet iff every remaining point lies strictly on one
    side of its hyperplane. Returns ``(counts, degenerate)`` where
    ``degenerate`` marks sets with some orientation below ``DET_TOL``.
    """
    p = np.asarray(points, dtype=float)
    n, d = p.shape[-2], p.shape[-1]
    if d not in (2, 3):
        raise ValueError("hull facet counting supports d = 2 and d = 3")
    subsets, rest = _facet_index_sets(n, d)
    base = p[..., subsets[:, 0], :]  # (..., F, d)
    q = p[..., rest, :] - base[..., None, :]  # (..., F, n-d, d)
    if d == 2:
        e = p[..., subsets[:, 1], :] - base
        normal = np.stack([-e[..., 1], e[..., 0]], axis=-1)
    else:
        normal = np.cross(p[..., subsets[:, 1], :] - base, p[..., subsets[:, 2], :] - base)
    side = np.einsum("...fkd,...fd->...fk", q, normal)
    degenerate = np.any(np.abs(side) <= DET_TOL, axis=(-1, -2))
    facet = np.all(side > 0, axis=-1) | np.all(side < 0, axis=-1)
    return facet.sum(axis=-1), degenerate


def hull_facet_count(points, d: Optional[int] = None) -> int:
    p = np.asarray(points, dtype=float)
    if p.ndim != 2:
        raise ValueError("points must be an (n, d) array")
    if d is not None and p.shape[1] != d:
        raise ValueError(f"points live in R^{p.shape[1]}, not R^{d}")
    if p.shape[0] < p.shape[1] + 1:
        raise ValueError("need at least d+1 points")
    count, degenerate = hull_facet_counts_batch(p)
    if degenerate or count == 0:
        raise DegenerateError("points are not in general position")
    return int(count)
