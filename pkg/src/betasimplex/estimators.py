"""Monte Carlo estimators used as independent checks of the exact formulas.

Every estimator splits its sample budget into fixed-size chunks. Chunk k
draws from ``RngState(seed, k)`` and the chunk summaries are merged in chunk
order, so the result depends only on (seed, n_samples), not on the number
of workers. Samples flagged as numerically degenerate are redrawn inside
their chunk and counted in ``MCEstimate.rejections``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from .beta_polytopes import PolytopeSpec
from .geometry import (
    DET_TOL,
    SIGN_TOL,
    complement_basis_batch,
    hull_facet_counts_batch,
    interior_margins_batch,
    vertex_solid_angles_3d_batch,
)
from .sampling import MCEstimate, RngState, sample_beta_points, sample_unit_directions

CHUNK_SIZE = 50_000
WORKERS_ENV = "BETASIMPLEX_WORKERS"
DEFAULT_DIRS_PER_VERTEX = 8

# a batch of draws -> (per-sample values, mask of samples that are usable)
Draw = Callable[[int, np.random.Generator], "tuple[np.ndarray, np.ndarray]"]


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _fill_chunk(draw: Draw, m: int, gen: np.random.Generator):
    parts, have, rejected = [], 0, 0
    while have < m:
        values, ok = draw(m - have, gen)
        rejected += int((~ok).sum())
        parts.append(values[ok])
        have += int(ok.sum())
    v = np.concatenate(parts)
    mean = float(v.mean())
    return v.size, mean, float(((v - mean) ** 2).sum()), rejected


def run_chunked(draw: Draw, n_samples: int, seed: int, workers: int | None = None,
                chunk_size: int = CHUNK_SIZE) -> MCEstimate:
    if n_samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    sizes = [min(chunk_size, n_samples - s) for s in range(0, n_samples, chunk_size)]
    root = RngState(int(seed))

    def job(k):
        return _fill_chunk(draw, sizes[k], root.child(k).generator())

    workers = workers or default_workers()
    if workers == 1:
        parts = [job(k) for k in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, range(len(sizes))))

    # pairwise merge of (count, mean, M2), in chunk order
    n, mean, m2, rejected = 0, 0.0, 0.0, 0
    for nk, mk, m2k, rk in parts:
        tot = n + nk
        delta = mk - mean
        mean += delta * nk / tot
        m2 += m2k + delta * delta * n * nk / tot
        n, rejected = tot, rejected + rk
    se = math.sqrt(m2 / (n - 1) / n)
    return MCEstimate(mean, se, n, int(seed), rejected)


def _guard_singular(mats: np.ndarray, ok: np.ndarray) -> np.ndarray:
    """Swap flagged matrices for the identity so batched solves never fail."""
    if np.all(ok):
        return mats
    mats = mats.copy()
    mats[~ok] = np.eye(mats.shape[-1])
    return mats


def _simplex_ok(simplices: np.ndarray) -> np.ndarray:
    det = np.linalg.det(simplices[..., 1:, :] - simplices[..., :1, :])
    return np.abs(det) > DET_TOL


def _check_d(d: int) -> None:
    if d not in (3, 4):
        raise ValueError("angle-sum estimators support d = 3 and d = 4")


def _direct_draw(d: int, beta: float, dirs_per_vertex: int) -> Draw:
    sub = max(1, 400_000 // ((d + 1) * dirs_per_vertex))

    def draw(m, gen):
        x = sample_beta_points(d, beta, (m, d + 1), gen)
        ok = _simplex_ok(x)
        if d == 3:
            return vertex_solid_angles_3d_batch(x).sum(axis=-1), ok
        # One inverse per simplex: with A = [[X_0 .. X_d], [1 .. 1]], the
        # coefficients of u on the edges at vertex i are the entries j != i
        # of A^{-1} (u, 0).
        a = np.concatenate([np.swapaxes(x, -1, -2), np.ones((m, 1, d + 1))], axis=-2)
        a = _guard_singular(a, ok)
        values = np.empty(m)
        own = np.eye(d + 1, dtype=bool)[:, None, :]  # vertex i ignores entry i
        for s in range(0, m, sub):
            ainv = np.linalg.inv(a[s:s + sub])[..., :d]  # (b, d+1, d)
            # cone membership is scale-invariant: raw Gaussian vectors suffice
            g = gen.standard_normal((len(ainv), d + 1, dirs_per_vertex, d))
            mu = g @ np.swapaxes(ainv, -1, -2)[:, None]  # (b, d+1, k, d+1)
            lam = np.where(own, np.inf, mu).min(axis=-1) / np.linalg.norm(g, axis=-1)
            ok[s:s + sub] &= ~np.any(np.abs(lam) < SIGN_TOL, axis=(-1, -2))
            values[s:s + sub] = (lam >= -SIGN_TOL).mean(axis=-1).sum(axis=-1)
        return values, ok

    return draw


def mc_angle_sum_direct(d: int, beta: float, n_simplices: int,
                        dirs_per_vertex: int = DEFAULT_DIRS_PER_VERTEX, seed: int = 0,
                        workers: int | None = None) -> MCEstimate:
    """Sample beta simplices and average their vertex angle-sum.

    In R^3 each vertex angle is exact; in R^4 each is replaced by the hit
    fraction of ``dirs_per_vertex`` uniform directions, which keeps the
    per-simplex value unbiased, so the empirical SE over simplices covers
    both stages.
    """
    _check_d(d)
    return run_chunked(_direct_draw(d, float(beta), int(dirs_per_vertex)),
                       n_simplices, seed, workers)


def _projection_indicator(x: np.ndarray, u: np.ndarray):
    """1 where projecting simplex x (m, d+1, d) along u (m, d) gives a simplex."""
    m, npts, d = x.shape
    others = np.array([[j for j in range(npts) if j != i] for i in range(npts)])
    q = np.einsum("nvi,nij->nvj", x, complement_basis_batch(u))  # (m, d+1, d-1)
    ok = _simplex_ok(x) & np.all(_simplex_ok(q[:, others, :]), axis=-1)
    placeholder = np.vstack([np.zeros(d - 1), np.eye(d - 1), np.full(d - 1, 0.1)])
    margins = interior_margins_batch(np.where(ok[:, None, None], q, placeholder))
    inside = margins >= -SIGN_TOL
    ok &= ~np.any(np.abs(margins) < SIGN_TOL, axis=-1) & (inside.sum(axis=-1) <= 1)
    return inside.any(axis=-1).astype(float), ok


def _projection_draw(d: int, beta: float) -> Draw:
    def draw(m, gen):
        x = sample_beta_points(d, beta, (m, d + 1), gen)
        return _projection_indicator(x, sample_unit_directions(d, m, gen))

    return draw


def mc_projection_prob_fixed(vertices, n_dirs: int, seed: int = 0,
                             workers: int | None = None) -> MCEstimate:
    """Same projection indicator as below, for one fixed simplex."""
    v = np.asarray(getattr(vertices, "vertices", vertices), dtype=float)
    d = v.shape[1]

    def draw(m, gen):
        return _projection_indicator(np.broadcast_to(v, (m,) + v.shape),
                                     sample_unit_directions(d, m, gen))

    return run_chunked(draw, n_dirs, seed, workers)


def mc_projection_simplex_prob(d: int, beta: float, n: int, seed: int = 0,
                               workers: int | None = None) -> MCEstimate:
    """P[projection of a beta simplex along a uniform direction is a simplex].

    Half of this probability estimates E s_0.
    """
    _check_d(d)
    return run_chunked(_projection_draw(d, float(beta)), n, seed, workers)


def _facet_draw(spec: PolytopeSpec) -> Draw:
    n, d = spec.n, spec.d
    per_sample = math.comb(n, d) * (n - d) * d
    sub = max(1, 4_000_000 // per_sample)

    def draw(m, gen):
        x = sample_beta_points(d, spec.beta, (m, n), gen)
        counts = np.empty(m)
        ok = np.empty(m, dtype=bool)
        for s in range(0, m, sub):
            c, degenerate = hull_facet_counts_batch(x[s:s + sub])
            counts[s:s + sub] = c
            ok[s:s + sub] = ~degenerate
        return counts, ok

    return draw


def mc_facet_count(spec: PolytopeSpec, n_samples: int, seed: int = 0,
                   workers: int | None = None) -> MCEstimate:
    if spec.d not in (2, 3):
        raise ValueError("facet Monte Carlo supports d = 2 and d = 3")
    if spec.n > 32:
        raise ValueError("facet Monte Carlo supports at most 32 points")
    return run_chunked(_facet_draw(spec), n_samples, seed, workers)
