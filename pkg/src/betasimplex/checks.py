"""The verification suite run by ``betasimplex verify``.

Each ``criterion_*`` function returns a list of :class:`ResultRow` with a
pass/fail flag. Monte Carlo checks draw from seeds derived from the suite
seed, so a suite run is deterministic end to end.
"""

from __future__ import annotations

import math
import time
from typing import Callable

import numpy as np

from .angle_sums import expected_angle_sum_table, expected_s0, expected_s0_result
from .beta_polytopes import PolytopeSpec, expected_facets, expected_facets_result
from .core_math import F_one_beta, inner_trig_integral, integrate_adaptive, log_c
from .estimators import (
    mc_angle_sum_direct,
    mc_facet_count,
    mc_projection_prob_fixed,
    mc_projection_simplex_prob,
)
from .geometry import vertex_solid_angle_mc, vertex_solid_angles_3d_batch
from .report import ResultRow
from .sampling import RngState, sample_beta_points

PI2 = math.pi ** 2
DEFAULT_SEED = 42
MC_SAMPLES = 1_000_000
N_SE = 4.0

SPHERE_D3 = 1 / 8
BALL_D3 = 401 / 2560
SPHERE_D4 = 539 / (288 * PI2) - 1 / 6
BALL_D4 = 1692197 / (846720 * PI2) - 1 / 6

IDENTITY_BETAS = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0)
MC_BETAS = (-1.0, 0.0, 1.0)
FACET_GRID = ((4, 2, -0.5), (6, 2, 0.0), (8, 2, 1.0), (5, 3, -0.5), (6, 3, 0.0))


def derive_seed(seed: int, *keys: int) -> int:
    """Independent 63-bit seed for a sub-check, from the suite seed and keys."""
    state = np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(1, np.uint64)
    return int(state[0] >> np.uint64(1))


def _close(name, value, target, tol, error=None, note="") -> ResultRow:
    return ResultRow(name, float(value), error, float(target), tol,
                     bool(abs(value - target) <= tol), note)


def _mc_row(name, est, target, note="") -> ResultRow:
    tol = N_SE * est.std_error
    extra = f"n={est.n_samples}, rejected={est.rejections}"
    return ResultRow(name, est.mean, est.std_error, float(target), tol,
                     bool(abs(est.mean - target) <= tol), f"{note}; {extra}" if note else extra)


def _timed(rows: list[ResultRow], name: str, started: float, limit: float) -> list[ResultRow]:
    elapsed = time.perf_counter() - started
    rows.append(ResultRow(name, tolerance=limit, passed=elapsed < limit,
                          note=f"runtime < {limit:g} s", seconds=elapsed))
    return rows


def criterion_1_to_4(seed: int = DEFAULT_SEED, workers=None) -> list[ResultRow]:
    cases = [
        ("c1.s0_d3_sphere", 3, -1.0, SPHERE_D3),
        ("c2.s0_d3_ball", 3, 0.0, BALL_D3),
        ("c3.s0_d4_sphere", 4, -1.0, SPHERE_D4),
        ("c4.s0_d4_ball", 4, 0.0, BALL_D4),
    ]
    rows = []
    for name, d, beta, target in cases:
        t0 = time.perf_counter()
        res = expected_s0_result(d, beta)
        elapsed = time.perf_counter() - t0
        row = _close(name, res.value, target, 1e-9, res.abs_error_estimate)
        row.passed = row.passed and elapsed < 1.0
        row.note = "runtime < 1 s"
        row.seconds = elapsed
        rows.append(row)
    return rows


def criterion_5(seed: int = DEFAULT_SEED, workers=None) -> list[ResultRow]:
    t3s = expected_angle_sum_table(3, -1.0)
    t3b = expected_angle_sum_table(3, 0.0)
    t4s = expected_angle_sum_table(4, -1.0)
    t4b = expected_angle_sum_table(4, 0.0)
    return [
        _close("c5.s1_d3_sphere", t3s.s[1], 9 / 8, 1e-9),
        _close("c5.s2_d3_sphere", t3s.s[2], 2.0, 1e-9),
        _close("c5.s1_d3_ball", t3b.s[1], 2961 / 2560, 1e-9),
        _close("c5.s2_d3_ball", t3b.s[2], 2.0, 1e-9),
        _close("c5.s1_d4_sphere", t4s.s[1], 539 / (96 * PI2), 1e-9),
        _close("c5.s2_d4_sphere", t4s.s[2], 5 / 3 + 539 / (144 * PI2), 1e-9),
        _close("c5.s1_d4_ball", t4b.s[1], 1692197 / (282240 * PI2), 1e-9),
        _close("c5.s2_d4_ball", t4b.s[2], 5 / 3 + 1692197 / (423360 * PI2), 1e-9),
    ]


def criterion_6(seed: int = DEFAULT_SEED, workers=None) -> list[ResultRow]:
    t0 = time.perf_counter()
    rows = []
    for beta in IDENTITY_BETAS:
        f1 = expected_facets(PolytopeSpec(4, 2, beta + 0.5))
        rows.append(_close(f"c6.d3_edges_identity[beta={beta:g}]",
                           expected_s0(3, beta), 2 - 0.5 * f1, 1e-9))
        f2 = expected_facets(PolytopeSpec(5, 3, beta + 0.5))
        rows.append(_close(f"c6.d4_facets_identity[beta={beta:g}]",
                           expected_s0(4, beta), 1.5 - 0.25 * f2, 1e-9))
    return _timed(rows, "c6.runtime", t0, 10.0)


def criterion_7(seed: int = DEFAULT_SEED, workers=None,
                samples: int = MC_SAMPLES) -> list[ResultRow]:
    t0 = time.perf_counter()
    rows = []
    for d in (3, 4):
        for k, beta in enumerate(MC_BETAS):
            exact = expected_s0(d, beta)
            proj = mc_projection_simplex_prob(d, beta, samples, derive_seed(seed, 7, d, k, 0),
                                              workers).scaled(0.5)
            rows.append(_mc_row(f"c7.projection_half[d={d},beta={beta:g}]", proj, exact))
            direct = mc_angle_sum_direct(d, beta, samples, seed=derive_seed(seed, 7, d, k, 1),
                                         workers=workers)
            rows.append(_mc_row(f"c7.direct[d={d},beta={beta:g}]", direct, exact))
    return _timed(rows, "c7.runtime", t0, 300.0)


def criterion_8(seed: int = DEFAULT_SEED, workers=None,
                samples: int = MC_SAMPLES) -> list[ResultRow]:
    t0 = time.perf_counter()
    rows = []
    for k, (n, d, beta) in enumerate(FACET_GRID):
        spec = PolytopeSpec(n, d, beta)
        est = mc_facet_count(spec, samples, derive_seed(seed, 8, k), workers)
        rows.append(_mc_row(f"c8.facets[n={n},d={d},beta={beta:g}]", est,
                            expected_facets(spec)))
    return _timed(rows, "c8.runtime", t0, 300.0)


def fixed_tetrahedra(seed: int, count: int = 20) -> np.ndarray:
    """``count`` tetrahedra with vertices uniform in the unit ball."""
    return sample_beta_points(3, 0.0, (count, 4), RngState(derive_seed(seed, 99)))


def criterion_9(seed: int = DEFAULT_SEED, workers=None, n_dirs: int = 100_000) -> list[ResultRow]:
    orthant3 = np.vstack([np.zeros(3), np.eye(3)])
    orthant4 = np.vstack([np.zeros(4), np.eye(4)])
    rows = [_close("c9.orthant_d3_exact", vertex_solid_angles_3d_batch(orthant3)[0],
                   1 / 8, 1e-15)]
    est = vertex_solid_angle_mc(orthant4, 0, 1_000_000, RngState(derive_seed(seed, 9, 0)))
    rows.append(_mc_row("c9.orthant_d4_mc", est, 1 / 16))
    for t, tet in enumerate(fixed_tetrahedra(seed)):
        exact = vertex_solid_angles_3d_batch(tet)
        for i in range(4):
            est = vertex_solid_angle_mc(tet, i, n_dirs, RngState(derive_seed(seed, 9, 1, t, i)))
            rows.append(_mc_row(f"c9.tetra_vertex[{t},{i}]", est, exact[i]))
    return rows


def _beta_cdf_by_quadrature(beta: float, h: float) -> float:
    """c_{1,beta} * int_{-1}^h (1-x^2)^beta dx, integrating from the nearer end.

    x = -1 + t^2 (or x = 1 - t^2 from the top) removes the endpoint
    singularity for beta < 0.
    """
    c = math.exp(log_c(1, beta))

    def tail(width):
        if width <= 0:
            return 0.0
        f = lambda t: 2 * t ** (2 * beta + 1) * (2 - t * t) ** beta  # noqa: E731
        return integrate_adaptive(f, 0.0, math.sqrt(width), 1e-13).value

    if h <= 0:
        return c * tail(1 + h)
    return 1.0 - c * tail(1 - h)


def criterion_10(seed: int = DEFAULT_SEED, workers=None) -> list[ResultRow]:
    rows = []
    worst, where = 0.0, ""
    for beta in (-0.5, 0.0, 0.5, 1.0, 2.5):
        for h in np.linspace(-1, 1, 21):
            err = abs(F_one_beta(beta, h) - _beta_cdf_by_quadrature(beta, float(h)))
            if err > worst:
                worst, where = err, f"beta={beta:g}, h={h:.1f}"
    rows.append(ResultRow("c10.F_one_beta_vs_quadrature", worst, None, 0.0, 1e-10,
                          worst <= 1e-10, f"max abs diff at {where}" if where else ""))

    phi = np.linspace(-math.pi / 2, math.pi / 2, 50)
    s, c = np.sin(phi), np.cos(phi)
    closed = {
        1: 1 + s,
        2: phi / 2 + math.pi / 4 + 0.5 * c * s,
        3: -s ** 3 / 12 + 0.75 * s + 0.25 * s * c ** 2 + 2 / 3,
        4: 3 * phi / 8 + 3 * math.pi / 16 + 0.5 * c * s + c ** 3 * s / 8 - c * s ** 3 / 8,
    }
    for m, expected in closed.items():
        err = float(np.max(np.abs(inner_trig_integral(m, phi) - expected)))
        rows.append(ResultRow(f"c10.inner_integral_closed_form[m={m}]", err, None, 0.0,
                              1e-12, err <= 1e-12, "max abs diff on 50-point grid"))
    return rows


def criterion_11(seed: int = DEFAULT_SEED, workers=None, n_dirs: int = 100_000) -> list[ResultRow]:
    rows = []
    for t, tet in enumerate(fixed_tetrahedra(seed)):
        est = mc_projection_prob_fixed(tet, n_dirs, derive_seed(seed, 11, t), workers)
        target = 2 * float(vertex_solid_angles_3d_batch(tet).sum())
        rows.append(_mc_row(f"c11.projection_vs_angle_sum[{t}]", est, target))
    return rows


QUICK: list[Callable[..., list[ResultRow]]] = [criterion_1_to_4, criterion_5, criterion_6,
                                               criterion_10]
FULL: list[Callable[..., list[ResultRow]]] = [criterion_1_to_4, criterion_5, criterion_6,
                                              criterion_7, criterion_8, criterion_9,
                                              criterion_10, criterion_11]


def run_suite(seed: int = DEFAULT_SEED, quick: bool = False, workers=None) -> list[ResultRow]:
    rows: list[ResultRow] = []
    for check in QUICK if quick else FULL:
        rows.extend(check(seed=seed, workers=workers))
    return rows
