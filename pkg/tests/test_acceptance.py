"""Acceptance criteria 1 to 12, each at its stated tolerance.

Reference values are written out here in closed form rather than taken from
``betasimplex.checks``, so this file and the ``verify`` command are two
separate routes to the same verdicts.
"""

import json
import math
import subprocess
import sys
import time

import mpmath
import numpy as np
import pytest

from betasimplex.angle_sums import expected_angle_sum_table, expected_s0_d3, expected_s0_d4
from betasimplex.beta_polytopes import PolytopeSpec, expected_facets
from betasimplex.core_math import F_one_beta, inner_trig_integral
from betasimplex.estimators import (
    mc_angle_sum_direct,
    mc_facet_count,
    mc_projection_prob_fixed,
    mc_projection_simplex_prob,
)
from betasimplex.geometry import vertex_solid_angle_mc, vertex_solid_angles_3d_batch
from betasimplex.sampling import RngState, sample_beta_points

PI2 = math.pi ** 2
MC_N = 1_000_000


def timed(fn, *args):
    t0 = time.perf_counter()
    value = fn(*args)
    return value, time.perf_counter() - t0


@pytest.mark.criterion(1)
def test_c1_sphere_d3():
    value, seconds = timed(expected_s0_d3, -1.0)
    assert abs(value - 1 / 8) <= 1e-9 and seconds < 1.0


@pytest.mark.criterion(2)
def test_c2_ball_d3():
    value, seconds = timed(expected_s0_d3, 0.0)
    assert abs(value - 401 / 2560) <= 1e-9 and seconds < 1.0
    assert 401 / 2560 == 0.156640625


@pytest.mark.criterion(3)
def test_c3_sphere_d4():
    value, seconds = timed(expected_s0_d4, -1.0)
    assert abs(value - (539 / (288 * PI2) - 1 / 6)) <= 1e-9 and seconds < 1.0


@pytest.mark.criterion(4)
def test_c4_ball_d4():
    value, seconds = timed(expected_s0_d4, 0.0)
    assert abs(value - (1692197 / (846720 * PI2) - 1 / 6)) <= 1e-9 and seconds < 1.0


@pytest.mark.criterion(5)
@pytest.mark.parametrize("d, beta, k, target", [
    (3, -1.0, 1, 9 / 8),
    (3, 0.0, 1, 2961 / 2560),
    (4, -1.0, 1, 539 / (96 * PI2)),
    (4, -1.0, 2, 5 / 3 + 539 / (144 * PI2)),
    (4, 0.0, 1, 1692197 / (282240 * PI2)),
    (4, 0.0, 2, 5 / 3 + 1692197 / (423360 * PI2)),
])
def test_c5_derived_tables(d, beta, k, target):
    assert abs(expected_angle_sum_table(d, beta).s[k] - target) <= 1e-9


@pytest.mark.criterion(6)
def test_c6_identity_suite():
    t0 = time.perf_counter()
    for beta in (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.0):
        f1 = expected_facets(PolytopeSpec(4, 2, beta + 0.5))
        f2 = expected_facets(PolytopeSpec(5, 3, beta + 0.5))
        assert abs(expected_s0_d3(beta) - (2 - f1 / 2)) <= 1e-9
        assert abs(expected_s0_d4(beta) - (1.5 - f2 / 4)) <= 1e-9
    assert time.perf_counter() - t0 < 10.0


EXACT_S0 = {
    (3, -1.0): 1 / 8,
    (3, 0.0): 401 / 2560,
    (3, 1.0): 21509 / 131072,
    (4, -1.0): 539 / (288 * PI2) - 1 / 6,
    (4, 0.0): 1692197 / (846720 * PI2) - 1 / 6,
    (4, 1.0): 8158585921 / (3995671680 * PI2) - 1 / 6,
}


@pytest.fixture(scope="module")
def c7_clock():
    return {"spent": 0.0}


@pytest.mark.criterion(7)
@pytest.mark.parametrize("d, beta", list(EXACT_S0))
def test_c7_monte_carlo_agreement(d, beta, c7_clock):
    t0 = time.perf_counter()
    target = EXACT_S0[d, beta]
    assert abs(target - (expected_s0_d3 if d == 3 else expected_s0_d4)(beta)) <= 1e-9
    seed = 7000 + 10 * d + int(beta + 1)
    proj = mc_projection_simplex_prob(d, beta, MC_N, seed=seed).scaled(0.5)
    direct = mc_angle_sum_direct(d, beta, MC_N, seed=seed + 500)
    c7_clock["spent"] += time.perf_counter() - t0
    assert abs(proj.mean - target) <= 4 * proj.std_error, proj
    assert abs(direct.mean - target) <= 4 * direct.std_error, direct
    if d == 3:
        assert proj.std_error == pytest.approx(2e-4, rel=0.5)
    assert proj.rejections < 10 and direct.rejections < 10
    assert c7_clock["spent"] < 300.0


@pytest.fixture(scope="module")
def c8_clock():
    return {"spent": 0.0}


@pytest.mark.criterion(8)
@pytest.mark.parametrize("n, d, beta", [(4, 2, -0.5), (6, 2, 0.0), (8, 2, 1.0),
                                        (5, 3, -0.5), (6, 3, 0.0)])
def test_c8_facet_monte_carlo(n, d, beta, c8_clock):
    t0 = time.perf_counter()
    spec = PolytopeSpec(n, d, beta)
    est = mc_facet_count(spec, MC_N, seed=8000 + 10 * n + d)
    c8_clock["spent"] += time.perf_counter() - t0
    assert abs(est.mean - expected_facets(spec)) <= 4 * est.std_error, est
    assert c8_clock["spent"] < 300.0


def random_tetrahedra(seed):
    return sample_beta_points(3, 0.0, (20, 4), RngState(seed))


@pytest.mark.criterion(9)
def test_c9_orthant_corners():
    orthant3 = np.vstack([np.zeros(3), np.eye(3)])
    assert abs(vertex_solid_angles_3d_batch(orthant3)[0] - 1 / 8) <= 1e-15
    orthant4 = np.vstack([np.zeros(4), np.eye(4)])
    est = vertex_solid_angle_mc(orthant4, 0, MC_N, RngState(9000))
    assert abs(est.mean - 1 / 16) <= 4 * est.std_error


@pytest.mark.criterion(9)
def test_c9_random_tetrahedra_exact_vs_mc():
    for t, tet in enumerate(random_tetrahedra(9001)):
        exact = vertex_solid_angles_3d_batch(tet)
        for i in range(4):
            est = vertex_solid_angle_mc(tet, i, 100_000, RngState(9002, 4 * t + i))
            assert abs(est.mean - exact[i]) <= 4 * est.std_error, (t, i, est, exact[i])


@pytest.mark.criterion(10)
@pytest.mark.parametrize("beta", [-0.5, 0.0, 0.5, 1.0, 2.5])
def test_c10_F_one_beta_vs_quadrature(beta):
    with mpmath.workdps(30):
        c = mpmath.gamma(beta + 1.5) / (mpmath.sqrt(mpmath.pi) * mpmath.gamma(beta + 1))
        for h in np.linspace(-1, 1, 21):
            ref = c * mpmath.quad(lambda x: (1 - x * x) ** beta, [-1, h])
            assert abs(F_one_beta(beta, h) - float(ref)) <= 1e-10


@pytest.mark.criterion(10)
def test_c10_inner_integral_closed_forms():
    phi = np.linspace(-math.pi / 2, math.pi / 2, 50)
    s, c = np.sin(phi), np.cos(phi)
    forms = {
        1: 1 + s,
        2: phi / 2 + math.pi / 4 + c * s / 2,
        3: -s ** 3 / 12 + 3 * s / 4 + s * c ** 2 / 4 + 2 / 3,
        4: 3 * phi / 8 + 3 * math.pi / 16 + c * s / 2 + c ** 3 * s / 8 - c * s ** 3 / 8,
    }
    for m, expected in forms.items():
        assert np.max(np.abs(inner_trig_integral(m, phi) - expected)) <= 1e-12


@pytest.mark.criterion(11)
def test_c11_projection_matches_angle_sum():
    for t, tet in enumerate(random_tetrahedra(11000)):
        est = mc_projection_prob_fixed(tet, 100_000, seed=11001 + t)
        target = 2 * vertex_solid_angles_3d_batch(tet).sum()
        assert abs(est.mean - target) <= 4 * est.std_error, (t, est, target)


@pytest.mark.criterion(12)
def test_c12_verify_is_byte_identical():
    cmd = [sys.executable, "-m", "betasimplex", "verify", "--suite", "paper", "--seed", "42",
           "--format", "json"]
    first = subprocess.run(cmd, capture_output=True, check=False)
    second = subprocess.run(cmd, capture_output=True, check=False)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    assert report["passed"] and report["seed"] == 42
