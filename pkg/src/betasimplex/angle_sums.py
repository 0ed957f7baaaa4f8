"""Expected vertex angle-sums of random beta simplices in dimensions 3 and 4.

Angles are measured as fractions of the full solid angle, so a plane
triangle has angle-sum 1/2. ``beta = -1`` means the vertices are uniform on
the unit sphere, ``beta = 0`` uniform in the unit ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core_math import (
    DEFAULT_ABS_TOL,
    QuadratureResult,
    inner_trig_integral,
    integrate_adaptive,
)


@dataclass(frozen=True)
class BetaParam:
    beta: float

    def __post_init__(self):
        b = float(self.beta)
        if not math.isfinite(b) or b < -1:
            raise ValueError(f"beta must be >= -1, got {self.beta!r}")
        object.__setattr__(self, "beta", b)

    @property
    def is_sphere(self) -> bool:
        return self.beta == -1.0


def _beta(beta) -> float:
    return beta.beta if isinstance(beta, BetaParam) else BetaParam(beta).beta


@dataclass(frozen=True)
class AngleSumTable:
    """Expected angle-sums ``s[k]`` at the k-faces, k = 0..d-1."""

    d: int
    beta: float
    s: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.d not in (3, 4):
            raise ValueError("only d = 3 and d = 4 are supported")
        if len(self.s) != self.d:
            raise ValueError(f"expected {self.d} angle-sums, got {len(self.s)}")

    @property
    def s0(self) -> float:
        return self.s[0]

    def relation_residuals(self) -> tuple[float, ...]:
        """Residuals of the Gram-Euler (and, for d=4, Dehn-Sommerville) relations."""
        if self.d == 3:
            s0, s1, s2 = self.s
            return (s0 - s1 + s2 - 1.0,)
        s0, s1, s2, s3 = self.s
        return (s0 - s1 + s2 - s3 + 1.0, -2 * s1 + 3 * s2 - 6 * s3 + 10.0)


def _outer_integral(log_prefactor: float, cos_power: float, inner_power: float,
                    abs_tol: float) -> QuadratureResult:
    """Prefactor times the outer integral, with the error estimate scaled alike."""
    def integrand(phi):
        inner = inner_trig_integral(inner_power, phi)
        return np.cos(phi) ** cos_power * inner * inner

    scale = math.exp(log_prefactor)
    res = integrate_adaptive(integrand, -0.5 * math.pi, 0.5 * math.pi, abs_tol / scale)
    return QuadratureResult(scale * res.value, scale * res.abs_error_estimate, res.evaluations)


def log_prefactor_d3(beta: float) -> float:
    lg = math.lgamma
    return (math.log(6) + 2 * lg(beta + 2.5) + lg(2 * beta + 4)
            - 1.5 * math.log(math.pi) - 2 * lg(beta + 2) - lg(2 * beta + 3.5))


def log_prefactor_d4(beta: float) -> float:
    lg = math.lgamma
    return (math.log(5) + 2 * lg(beta + 3) + lg(3 * beta + 7)
            - 1.5 * math.log(math.pi) - 2 * lg(beta + 2.5) - lg(3 * beta + 6.5))


def _shift(constant: float, res: QuadratureResult) -> QuadratureResult:
    return QuadratureResult(constant - res.value, res.abs_error_estimate, res.evaluations)


def expected_s0_d3_result(beta, abs_tol: float = DEFAULT_ABS_TOL) -> QuadratureResult:
    b = _beta(beta)
    return _shift(2.0, _outer_integral(log_prefactor_d3(b), 4 * b + 6, 2 * b + 3, abs_tol))


def expected_s0_d4_result(beta, abs_tol: float = DEFAULT_ABS_TOL) -> QuadratureResult:
    b = _beta(beta)
    return _shift(1.5, _outer_integral(log_prefactor_d4(b), 6 * b + 12, 2 * b + 4, abs_tol))


def expected_s0_d3(beta, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """E s_0 of the tetrahedron spanned by four i.i.d. f_{3,beta} points."""
    return expected_s0_d3_result(beta, abs_tol).value


def expected_s0_d4(beta, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    """E s_0 of the 4-simplex spanned by five i.i.d. f_{4,beta} points."""
    return expected_s0_d4_result(beta, abs_tol).value


def expected_s0_result(d: int, beta, abs_tol: float = DEFAULT_ABS_TOL) -> QuadratureResult:
    if d == 3:
        return expected_s0_d3_result(beta, abs_tol)
    if d == 4:
        return expected_s0_d4_result(beta, abs_tol)
    raise ValueError("only d = 3 and d = 4 are supported")


def table_from_s0(d: int, beta: float, s0: float) -> AngleSumTable:
    if d == 3:
        return AngleSumTable(3, beta, (s0, s0 + 1.0, 2.0))
    if d == 4:
        # solved from s0 - s1 + s2 - s3 = -1 and -2 s1 + 3 s2 - 6 s3 = -10, s3 = 5/2
        return AngleSumTable(4, beta, (s0, 3 * s0 + 0.5, 2 * s0 + 2.0, 2.5))
    raise ValueError("only d = 3 and d = 4 are supported")


def expected_s0(d: int, beta, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    return expected_s0_result(d, beta, abs_tol).value


def expected_angle_sum_table(d: int, beta, abs_tol: float = DEFAULT_ABS_TOL) -> AngleSumTable:
    b = _beta(beta)
    return table_from_s0(d, b, expected_s0(d, b, abs_tol))
