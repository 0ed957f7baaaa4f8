"""Expected facet number of the convex hull of n i.i.d. beta points."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_math import DEFAULT_ABS_TOL, F_one_beta, QuadratureResult, integrate_adaptive


@dataclass(frozen=True)
class PolytopeSpec:
    n: int
    d: int
    beta: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 2:
            raise ValueError(f"d must be an integer >= 2, got {self.d!r}")
        if int(self.n) != self.n or self.n < self.d + 1:
            raise ValueError(f"need n >= d + 1 points, got n={self.n!r}, d={self.d}")
        b = float(self.beta)
        if not math.isfinite(b) or b < -1:
            raise ValueError(f"beta must be >= -1, got {self.beta!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "beta", b)


def log_facet_constant(n: int, d: int, beta: float) -> float:
    """Log of the constant in front of the facet integral."""
    lg = math.lgamma
    log_binom = lg(n + 1) - lg(d + 1) - lg(n - d + 1)
    k = 0.5 * d * (2 * beta + d)
    out = log_binom + math.log(2) - lg(0.5 * d) + lg(k + 1) - lg(k + 0.5)
    for i in range(1, d):
        out += lg(0.5 * (i + 1)) - lg(0.5 * i)
    return out


def expected_facets_result(spec: PolytopeSpec,
                           abs_tol: float = DEFAULT_ABS_TOL) -> QuadratureResult:
    """E f_{d-1} of the beta polytope described by ``spec``.

    The height integral over h in [-1, 1] is evaluated after h = sin(phi),
    which turns the weight (1-h^2)^(d*beta + (d^2-1)/2) dh into the bounded
    cos(phi)^(2*d*beta + d^2) dphi even at beta = -1.
    """
    n, d, beta = spec.n, spec.d, spec.beta
    log_const = log_facet_constant(n, d, beta)
    cos_power = 2 * d * beta + d * d
    cdf_beta = beta + 0.5 * (d - 1)
    k = n - d

    def integrand(phi):
        F = F_one_beta(cdf_beta, np.sin(phi))
        with np.errstate(divide="ignore"):
            powF = np.where(F > 0, np.exp(k * np.log(np.where(F > 0, F, 1.0))), 0.0)
        return np.cos(phi) ** cos_power * powF

    scale = math.exp(log_const)
    res = integrate_adaptive(integrand, -0.5 * math.pi, 0.5 * math.pi, abs_tol / scale)
    return QuadratureResult(scale * res.value, scale * res.abs_error_estimate, res.evaluations)


def expected_facets(spec: PolytopeSpec, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    return expected_facets_result(spec, abs_tol).value
