"""Special functions and adaptive quadrature.

Everything here is pure and works on numpy arrays where that is natural:
the outer integrands of the angle-sum formulas are evaluated on whole
vectors of quadrature nodes at once.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

DEFAULT_ABS_TOL = 1e-11

# 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK qk15 constants).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# Full symmetric node set; Gauss nodes are the odd-indexed Kronrod abscissae.
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS_W = np.zeros(15)
_GAUSS_W[1:7:2] = _WG[:3]
_GAUSS_W[7] = _WG[3]
_GAUSS_W[9:15:2] = _WG[2::-1]


class QuadratureError(ArithmeticError):
    """Adaptive integration ran out of subdivisions before meeting tolerance.

    The best available estimate is attached as ``result``.
    """

    def __init__(self, message: str, result: "QuadratureResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not (math.isfinite(self.abs_error_estimate) and self.abs_error_estimate >= 0):
            raise ValueError(f"invalid error estimate {self.abs_error_estimate!r}")
        if self.evaluations < 1:
            raise ValueError("evaluations must be >= 1")


def _check_finite_positive(name: str, x: float) -> None:
    if not math.isfinite(x) or x <= 0:
        raise ValueError(f"{name} must be finite and > 0, got {x!r}")


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real x > 0."""
    _check_finite_positive("x", x)
    return math.lgamma(x)


def log_c(d: int, beta: float) -> float:
    """Log of the normalising constant of the d-dimensional beta density.

    The density is ``c * (1 - |x|^2)**beta`` on the open unit ball, with
    ``c = Gamma(d/2 + beta + 1) / (pi**(d/2) * Gamma(beta + 1))``.
    It diverges at beta = -1, where the law degenerates to the uniform
    distribution on the sphere; callers must handle that case themselves.
    """
    if int(d) != d or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if not math.isfinite(beta) or beta <= -1:
        raise ValueError(f"beta must be > -1 for a normalisable density, got {beta!r}")
    return math.lgamma(d / 2 + beta + 1) - (d / 2) * math.log(math.pi) - math.lgamma(beta + 1)


def regularized_incomplete_beta(a: float, b: float, x):
    """I_x(a, b). ``x`` may be a scalar or an array with entries in [0, 1]."""
    _check_finite_positive("a", a)
    _check_finite_positive("b", b)
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any((xa < 0) | (xa > 1)):
        raise ValueError("x must lie in [0, 1]")
    out = special.betainc(a, b, xa)
    return float(out) if out.ndim == 0 else out


def F_one_beta(beta: float, h):
    """CDF of the one-dimensional beta distribution with parameter ``beta``.

    Equal to ``c_{1,beta} * int_{-1}^h (1 - x^2)^beta dx``; computed as
    ``I_{(1+h)/2}(beta+1, beta+1)`` after the substitution x = 2t - 1.
    """
    if not math.isfinite(beta) or beta <= -1:
        raise ValueError(f"beta must be > -1, got {beta!r}")
    ha = np.asarray(h, dtype=float)
    if np.any(~np.isfinite(ha)) or np.any((ha < -1) | (ha > 1)):
        raise ValueError("h must lie in [-1, 1]")
    t = np.clip(0.5 * (1.0 + ha), 0.0, 1.0)
    return regularized_incomplete_beta(beta + 1, beta + 1, t)


def _is_integer(m: float) -> bool:
    return float(m).is_integer()


def inner_trig_integral(m: float, phi):
    """``int_{-pi/2}^phi cos(t)**m dt`` for m >= 0, vectorised over ``phi``.

    Integer powers use the standard reduction
    ``J_m = cos^{m-1}(phi) sin(phi) / m + (m-1)/m * J_{m-2}``; other powers go
    through the one-dimensional beta CDF with parameter (m-1)/2.
    """
    if not math.isfinite(m) or m < 0:
        raise ValueError(f"m must be finite and >= 0, got {m!r}")
    p = np.asarray(phi, dtype=float)
    half_pi = 0.5 * math.pi
    if np.any(~np.isfinite(p)) or np.any((p < -half_pi) | (p > half_pi)):
        raise ValueError("phi must lie in [-pi/2, pi/2]")

    if _is_integer(m):
        k = int(m)
        s, c = np.sin(p), np.cos(p)
        j = p + half_pi if k % 2 == 0 else 1.0 + s
        for n in range(2 if k % 2 == 0 else 3, k + 1, 2):
            j = c ** (n - 1) * s / n + (n - 1) / n * j
    else:
        b = (m - 1) / 2
        j = F_one_beta(b, np.sin(p)) * math.exp(-log_c(1, b))
    j = np.asarray(j, dtype=float)
    return float(j) if j.ndim == 0 else j


def _kronrod_panel(f, a: float, b: float):
    center, half = 0.5 * (a + b), 0.5 * (b - a)
    fx = np.asarray(f(center + half * _NODES), dtype=float)
    if fx.shape != _NODES.shape:
        fx = np.broadcast_to(fx, _NODES.shape)
    if not np.all(np.isfinite(fx)):
        raise ValueError(f"integrand is not finite on [{a}, {b}]")
    k = half * float(_KRONROD_W @ fx)
    g = half * float(_GAUSS_W @ fx)
    return k, abs(k - g)


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    abs_tol: float = DEFAULT_ABS_TOL,
    max_intervals: int = 4000,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7/15) integration of ``f`` over [a, b].

    ``f`` is called with a 1-d array of nodes and must return an array of the
    same shape. The panel with the largest ``|K15 - G7|`` is bisected until the
    summed estimate drops below ``abs_tol``. Raises :class:`QuadratureError`
    (carrying the best estimate) once ``max_intervals`` panels are in use.
    """
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError(f"need finite a < b, got [{a}, {b}]")
    _check_finite_positive("abs_tol", abs_tol)

    value, err = _kronrod_panel(f, a, b)
    heap = [(-err, a, b, value)]
    total_value, total_err = value, err
    evaluations = 15
    while total_err > abs_tol:
        if len(heap) >= max_intervals:
            best = QuadratureResult(total_value, total_err, evaluations)
            raise QuadratureError(
                f"no convergence with {max_intervals} intervals "
                f"(error estimate {total_err:.3g} > {abs_tol:.3g})", best)
        neg_err, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _kronrod_panel(f, lo, mid)
        v2, e2 = _kronrod_panel(f, mid, hi)
        evaluations += 30
        heapq.heappush(heap, (-e1, lo, mid, v1))
        heapq.heappush(heap, (-e2, mid, hi, v2))
        # re-sum instead of updating in place so rounding never accumulates
        total_value = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    return QuadratureResult(total_value, total_err, evaluations)
