"""Reproducible samplers for beta points and uniform directions.

Streams are derived from ``(seed, stream)`` through numpy's SeedSequence, so
chunk ``k`` of a run always sees the same numbers no matter which worker
processes it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngState:
    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def child(self, stream: int) -> "RngState":
        return RngState(self.seed, stream)


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error (sample std / sqrt(n))."""

    mean: float
    std_error: float
    n_samples: int
    seed: int
    rejections: int = 0

    def z_score(self, target: float) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == target else math.inf
        return (self.mean - target) / self.std_error

    def agrees_with(self, target: float, n_se: float = 4.0) -> bool:
        return abs(self.mean - target) <= n_se * self.std_error

    def scaled(self, factor: float) -> "MCEstimate":
        return MCEstimate(self.mean * factor, self.std_error * abs(factor),
                          self.n_samples, self.seed, self.rejections)

    @classmethod
    def from_samples(cls, values, seed: int, rejections: int = 0) -> "MCEstimate":
        v = np.asarray(values, dtype=float)
        n = v.size
        se = float(v.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(float(v.mean()), se, n, seed, rejections)


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    return np.random.default_rng(rng)


def sample_unit_directions(d: int, size, rng) -> np.ndarray:
    """Array of shape ``size + (d,)`` of uniform points on the unit sphere."""
    if d < 2:
        raise ValueError("need d >= 2")
    gen = _as_generator(rng)
    shape = (size,) if isinstance(size, int) else tuple(size)
    g = gen.standard_normal(shape + (d,))
    norms = np.linalg.norm(g, axis=-1, keepdims=True)
    bad = norms[..., 0] < 1e-150
    while np.any(bad):
        g[bad] = gen.standard_normal((int(bad.sum()), d))
        norms = np.linalg.norm(g, axis=-1, keepdims=True)
        bad = norms[..., 0] < 1e-150
    return g / norms


def sample_unit_direction(d: int, rng) -> np.ndarray:
    return sample_unit_directions(d, 1, rng)[0]


def sample_beta_variates(a: float, b: float, size, rng) -> np.ndarray:
    """Beta(a, b) variates as ``g_a / (g_a + g_b)`` with independent gammas."""
    if not (a > 0 and b > 0):
        raise ValueError(f"beta shape parameters must be > 0, got ({a}, {b})")
    gen = _as_generator(rng)
    ga = gen.standard_gamma(a, size)
    gb = gen.standard_gamma(b, size)
    return ga / (ga + gb)


def sample_beta_variate(a: float, b: float, rng) -> float:
    return float(sample_beta_variates(a, b, 1, rng)[0])


def sample_beta_points(d: int, beta: float, size, rng) -> np.ndarray:
    """Array of shape ``size + (d,)`` of i.i.d. points with density f_{d,beta}.

    Radius and direction are independent; |X|^2 ~ Beta(d/2, beta+1), and at
    beta = -1 every point sits on the unit sphere.
    """
    if not math.isfinite(beta) or beta < -1:
        raise ValueError(f"beta must be >= -1, got {beta!r}")
    gen = _as_generator(rng)
    shape = (size,) if isinstance(size, int) else tuple(size)
    omega = sample_unit_directions(d, shape, gen)
    if beta == -1:
        return omega
    r = np.sqrt(sample_beta_variates(0.5 * d, beta + 1.0, shape, gen))
    return omega * r[..., None]


def sample_beta_point(d: int, beta: float, rng) -> np.ndarray:
    return sample_beta_points(d, beta, 1, rng)[0]
