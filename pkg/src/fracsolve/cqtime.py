"""Backward-Euler convolution quadrature for the kernel z**alpha."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels

__all__ = [
    "CQWeightTable",
    "UniformTimeGrid",
    "corrected_source",
    "cq_weights",
    "discrete_rl",
    "ramp_term",
]


@dataclass(frozen=True)
class UniformTimeGrid:
    tau: float
    n_steps: int

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"time step must be positive, got {self.tau}")
        if self.n_steps < 1:
            raise ValueError(f"need at least one step, got {self.n_steps}")

    @classmethod
    def from_end(cls, t_end: float, tau: float) -> "UniformTimeGrid":
        """Grid with N = round(t_end / tau) steps; tau must divide t_end."""
        n = int(round(t_end / tau))
        if n < 1 or abs(n * tau - t_end) > 1e-9 * max(1.0, t_end):
            raise ValueError(f"tau={tau} does not divide t_end={t_end}")
        return cls(t_end / n, n)

    @property
    def t_end(self) -> float:
        return self.tau * self.n_steps

    @property
    def times(self) -> np.ndarray:
        return self.tau * np.arange(self.n_steps + 1)


@dataclass(frozen=True)
class CQWeightTable:
    """Coefficients of ((1 - xi) / tau)**alpha up to xi**N."""

    alpha: float
    tau: float
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.weights.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.weights) - 1

    @property
    def partial_sums(self) -> np.ndarray:
        return np.cumsum(self.weights)


def cq_weights(alpha: float, tau: float, n: int) -> CQWeightTable:
    """Weights w_0..w_n from w_0 = tau^-alpha, w_j = (1 - (alpha+1)/j) w_{j-1}."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must lie in (0, 2], got {alpha}")
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    w = _kernels.cq_weights(float(alpha), float(tau), int(n))
    return CQWeightTable(float(alpha), float(tau), np.asarray(w))


def discrete_rl(w: CQWeightTable, samples) -> float:
    """sum_j w_j g(t_n - j tau) with ``samples[j] = g(t_n - j tau)``."""
    samples = np.asarray(samples, dtype=float)
    n = len(samples) - 1
    if n > w.n:
        raise ValueError(f"{len(samples)} samples but the table only holds {w.n + 1} weights")
    return float(np.dot(w.weights[: n + 1], samples))


def ramp_term(w: CQWeightTable, n: int) -> float:
    """Discrete Riemann-Liouville derivative of t -> t at t_n."""
    if n > w.n:
        raise ValueError(f"n={n} exceeds table length {w.n}")
    j = np.arange(n + 1)
    return float(np.dot(w.weights[: n + 1], w.tau * (n - j)))


def corrected_source(f_integral: Callable[[float], np.ndarray], tau: float, n: int) -> np.ndarray:
    """Average of f over (t_{n-1}, t_n] from its antiderivative."""
    if n < 1:
        raise ValueError("corrected source is defined for n >= 1")
    upper = np.asarray(f_integral(n * tau), dtype=float)
    lower = np.asarray(f_integral((n - 1) * tau), dtype=float)
    return (upper - lower) / tau
