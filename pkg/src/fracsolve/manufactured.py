"""Closed-form solutions u(x, t) = h(t) (1 - x^2)_+^s C_k^(s+1/2)(x) on (-1, 1).

They rest on (-Delta)^s [(1 - x^2)_+^s C_k^(s+1/2)] = mu C_k^(s+1/2) with
mu = Gamma(2s + k + 1) / k!.  Case ``a`` uses h(t) = E_{alpha,1}(-t^alpha),
whose Caputo derivative is -h; case ``b`` uses h(t) = sin t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .specfun import caputo_sin, caputo_sin_integral, gamma_fn, gegenbauer, mittag_leffler

__all__ = [
    "ManufacturedCase",
    "SeparableTerm",
    "boundary_weight",
    "mu_coefficient",
]


def mu_coefficient(s: float, k: int) -> float:
    return gamma_fn(2.0 * s + k + 1.0) / math.factorial(k)


def boundary_weight(s: float, x):
    """(1 - x^2)_+^s."""
    x = np.asarray(x, dtype=float)
    return np.maximum(1.0 - x * x, 0.0) ** s


class SeparableTerm(NamedTuple):
    """One summand time(t) * space(x) of a source term, with int_0^t time."""

    time: Callable[[float], float]
    time_integral: Callable[[float], float]
    space: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ManufacturedCase:
    case_id: str
    alpha: float
    s: float
    k: int = 3

    def __post_init__(self):
        if self.case_id not in ("a", "b"):
            raise ValueError(f"unknown case {self.case_id!r}; expected 'a' or 'b'")
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")
        if self.k < 0:
            raise ValueError("polynomial degree must be non-negative")

    @property
    def time_profile(self) -> str:
        return "mittag_leffler_decay" if self.case_id == "a" else "sine"

    @property
    def mu(self) -> float:
        return mu_coefficient(self.s, self.k)

    # -- spatial factors -------------------------------------------------

    def g(self, x):
        return gegenbauer(self.k, self.s + 0.5, x)

    def profile(self, x):
        """omega^s(x) g_k(x): the spatial shape of the solution."""
        return boundary_weight(self.s, x) * self.g(x)

    # -- time factors ----------------------------------------------------

    def h(self, t: float) -> float:
        if self.case_id == "a":
            return mittag_leffler(self.alpha, 1.0, -(t**self.alpha))
        return math.sin(t)

    def h_integral(self, t: float) -> float:
        if t == 0.0:
            return 0.0
        if self.case_id == "a":
            return t * mittag_leffler(self.alpha, 2.0, -(t**self.alpha))
        return 1.0 - math.cos(t)

    def h_caputo(self, t: float) -> float:
        if self.case_id == "a":
            return -self.h(t)
        return caputo_sin(self.alpha, t)

    def h_caputo_integral(self, t: float) -> float:
        if t == 0.0:
            return 0.0
        if self.case_id == "a":
            return -self.h_integral(t)
        return caputo_sin_integral(self.alpha, t)

    # -- pointwise data ----------------------------------------------------

    def exact(self, x, t: float):
        return self.h(t) * self.profile(x)

    def source(self, x, t: float):
        """f = (Caputo h)(t) omega^s g + h(t) mu g."""
        if self.case_id == "a":
            return self.h(t) * self.g(x) * (self.mu - boundary_weight(self.s, x))
        return self.h_caputo(t) * self.profile(x) + math.sin(t) * self.mu * self.g(x)

    def source_antiderivative(self, x, t: float):
        """int_0^t f(x, r) dr in closed form."""
        return self.h_caputo_integral(t) * self.profile(x) + self.h_integral(t) * self.mu * self.g(x)

    def source_terms(self) -> list[SeparableTerm]:
        """f as a sum of separable terms, so each spatial factor is projected once."""
        mu = self.mu
        return [
            SeparableTerm(self.h_caputo, self.h_caputo_integral, self.profile),
            SeparableTerm(self.h, self.h_integral, lambda x: mu * self.g(x)),
        ]

    def initial_data(self) -> tuple[Callable, Callable | None]:
        """(v, b): u(., 0) and, for alpha > 1, the initial velocity."""
        h0 = self.h(0.0)

        def v(x):
            return h0 * self.profile(x)

        if self.alpha <= 1.0:
            return v, None
        # case a: d/dt E_{alpha,1}(-t^alpha) -> 0 at t = 0 for alpha > 1; case b: cos 0 = 1
        slope = 0.0 if self.case_id == "a" else 1.0

        def b(x):
            return slope * self.profile(x)

        return v, b
