"""Fully discrete convolution-quadrature schemes and the eigenmode reference.

Both schemes solve, for n = 1..N,

    (w_0 M + K) U^n = M [ S_n U^0 (+ r_n b) - sum_{j=1}^{n} w_j U^{n-j} + F^n ]

with S_n = sum_{j<=n} w_j and r_n = sum_{j<=n} w_j tau (n - j) (wave case only).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import linalg

from . import _kernels
from .cqtime import CQWeightTable, UniformTimeGrid, corrected_source, cq_weights, ramp_term
from .femcore import UniformMesh1D, interpolate
from .specfun import mittag_leffler

__all__ = [
    "SolverConfig",
    "Trajectory",
    "evaluate_trajectory",
    "semidiscrete_exact",
    "solve",
    "solve_diffusion",
    "solve_wave",
]


class SingularSystemError(linalg.LinAlgError):
    """w_0 M + K is not positive definite."""


@dataclass(frozen=True)
class SolverConfig:
    alpha: float
    s: float
    grid: UniformTimeGrid
    mesh: UniformMesh1D
    # None: corrected source exactly when alpha > 1
    corrected_source: bool | None = None

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")
        if not 0.0 < self.s < 1.0:
            raise ValueError(f"s must lie in (0, 1), got {self.s}")

    @property
    def use_corrected_source(self) -> bool:
        if self.corrected_source is None:
            return self.alpha > 1.0
        return self.corrected_source

    @property
    def is_wave(self) -> bool:
        return self.alpha > 1.0


@dataclass(frozen=True)
class Trajectory:
    states: np.ndarray = field(repr=False)
    grid: UniformTimeGrid

    def __post_init__(self):
        self.states.setflags(write=False)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _factor(w0: float, K: np.ndarray, M: np.ndarray):
    try:
        return linalg.cho_factor(w0 * M + K, lower=True, check_finite=False)
    except linalg.LinAlgError as exc:
        raise SingularSystemError("w0*M + K is not SPD; check K and M") from exc


def _march(
    w: CQWeightTable,
    K: np.ndarray,
    M: np.ndarray,
    v_h: np.ndarray,
    extra: Callable[[int], np.ndarray],
) -> np.ndarray:
    n_steps = w.n
    v_h = np.asarray(v_h, dtype=float)
    states = np.empty((n_steps + 1, v_h.size))
    states[0] = v_h
    factor = _factor(w.weights[0], K, M)
    partial = w.partial_sums
    weights = np.ascontiguousarray(w.weights)
    for n in range(1, n_steps + 1):
        hist = _kernels.history_sum(weights, states, n)
        rhs = partial[n] * v_h - hist + extra(n)
        states[n] = linalg.cho_solve(factor, M @ rhs, check_finite=False)
    return states


def _no_source(dof):
    zero = np.zeros(dof)
    return lambda t: zero


def solve_diffusion(
    cfg: SolverConfig,
    K: np.ndarray,
    M: np.ndarray,
    v_h: np.ndarray,
    f_at: Callable[[float], np.ndarray] | None = None,
) -> Trajectory:
    """Fractional diffusion, alpha in (0, 1].

    ``f_at(t)`` returns the coefficient vector of P_h f(t) (None means f = 0).
    """
    if cfg.alpha > 1.0:
        raise ValueError(f"solve_diffusion needs alpha <= 1, got {cfg.alpha}")
    grid = cfg.grid
    w = cq_weights(cfg.alpha, grid.tau, grid.n_steps)
    f_at = f_at or _no_source(len(v_h))
    if cfg.use_corrected_source:
        raise ValueError("the corrected source is only wired into the diffusion-wave scheme")
    states = _march(w, K, M, v_h, lambda n: f_at(n * grid.tau))
    return Trajectory(states, grid)


def solve_wave(
    cfg: SolverConfig,
    K: np.ndarray,
    M: np.ndarray,
    v_h: np.ndarray,
    b_h: np.ndarray,
    f_integral: Callable[[float], np.ndarray] | None = None,
    f_at: Callable[[float], np.ndarray] | None = None,
) -> Trajectory:
    """Fractional diffusion-wave, alpha in (1, 2].

    With the corrected source (default) the load at step n is the cell average
    of f_h, built from ``f_integral(t) = int_0^t f_h``; otherwise ``f_at(t_n)``.
    alpha = 2 is accepted but carries no convergence guarantee and is untested.
    """
    if cfg.alpha <= 1.0:
        raise ValueError(f"solve_wave needs alpha > 1, got {cfg.alpha}")
    grid = cfg.grid
    tau = grid.tau
    w = cq_weights(cfg.alpha, tau, grid.n_steps)
    b_h = np.asarray(b_h, dtype=float)
    if cfg.use_corrected_source:
        if f_integral is None:
            if f_at is not None:
                raise ValueError("corrected source needs f_integral")
            f_integral = _no_source(len(v_h))
        source = lambda n: corrected_source(f_integral, tau, n)  # noqa: E731
    else:
        f_at = f_at or _no_source(len(v_h))
        source = lambda n: f_at(n * tau)  # noqa: E731

    def extra(n):
        return ramp_term(w, n) * b_h + source(n)

    states = _march(w, K, M, v_h, extra)
    return Trajectory(states, grid)


def solve(cfg, K, M, v_h, b_h=None, f_at=None, f_integral=None) -> Trajectory:
    """Dispatch on alpha to the diffusion or diffusion-wave scheme."""
    if cfg.is_wave:
        if b_h is None:
            b_h = np.zeros_like(v_h)
        return solve_wave(cfg, K, M, v_h, b_h, f_integral=f_integral, f_at=f_at)
    return solve_diffusion(cfg, K, M, v_h, f_at=f_at)


def semidiscrete_exact(K, M, v_h, b_h, alpha: float, t: float) -> np.ndarray:
    """Exact solution of M u^(alpha) + K u = 0 (Caputo) at time t via eigenmodes."""
    if t < 0:
        raise ValueError("t must be non-negative")
    v_h = np.asarray(v_h, dtype=float)
    if t == 0.0:
        return v_h.copy()
    try:
        lam, phi = linalg.eigh(K, M)
    except linalg.LinAlgError as exc:
        raise linalg.LinAlgError("generalized eigensolver failed") from exc
    z = -lam * t**alpha
    coef = (phi.T @ (M @ v_h)) * mittag_leffler(alpha, 1.0, z)
    if alpha > 1.0 and b_h is not None:
        coef = coef + (phi.T @ (M @ np.asarray(b_h, dtype=float))) * t * mittag_leffler(alpha, 2.0, z)
    return phi @ coef


def evaluate_trajectory(traj: Trajectory, mesh: UniformMesh1D, x, n: int):
    """P1 interpolant of U^n at x (zero at and beyond the endpoints)."""
    if not 0 <= n < len(traj.states):
        raise IndexError(f"step {n} outside 0..{len(traj.states) - 1}")
    out = interpolate(traj.states[n], mesh, x)
    return float(out) if np.ndim(out) == 0 else out
